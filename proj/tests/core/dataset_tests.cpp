#include "ocf/dataset.hpp"
#include "ocf/errors.hpp"

#include <doctest.h>

using namespace ocf;

namespace {

Dataset tiny() {
    Dataset d;
    d.feature_names = {"f0", "f1"};
    d.features = {0.0, 0.5,
                  1.0, 0.5,
                  0.25, 1.0};
    d.labels = {0, 1, 1};
    return d;
}

}  // namespace

TEST_CASE("min-max scaling maps columns onto [0,1]") {
    // Two columns: one spanning [2,6], one constant.
    std::vector<double> m{2.0, 7.0,
                          4.0, 7.0,
                          6.0, 7.0};
    ScalingParams prm = fit_scaling(m, 3, 2);
    CHECK(prm.min_value == std::vector<double>{2.0, 7.0});
    CHECK(prm.span == std::vector<double>{4.0, 0.0});

    auto scaled = normalize_with(prm, m, 3, 2);
    CHECK(scaled == std::vector<double>{0.0, 0.0, 0.5, 0.0, 1.0, 0.0});
}

TEST_CASE("normalization with foreign parameters clips to [0,1]") {
    ScalingParams prm;
    prm.min_value = {2.0};
    prm.span = {4.0};
    std::vector<double> fresh{0.0, 8.0, 4.0};
    auto scaled = normalize_with(prm, fresh, 3, 1);
    CHECK(scaled == std::vector<double>{0.0, 1.0, 0.5});
}

TEST_CASE("majority class resolves ties toward class 0") {
    Dataset d = tiny();
    CHECK(d.majority_class() == 1);
    d.labels = {0, 1, 0};
    CHECK(d.majority_class() == 0);
    d.labels = {1, 0, 1};
    d.features = {0, 0, 0, 0, 0, 0};
    CHECK(d.majority_class() == 1);

    Dataset even;
    even.feature_names = {"x"};
    even.features = {0.1, 0.9};
    even.labels = {1, 0};
    CHECK(even.majority_class() == 0);
}

TEST_CASE("row selection keeps names and provenance") {
    Dataset d = tiny();
    d.provenance.source = "unit";
    Dataset s = d.select({2, 0});
    CHECK(s.size() == 2);
    CHECK(s.labels == std::vector<int>{1, 0});
    CHECK(s.at(0, 1) == 1.0);
    CHECK(s.at(1, 0) == 0.0);
    CHECK(s.feature_names == d.feature_names);
    CHECK(s.provenance.source == "unit");

    CHECK_THROWS_AS(d.select({3}), DataError);
}

TEST_CASE("validation rejects malformed data") {
    Dataset ok = tiny();
    CHECK_NOTHROW(ok.validate());

    Dataset bad_label = tiny();
    bad_label.labels[1] = 2;
    CHECK_THROWS_AS(bad_label.validate(), DataError);

    Dataset bad_range = tiny();
    bad_range.features[0] = 1.5;
    CHECK_THROWS_AS(bad_range.validate(), DataError);

    Dataset bad_shape = tiny();
    bad_shape.features.pop_back();
    CHECK_THROWS_AS(bad_shape.validate(), DataError);
}
