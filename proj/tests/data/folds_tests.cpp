#include "ocf/folds.hpp"

#include "ocf/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

using namespace ocf;

TEST_CASE("eight observations split into four folds of two") {
    const FoldPlan plan = make_folds(8, 7);
    for (const auto& repeat_folds : plan.folds) {
        for (const auto& fold : repeat_folds) CHECK(fold.size() == 2);
    }
}

TEST_CASE("too few observations are rejected") {
    CHECK_THROWS_AS(make_folds(7, 1), ConfigError);
}

TEST_CASE("the same seed reproduces the plan, a different seed moves it") {
    const FoldPlan a = make_folds(40, 3);
    const FoldPlan b = make_folds(40, 3);
    const FoldPlan c = make_folds(40, 4);
    CHECK(a.folds == b.folds);
    CHECK(a.folds != c.folds);
    CHECK(fold_plan_to_text(a) == fold_plan_to_text(b));
}

TEST_CASE("270 observations yield fold sizes 68,68,67,67") {
    const FoldPlan plan = make_folds(270, 11);
    for (const auto& repeat_folds : plan.folds) {
        std::vector<std::size_t> sizes;
        for (const auto& fold : repeat_folds) sizes.push_back(fold.size());
        CHECK(sizes == (std::vector<std::size_t>{68, 68, 67, 67}));
    }
}

TEST_CASE("each repeat partitions every observation exactly once") {
    const FoldPlan plan = make_folds(29, 5);
    CHECK_NOTHROW(plan.validate());
    for (const auto& repeat_folds : plan.folds) {
        std::set<std::size_t> seen;
        for (const auto& fold : repeat_folds) {
            for (std::size_t index : fold) {
                CHECK(seen.insert(index).second);
                CHECK(index < 29);
            }
        }
        CHECK(seen.size() == 29);
    }
}

TEST_CASE("every observation is tested exactly once per repeat") {
    const FoldPlan plan = make_folds(21, 9);
    for (int repeat = 0; repeat < plan.repeat_count; ++repeat) {
        std::set<std::size_t> tested;
        for (int rotation = 0; rotation < plan.rotation_count(); ++rotation) {
            for (std::size_t index : plan.triple(repeat, rotation).test) {
                CHECK(tested.insert(index).second);
            }
        }
        CHECK(tested.size() == 21);
    }
}

TEST_CASE("a rotation's roles cover the folds disjointly") {
    const FoldPlan plan = make_folds(26, 2);
    for (int repeat = 0; repeat < plan.repeat_count; ++repeat) {
        for (int rotation = 0; rotation < plan.rotation_count(); ++rotation) {
            const FoldTriple triple = plan.triple(repeat, rotation);
            CHECK(triple.test ==
                  plan.folds[static_cast<std::size_t>(repeat)]
                            [static_cast<std::size_t>(rotation)]);
            CHECK(triple.validation ==
                  plan.folds[static_cast<std::size_t>(repeat)]
                            [static_cast<std::size_t>((rotation + 1) % 4)]);
            CHECK(std::is_sorted(triple.train.begin(), triple.train.end()));

            std::set<std::size_t> all(triple.train.begin(), triple.train.end());
            for (std::size_t index : triple.validation) CHECK(all.insert(index).second);
            for (std::size_t index : triple.test) CHECK(all.insert(index).second);
            CHECK(all.size() == 26);
            CHECK(triple.train.size() >= triple.validation.size());
        }
    }
}

TEST_CASE("rotation and repeat indices are range-checked") {
    const FoldPlan plan = make_folds(12, 0);
    CHECK_THROWS_AS(plan.triple(-1, 0), ConfigError);
    CHECK_THROWS_AS(plan.triple(0, 4), ConfigError);
    CHECK_THROWS_AS(plan.triple(5, 0), ConfigError);
}

TEST_CASE("the audit rendering is stable and complete") {
    const FoldPlan plan = make_folds(10, 123);
    const std::string text = fold_plan_to_text(plan);
    CHECK(text.find("seed 123") != std::string::npos);
    CHECK(text.find("observations 10") != std::string::npos);
    CHECK(text.find("repeat 4 fold 3:") != std::string::npos);
    CHECK(fold_plan_to_text(plan) == text);
}
