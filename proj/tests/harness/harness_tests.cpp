#include "ocf/errors.hpp"
#include "ocf/harness.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

using namespace ocf;

namespace {

std::string driver_path() { return std::string(OCF_REPO_ROOT) + "/tools/solve_lp.py"; }

SolverConfig driver_config() {
    SolverConfig cfg;
    cfg.binary_path = driver_path();
    cfg.time_limit_s = 60;
    cfg.workspace_root =
        (std::filesystem::temp_directory_path() / "ocf-harness-tests").string();
    return cfg;
}

// Sixteen points on a 4x4 grid, labeled by a vertical boundary at 0.5 with
// one contrarian corner so trees of different budgets disagree.
Dataset toy_grid() {
    Dataset d;
    d.feature_names = {"x0", "x1"};
    const double ticks[4] = {0.1, 0.35, 0.65, 0.9};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            d.features.push_back(ticks[a]);
            d.features.push_back(ticks[b]);
            int label = ticks[a] < 0.5 ? 0 : 1;
            if (a == 0 && b == 0) label = 1;
            d.labels.push_back(label);
        }
    }
    d.provenance.source = "toy-grid";
    return d;
}

// Twenty-four points with a diagonal-ish pattern plus label noise, so fold
// composition genuinely moves the per-fold accuracies.
Dataset noisy_blobs() {
    Dataset d;
    d.feature_names = {"u", "v"};
    for (int i = 0; i < 24; ++i) {
        const double u = (i % 6) / 5.0;
        const double v = (i / 6) / 3.0;
        d.features.push_back(u);
        d.features.push_back(v);
        int label = (u + v) > 0.8 ? 1 : 0;
        if (i % 7 == 0) label = 1 - label;
        d.labels.push_back(label);
    }
    d.provenance.source = "noisy-blobs";
    return d;
}

ExperimentSpec base_spec(Dataset data) {
    ExperimentSpec spec;
    spec.dataset = std::move(data);
    spec.repeat_count = 1;
    spec.rotation_count = 1;
    spec.methods = {Method::Cart};
    return spec;
}

bool same_except_timing(const ExperimentRecord& a, const ExperimentRecord& b) {
    return a.repeat == b.repeat && a.rotation == b.rotation && a.method == b.method &&
           a.failed == b.failed && a.error == b.error && a.chosen_budget == b.chosen_budget &&
           a.chosen_candidate == b.chosen_candidate && a.subset_seed == b.subset_seed &&
           a.validation_accuracy == b.validation_accuracy &&
           a.test_accuracy == b.test_accuracy && a.solve_status == b.solve_status &&
           a.gap == b.gap && a.solve_count == b.solve_count &&
           a.time_limited_count == b.time_limited_count;
}

}  // namespace

TEST_CASE("method labels round-trip through the parser, case-insensitively") {
    for (Method m : all_methods()) {
        CHECK(method_from_name(method_name(m)) == m);
    }
    CHECK(method_from_name("cart") == Method::Cart);
    CHECK(method_from_name("3-rf") == Method::SmallForest);
    CHECK(method_from_name("3-ocf") == Method::JointForest);
    CHECK_THROWS_AS(method_from_name("boosting"), ConfigError);
}

TEST_CASE("spec validation rejects each malformed field") {
    ExperimentSpec good = base_spec(toy_grid());
    CHECK_NOTHROW(good.validate());

    ExperimentSpec s = good;
    s.methods.clear();
    CHECK_THROWS_AS(s.validate(), ConfigError);

    s = good;
    s.methods = {Method::Cart, Method::Cart};
    CHECK_THROWS_AS(s.validate(), ConfigError);

    s = good;
    s.split_budgets.clear();
    CHECK_THROWS_AS(s.validate(), ConfigError);

    s = good;
    s.split_budgets = {0};
    CHECK_THROWS_AS(s.validate(), ConfigError);

    s = good;
    s.split_budgets = {2, 2};
    CHECK_THROWS_AS(s.validate(), ConfigError);

    s = good;
    s.repeat_count = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.repeat_count = 6;
    CHECK_THROWS_AS(s.validate(), ConfigError);

    s = good;
    s.rotation_count = 5;
    CHECK_THROWS_AS(s.validate(), ConfigError);

    s = good;
    s.joint_tree_count = 2;
    CHECK_THROWS_AS(s.validate(), ConfigError);

    s = good;
    s.downsample_candidates = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);

    s = good;
    s.dataset = Dataset{};
    s.manifest_path.clear();
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("one repeat, one rotation, one method yields exactly one record") {
    ExperimentSpec spec = base_spec(toy_grid());
    const ExperimentResult result = run_experiment(spec);

    REQUIRE(result.records.size() == 1);
    const ExperimentRecord& rec = result.records[0];
    CHECK(rec.repeat == 0);
    CHECK(rec.rotation == 0);
    CHECK(rec.method == Method::Cart);
    CHECK_FALSE(rec.failed);
    CHECK(std::count(spec.split_budgets.begin(), spec.split_budgets.end(), rec.chosen_budget) ==
          1);
    CHECK(rec.validation_accuracy >= 0.0);
    CHECK(rec.validation_accuracy <= 100.0);
    CHECK(rec.test_accuracy >= 0.0);
    CHECK(rec.test_accuracy <= 100.0);
    CHECK(rec.solve_count == 0);
    CHECK(rec.subset_seed == 0);
    CHECK(rec.chosen_candidate == -1);
}

TEST_CASE("identical seeds reproduce every record and the CSV byte for byte") {
    ExperimentSpec spec = base_spec(noisy_blobs());
    spec.methods = {Method::Cart, Method::SmallForest, Method::LargeForest};
    spec.large_forest_trees = 40;  // keep the test quick
    spec.repeat_count = 2;
    spec.rotation_count = 2;
    spec.seed = 7;

    const ExperimentResult first = run_experiment(spec);
    const ExperimentResult second = run_experiment(spec);

    REQUIRE(first.records.size() == second.records.size());
    REQUIRE(first.records.size() == 2 * 2 * 3);
    for (std::size_t i = 0; i < first.records.size(); ++i)
        CHECK(same_except_timing(first.records[i], second.records[i]));
    CHECK(summarize(first).csv == summarize(second).csv);

    ExperimentSpec other = spec;
    other.seed = 8;
    CHECK(summarize(run_experiment(other)).csv != summarize(first).csv);
}

TEST_CASE("records arrive ordered by repeat, rotation, then method") {
    ExperimentSpec spec = base_spec(noisy_blobs());
    spec.methods = {Method::Cart, Method::SmallForest};
    spec.repeat_count = 2;
    spec.rotation_count = 3;

    const ExperimentResult result = run_experiment(spec);
    REQUIRE(result.records.size() == 2 * 3 * 2);
    std::size_t idx = 0;
    for (int r = 0; r < 2; ++r) {
        for (int k = 0; k < 3; ++k) {
            for (Method m : spec.methods) {
                const ExperimentRecord& rec = result.records[idx++];
                CHECK(rec.repeat == r);
                CHECK(rec.rotation == k);
                CHECK(rec.method == m);
                CHECK(rec.validation_accuracy >= 0.0);
                CHECK(rec.validation_accuracy <= 100.0);
                if (m == Method::SmallForest) {
                    CHECK(rec.chosen_budget == 0);
                    CHECK(rec.subset_seed != 0);
                } else {
                    CHECK(rec.chosen_budget >= 1);
                }
            }
        }
    }
}

TEST_CASE("aggregates recompute from the raw records") {
    ExperimentResult result;
    result.dataset_name = "by-hand";
    result.observation_count = 10;
    result.methods = {Method::Cart, Method::Oct};
    result.repeat_count = 1;
    result.rotation_count = 3;

    ExperimentRecord rec;
    rec.method = Method::Cart;
    rec.test_accuracy = 70.0;
    result.records.push_back(rec);
    rec.rotation = 1;
    rec.test_accuracy = 90.0;
    result.records.push_back(rec);
    rec.rotation = 2;
    rec.failed = true;
    rec.error = "training exploded, sadly";
    result.records.push_back(rec);

    rec = ExperimentRecord{};
    rec.method = Method::Oct;
    rec.failed = true;
    rec.error = "no solver, no luck";
    rec.solve_count = 7;
    rec.time_limited_count = 2;
    result.records.push_back(rec);

    const std::vector<MethodSummary> sums = result.summaries();
    REQUIRE(sums.size() == 2);

    CHECK(sums[0].method == Method::Cart);
    CHECK(sums[0].cell_count == 3);
    CHECK(sums[0].failed_count == 1);
    CHECK(sums[0].test_accuracies == std::vector<double>{70.0, 90.0});
    CHECK(sums[0].mean_test_accuracy == doctest::Approx(80.0));
    CHECK(sums[0].std_test_accuracy == doctest::Approx(14.1421356).epsilon(1e-6));
    CHECK_FALSE(sums[0].fully_failed());

    CHECK(sums[1].method == Method::Oct);
    CHECK(sums[1].fully_failed());
    CHECK(sums[1].solve_count == 7);
    CHECK(sums[1].time_limited_count == 2);
    CHECK(result.any_method_fully_failed());
}

TEST_CASE("mean-std formatting matches the two-decimal convention") {
    CHECK(format_mean_std({80.0}) == "80.00 ± 0.00");
    CHECK(format_mean_std({70.0, 90.0}) == "80.00 ± 14.14");
    CHECK(format_mean_std({}) == "n/a");
}

TEST_CASE("the report renders a method column grid and failure footnotes") {
    ExperimentResult result;
    result.dataset_name = "by-hand";
    result.observation_count = 10;
    result.seed = 3;
    result.repeat_count = 1;
    result.rotation_count = 2;
    result.methods = {Method::Cart, Method::Oct};

    ExperimentRecord rec;
    rec.method = Method::Cart;
    rec.test_accuracy = 70.0;
    result.records.push_back(rec);
    rec.rotation = 1;
    rec.test_accuracy = 90.0;
    result.records.push_back(rec);

    rec = ExperimentRecord{};
    rec.method = Method::Oct;
    rec.failed = true;
    rec.error = "solver said: no, thanks";
    result.records.push_back(rec);
    rec.rotation = 1;
    result.records.push_back(rec);

    const ExperimentReport report = summarize(result);

    CHECK(report.table.find("80.00 ± 14.14") != std::string::npos);
    CHECK(report.table.find("CART") != std::string::npos);
    CHECK(report.table.find("OCT: 0/2 cells usable -- METHOD FAILED") != std::string::npos);

    // The error text contains a comma, so its CSV cell must be quoted.
    CHECK(report.csv.find("\"solver said: no, thanks\"") != std::string::npos);
    CHECK(report.csv.rfind("repeat,rotation,method,", 0) == 0);
    // Header plus one line per record, each ending in a newline.
    CHECK(std::count(report.csv.begin(), report.csv.end(), '\n') == 5);
    // No wall-clock column anywhere: reruns must reproduce this byte stream.
    CHECK(report.csv.find("wall") == std::string::npos);

    ExperimentResult empty;
    CHECK_THROWS_AS(summarize(empty), ConfigError);
}

TEST_CASE("a dead solver fails the MILP column but never the run") {
    ExperimentSpec spec = base_spec(toy_grid());
    spec.methods = {Method::Cart, Method::Oct};
    spec.split_budgets = {1, 2};
    spec.solver.binary_path = "/nonexistent/solver-binary";

    const ExperimentResult result = run_experiment(spec);
    REQUIRE(result.records.size() == 2);

    const ExperimentRecord& cart = result.records[0];
    CHECK_FALSE(cart.failed);

    const ExperimentRecord& oct = result.records[1];
    CHECK(oct.failed);
    CHECK_FALSE(oct.error.empty());

    CHECK(result.any_method_fully_failed());
    const ExperimentReport report = summarize(result);
    CHECK(report.table.find("METHOD FAILED") != std::string::npos);
}

TEST_CASE("the MILP methods train, select budgets and score through a live solver") {
    ExperimentSpec spec = base_spec(toy_grid());
    spec.methods = {Method::Oct, Method::JointForest};
    spec.split_budgets = {1, 3};
    spec.tree_depth = 2;
    spec.solver = driver_config();

    const ExperimentResult result = run_experiment(spec);
    REQUIRE(result.records.size() == 2);

    for (const ExperimentRecord& rec : result.records) {
        INFO(method_name(rec.method), ": ", rec.error);
        CHECK_FALSE(rec.failed);
        CHECK(rec.solve_count == 2);
        CHECK((rec.chosen_budget == 1 || rec.chosen_budget == 3));
        CHECK(has_assignment(rec.solve_status));
        CHECK(rec.validation_accuracy >= 0.0);
        CHECK(rec.validation_accuracy <= 100.0);
        CHECK(rec.test_accuracy >= 0.0);
        CHECK(rec.test_accuracy <= 100.0);
        // The training fold (8 points) is below the downsample size, so the
        // joint forest trains on the whole fold: no subset seed, no slot.
        CHECK(rec.subset_seed == 0);
        CHECK(rec.chosen_candidate == -1);
    }
    CHECK_FALSE(result.any_method_fully_failed());
}

TEST_CASE("downsampling draws distinct seeded subsets when the fold is large enough") {
    ExperimentSpec spec = base_spec(noisy_blobs());
    spec.methods = {Method::JointForest};
    spec.split_budgets = {1};
    spec.downsample_size = 10;  // below the 16-point training folds
    spec.downsample_candidates = 2;
    spec.forest_depth = 1;
    spec.joint_tree_count = 1;
    spec.solver = driver_config();

    const ExperimentResult result = run_experiment(spec);
    REQUIRE(result.records.size() == 1);
    const ExperimentRecord& rec = result.records[0];
    INFO(rec.error);
    CHECK_FALSE(rec.failed);
    CHECK(rec.solve_count == 2);  // two candidates x one budget
    CHECK(rec.subset_seed != 0);
    CHECK((rec.chosen_candidate == 0 || rec.chosen_candidate == 1));
}
