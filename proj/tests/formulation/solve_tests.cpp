#include "ocf/formulation.hpp"

#include "ocf/baselines.hpp"
#include "ocf/errors.hpp"

#include <doctest.h>

#include "../support/test_data.hpp"

#include <span>
#include <string>
#include <vector>

using namespace ocf;
using ocf::testing::majority_cube_dataset;
using ocf::testing::make_dataset;
using ocf::testing::random_grid_dataset;

namespace {

SolverConfig driver_config() {
    SolverConfig cfg;
    cfg.binary_path = OCF_REPO_ROOT "/tools/solve_lp.py";
    cfg.time_limit_s = 120.0;
    return cfg;
}

std::vector<std::vector<std::size_t>> all_features_per_tree(const Dataset& data, int trees) {
    std::vector<std::size_t> all;
    for (std::size_t q = 0; q < data.feature_count(); ++q) all.push_back(q);
    return std::vector<std::vector<std::size_t>>(static_cast<std::size_t>(trees), all);
}

void expect_consistent(const Dataset& data, const OcfModel& built,
                       const SolveOutcome& outcome) {
    REQUIRE(has_assignment(outcome.status));
    const std::vector<std::string> problems =
        verify_solution_consistency(data, built, outcome.assignment);
    if (!problems.empty()) INFO(problems.front());
    CHECK(problems.empty());
}

}  // namespace

TEST_CASE("separable data solves to zero training error") {
    const Dataset data = make_dataset(
        {{0.0, 0.5}, {0.125, 0.25}, {0.25, 0.75}, {0.75, 0.125}, {0.875, 0.625}, {1.0, 1.0}},
        {0, 0, 0, 1, 1, 1});
    OcfModel built = build_oct_model(data, 1, 1, 1, 1e-5);
    SolveOutcome outcome = solve_ocf(built, driver_config());
    REQUIRE(outcome.status == SolveStatus::Optimal);
    CHECK(outcome.objective_value == doctest::Approx(0.0).epsilon(1e-6));

    const Forest forest = extract_forest(outcome.assignment, built.registry, built.config);
    REQUIRE(forest.tree_count() == 1);
    REQUIRE(forest.tree(0).has_split(1));
    CHECK(forest.tree(0).split(1)->feature == 0);
    expect_consistent(data, built, outcome);
}

TEST_CASE("three voting stumps beat the best single stump") {
    const Dataset data = majority_cube_dataset();

    // One tree, one split: the best stump errs on two of the eight corners.
    OcfModel single = build_oct_model(data, 1, 1, 1, 1e-5);
    SolveOutcome single_outcome = solve_ocf(single, driver_config());
    REQUIRE(single_outcome.status == SolveStatus::Optimal);
    CHECK(single_outcome.objective_value == doctest::Approx(0.25));
    expect_consistent(data, single, single_outcome);

    // Three stumps voting: the majority of the three coordinates is exact.
    OcfConfig cfg;
    cfg.tree_count = 3;
    cfg.depth = 1;
    cfg.split_budget = 3;
    OcfModel ensemble = build_ocf_model(data, cfg);
    SolveOutcome outcome = solve_ocf(ensemble, driver_config());
    REQUIRE(outcome.status == SolveStatus::Optimal);
    CHECK(outcome.objective_value == doctest::Approx(0.0).epsilon(1e-6));
    expect_consistent(data, ensemble, outcome);

    const Forest forest = extract_forest(outcome.assignment, ensemble.registry, cfg);
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::span<const double> x{data.row(i), data.feature_count()};
        CHECK(forest.predict(x) == data.labels[i]);
    }
}

TEST_CASE("symmetry breaking does not change the optimum") {
    // A contradictory duplicate pins the optimum at one error in nine.
    Dataset data = majority_cube_dataset();
    data.features.insert(data.features.end(), {0.0, 0.0, 0.0});
    data.labels.push_back(1);
    data.provenance.raw_rows = data.labels.size();

    OcfConfig with;
    with.tree_count = 3;
    with.depth = 1;
    with.split_budget = 3;
    OcfConfig without = with;
    without.symmetry_breaking = false;

    OcfModel m_with = build_ocf_model(data, with);
    OcfModel m_without = build_ocf_model(data, without);
    SolveOutcome o_with = solve_ocf(m_with, driver_config());
    SolveOutcome o_without = solve_ocf(m_without, driver_config());
    REQUIRE(o_with.status == SolveStatus::Optimal);
    REQUIRE(o_without.status == SolveStatus::Optimal);
    CHECK(o_with.objective_value == doctest::Approx(1.0 / 9.0));
    CHECK(o_without.objective_value == doctest::Approx(o_with.objective_value));
    expect_consistent(data, m_with, o_with);
    expect_consistent(data, m_without, o_without);
}

TEST_CASE("warm started solve reaches the same optimum") {
    const Dataset data = majority_cube_dataset();
    OcfConfig cfg;
    cfg.tree_count = 3;
    cfg.depth = 1;
    cfg.split_budget = 3;
    OcfModel built = build_ocf_model(data, cfg);
    const std::vector<double> warm =
        warm_start_assignment(data, cfg, all_features_per_tree(data, 3));
    SolveOutcome outcome = solve_ocf(built, driver_config(), &warm);
    REQUIRE(outcome.status == SolveStatus::Optimal);
    CHECK(outcome.objective_value == doctest::Approx(0.0).epsilon(1e-6));
    expect_consistent(data, built, outcome);
}

TEST_CASE("deferred agreement rows converge to the eager optimum") {
    Dataset data = majority_cube_dataset();
    data.features.insert(data.features.end(), {0.0, 0.0, 0.0});
    data.labels.push_back(1);
    data.provenance.raw_rows = data.labels.size();

    OcfConfig eager;
    eager.tree_count = 3;
    eager.depth = 1;
    eager.split_budget = 3;
    OcfConfig lazy = eager;
    lazy.eager_pair_limit = 0;

    OcfModel m_eager = build_ocf_model(data, eager);
    OcfModel m_lazy = build_ocf_model(data, lazy);
    REQUIRE(m_lazy.lazy_pairs);

    SolveOutcome o_eager = solve_ocf(m_eager, driver_config());
    SolveOutcome o_lazy = solve_ocf(m_lazy, driver_config());
    REQUIRE(o_eager.status == SolveStatus::Optimal);
    REQUIRE(o_lazy.status == SolveStatus::Optimal);
    CHECK(o_lazy.objective_value == doctest::Approx(o_eager.objective_value));
    // The incumbent must satisfy even the rows that were never generated.
    expect_consistent(data, m_lazy, o_lazy);
}

TEST_CASE("single-tree single-split optimum matches the exhaustive stump") {
    Rng rng(8080);
    for (int round = 0; round < 4; ++round) {
        const Dataset data = random_grid_dataset(6 + rng.below(5), 2, rng);
        std::vector<std::size_t> all_features;
        for (std::size_t q = 0; q < data.feature_count(); ++q) all_features.push_back(q);
        const Stump stump = best_stump(data, all_features);

        OcfModel built = build_oct_model(data, 1, 1, 1, 1e-5);
        SolveOutcome outcome = solve_ocf(built, driver_config());
        REQUIRE(outcome.status == SolveStatus::Optimal);
        CHECK(outcome.objective_value * static_cast<double>(data.size()) ==
              doctest::Approx(static_cast<double>(stump.error_count)).epsilon(1e-6));
        expect_consistent(data, built, outcome);
    }
}

TEST_CASE("minimum leaf size shapes the optimum") {
    // Perfect separation needs a leaf of two; forbidding it costs an error.
    const Dataset data = make_dataset(
        {{0.0}, {0.125}, {0.25}, {0.375}, {0.875}, {1.0}},
        {0, 0, 0, 0, 1, 1});
    OcfModel loose = build_oct_model(data, 1, 1, 2, 1e-5);
    SolveOutcome o_loose = solve_ocf(loose, driver_config());
    REQUIRE(o_loose.status == SolveStatus::Optimal);
    CHECK(o_loose.objective_value == doctest::Approx(0.0).epsilon(1e-6));
    expect_consistent(data, loose, o_loose);

    OcfModel tight = build_oct_model(data, 1, 1, 3, 1e-5);
    SolveOutcome o_tight = solve_ocf(tight, driver_config());
    REQUIRE(o_tight.status == SolveStatus::Optimal);
    CHECK(o_tight.objective_value == doctest::Approx(1.0 / 6.0));
    expect_consistent(data, tight, o_tight);
}
