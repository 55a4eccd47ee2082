#include "ocf/formulation.hpp"

#include "ocf/baselines.hpp"
#include "ocf/errors.hpp"

#include <doctest.h>

#include "../support/test_data.hpp"

#include <span>
#include <vector>

using namespace ocf;
using ocf::testing::majority_cube_dataset;
using ocf::testing::make_dataset;
using ocf::testing::random_grid_dataset;

namespace {

std::vector<std::vector<std::size_t>> all_features_per_tree(const Dataset& data, int trees) {
    std::vector<std::size_t> all;
    for (std::size_t q = 0; q < data.feature_count(); ++q) all.push_back(q);
    return std::vector<std::vector<std::size_t>>(static_cast<std::size_t>(trees), all);
}

}  // namespace

TEST_CASE("warm start is feasible on random instances") {
    Rng rng(606);
    for (int round = 0; round < 25; ++round) {
        const Dataset data = random_grid_dataset(6 + rng.below(9), 1 + rng.below(3), rng);
        OcfConfig cfg;
        cfg.tree_count = 3;
        cfg.depth = 1 + static_cast<int>(rng.below(2));
        cfg.split_budget = 1 + static_cast<int>(rng.below(4));
        cfg.min_leaf_size = 1 + static_cast<int>(rng.below(2));
        const OcfModel built = build_ocf_model(data, cfg);
        const std::vector<double> warm =
            warm_start_assignment(data, cfg, all_features_per_tree(data, cfg.tree_count));

        const AuditReport audit = audit_feasibility(built.model, warm);
        INFO(audit.to_string());
        CHECK(audit.clean());

        const std::vector<std::string> problems =
            verify_solution_consistency(data, built, warm);
        if (!problems.empty()) {
            INFO(problems.front());
            CHECK(problems.empty());
        }
    }
}

TEST_CASE("identical stumps make a unanimous forest") {
    const Dataset data = make_dataset(
        {{0.0}, {0.125}, {0.25}, {0.75}, {0.875}, {1.0}},
        {0, 0, 0, 1, 1, 1});
    OcfConfig cfg;
    cfg.tree_count = 3;
    cfg.depth = 1;
    cfg.split_budget = 3;
    const std::vector<double> warm =
        warm_start_assignment(data, cfg, all_features_per_tree(data, 3));
    const OcfModel built = build_ocf_model(data, cfg);
    CHECK(audit_feasibility(built.model, warm).clean());

    const VariableRegistry& reg = built.registry;
    const Stump stump = best_stump(data, {0});
    REQUIRE(stump.split.has_value());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int predicted = data.at(i, 0) < stump.split->threshold ? stump.left_class
                                                                     : stump.right_class;
        CHECK(warm[static_cast<std::size_t>(reg.alpha(i))] == doctest::Approx(predicted));
    }
}

TEST_CASE("warm start stops granting stumps when the budget runs out") {
    const Dataset data = majority_cube_dataset();
    OcfConfig cfg;
    cfg.tree_count = 3;
    cfg.depth = 1;
    cfg.split_budget = 1;
    const OcfModel built = build_ocf_model(data, cfg);
    const std::vector<double> warm =
        warm_start_assignment(data, cfg, all_features_per_tree(data, 3));
    CHECK(audit_feasibility(built.model, warm).clean());

    const VariableRegistry& reg = built.registry;
    double splits = 0.0;
    for (int r = 0; r < 3; ++r) splits += warm[static_cast<std::size_t>(reg.d(1, r))];
    CHECK(splits == doctest::Approx(1.0));
}

TEST_CASE("warm start falls back to no split when a side is too small") {
    // The only split that helps isolates a single observation.
    const Dataset data = make_dataset({{0.0}, {0.5}, {0.625}, {1.0}}, {1, 0, 0, 0});
    OcfConfig cfg;
    cfg.tree_count = 3;
    cfg.depth = 1;
    cfg.split_budget = 3;
    cfg.min_leaf_size = 2;
    const OcfModel built = build_ocf_model(data, cfg);
    const std::vector<double> warm =
        warm_start_assignment(data, cfg, all_features_per_tree(data, 3));
    CHECK(audit_feasibility(built.model, warm).clean());

    const VariableRegistry& reg = built.registry;
    for (int r = 0; r < 3; ++r)
        CHECK(warm[static_cast<std::size_t>(reg.d(1, r))] == 0.0);
}

TEST_CASE("warm start orders trees by disagreement for the symmetry chain") {
    Rng rng(1234);
    for (int round = 0; round < 10; ++round) {
        const Dataset data = random_grid_dataset(10, 3, rng);
        OcfConfig cfg;
        cfg.tree_count = 3;
        cfg.depth = 1;
        cfg.split_budget = 3;
        // Different subsets per tree so the stumps genuinely differ.
        const std::vector<std::vector<std::size_t>> subsets{{0}, {1}, {2}};
        const std::vector<double> warm = warm_start_assignment(data, cfg, subsets);
        const OcfModel built = build_ocf_model(data, cfg);
        CHECK(audit_feasibility(built.model, warm).clean());

        const VariableRegistry& reg = built.registry;
        long long previous = -1;
        for (int r = 0; r < 3; ++r) {
            long long flips = 0;
            for (std::size_t i = 0; i < data.size(); ++i)
                flips += warm[static_cast<std::size_t>(reg.flip(i, r))] > 0.5;
            CHECK(flips >= previous);
            previous = flips;
        }
    }
}

TEST_CASE("warm start validates its inputs") {
    const Dataset data = majority_cube_dataset();
    OcfConfig cfg;
    cfg.tree_count = 3;
    CHECK_THROWS_AS(warm_start_assignment(data, cfg, {}), ConfigError);
    CHECK_THROWS_AS(warm_start_assignment(data, cfg, {{0}, {1}}), ConfigError);
    CHECK_THROWS_AS(warm_start_assignment(data, cfg, {{0}, {}, {1}}), ConfigError);
}

TEST_CASE("extraction reproduces the warm-start stumps") {
    const Dataset data = majority_cube_dataset();
    OcfConfig cfg;
    cfg.tree_count = 3;
    cfg.depth = 1;
    cfg.split_budget = 3;
    const std::vector<std::vector<std::size_t>> subsets{{0}, {1}, {2}};
    const std::vector<double> warm = warm_start_assignment(data, cfg, subsets);
    const OcfModel built = build_ocf_model(data, cfg);

    const Forest forest = extract_forest(warm, built.registry, cfg);
    REQUIRE(forest.tree_count() == 3);
    CHECK(forest.feature_count() == 3);
    int splits = 0;
    for (const DecisionTree& tree : forest.trees()) splits += tree.active_split_count();
    CHECK(splits == 3);

    // Majority-of-three-bits data with one stump per bit: the vote is exact.
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::span<const double> x{data.row(i), data.feature_count()};
        CHECK(forest.predict(x) == data.labels[i]);
    }

    const std::vector<std::string> problems = verify_solution_consistency(data, built, warm);
    if (!problems.empty()) INFO(problems.front());
    CHECK(problems.empty());
}

TEST_CASE("all-zero split indicators extract to empty trees") {
    const Dataset data = make_dataset({{0.0}, {0.5}, {1.0}}, {1, 1, 0});
    OcfConfig cfg;
    cfg.tree_count = 3;
    cfg.depth = 1;
    // Pure-majority warm start: constant feature subsets make no stump.
    Dataset constant = data;
    for (double& v : constant.features) v = 0.5;
    const std::vector<double> warm =
        warm_start_assignment(constant, cfg, all_features_per_tree(constant, 3));
    VariableRegistry reg(constant.size(), constant.feature_count(), cfg);
    const Forest forest = extract_forest(warm, reg, cfg);
    for (const DecisionTree& tree : forest.trees()) {
        CHECK(tree.active_split_count() == 0);
        CHECK(tree.fallback_class() == 1);  // majority label
        std::span<const double> x{data.row(2), data.feature_count()};
        CHECK(tree.predict(x) == 1);
    }
}

TEST_CASE("extraction rejects fractional and incoherent assignments") {
    const Dataset data = majority_cube_dataset();
    OcfConfig cfg;
    cfg.tree_count = 3;
    cfg.depth = 1;
    cfg.split_budget = 3;
    const OcfModel built = build_ocf_model(data, cfg);
    std::vector<double> warm =
        warm_start_assignment(data, cfg, all_features_per_tree(data, 3));

    SUBCASE("wrong length") {
        std::vector<double> short_assignment(10, 0.0);
        CHECK_THROWS_AS(extract_forest(short_assignment, built.registry, cfg), ConfigError);
    }
    SUBCASE("fractional binary") {
        warm[static_cast<std::size_t>(built.registry.theta(0, 0))] = 0.4;
        CHECK_THROWS_AS(extract_forest(warm, built.registry, cfg), SolverError);
    }
    SUBCASE("tolerance accepts solver noise") {
        warm[static_cast<std::size_t>(built.registry.theta(0, 0))] += 5e-7;
        CHECK_NOTHROW(extract_forest(warm, built.registry, cfg));
    }
    SUBCASE("selector without split indicator") {
        warm[static_cast<std::size_t>(built.registry.d(1, 0))] = 0.0;
        CHECK_THROWS_AS(extract_forest(warm, built.registry, cfg), SolverError);
    }
    SUBCASE("members voting differently") {
        // Tree 1 is a stump on feature 0; push one member's vote the other way.
        const VariableRegistry& reg = built.registry;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (warm[static_cast<std::size_t>(reg.z(i, 2, 0))] > 0.5) {
                const std::size_t th = static_cast<std::size_t>(reg.theta(i, 0));
                warm[th] = 1.0 - warm[th];
                break;
            }
        }
        CHECK_THROWS_AS(extract_forest(warm, built.registry, cfg), SolverError);
    }
}

TEST_CASE("extraction refuses a split under an inactive parent") {
    const Dataset data = make_dataset({{0.0}, {0.25}, {0.75}, {1.0}}, {0, 1, 0, 1});
    OcfConfig cfg;
    cfg.tree_count = 1;
    cfg.depth = 2;
    cfg.split_budget = 3;
    cfg.symmetry_breaking = false;
    VariableRegistry reg(data.size(), data.feature_count(), cfg);
    std::vector<double> assignment(static_cast<std::size_t>(reg.column_count()), 0.0);
    // Node 2 splits while the root does not.
    assignment[static_cast<std::size_t>(reg.d(2, 0))] = 1.0;
    assignment[static_cast<std::size_t>(reg.a(2, 0, 0))] = 1.0;
    assignment[static_cast<std::size_t>(reg.b(2, 0))] = 0.5;
    for (std::size_t i = 0; i < data.size(); ++i)
        assignment[static_cast<std::size_t>(reg.z(i, 7, 0))] = 1.0;
    assignment[static_cast<std::size_t>(reg.l(7, 0))] = 1.0;
    CHECK_THROWS_AS(extract_forest(assignment, reg, cfg), SolverError);
}
