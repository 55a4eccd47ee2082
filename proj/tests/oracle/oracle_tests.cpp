#include "ocf/oracle.hpp"

#include "ocf/baselines.hpp"
#include "ocf/errors.hpp"
#include "ocf/formulation.hpp"
#include "ocf/rng.hpp"
#include "ocf/splits.hpp"

#include <doctest.h>

#include "../support/test_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

using namespace ocf;
using ocf::testing::majority_cube_dataset;
using ocf::testing::make_dataset;
using ocf::testing::random_grid_dataset;

namespace {

std::size_t error_sum(const EnumeratedTree& entry) {
    std::size_t sum = 0;
    for (std::uint8_t flag : entry.misclassified) sum += flag;
    return sum;
}

std::size_t forest_errors(const OracleResult& result, const Dataset& data) {
    return forest_training_errors(result.forest, data.features, data.labels,
                                  data.feature_count());
}

}  // namespace

TEST_CASE("candidate thresholds are interior midpoints of distinct values") {
    const Dataset d = make_dataset({{0.0, 0.5}, {0.25, 0.5}, {0.25, 0.5}, {1.0, 0.5}},
                                   {0, 0, 1, 1});
    const CandidateSplitSet set = CandidateSplitSet::from(d);
    REQUIRE(set.per_feature.size() == 2);
    REQUIRE(set.per_feature[0].size() == 2);
    CHECK(set.per_feature[0][0] == doctest::Approx(0.125));
    CHECK(set.per_feature[0][1] == doctest::Approx(0.625));
    CHECK(set.per_feature[1].empty());  // constant feature
    CHECK(set.total() == 2);
    for (double thr : set.per_feature[0]) {
        CHECK(thr > 0.0);
        CHECK(thr < 1.0);
    }
}

TEST_CASE("depth-1 enumeration counts one tree per threshold plus the empty tree") {
    // Feature 1 ranks the points as (1,3,0,4,2): none of its leading groups
    // matches a leading or trailing group of feature 0, so no two thresholds
    // on different features group the points the same way.
    const Dataset d = make_dataset({{0.0, 0.5}, {0.25, 0.0}, {0.5, 1.0}, {0.75, 0.25},
                                    {1.0, 0.75}},
                                   {0, 1, 0, 1, 0});
    const CandidateSplitSet set = CandidateSplitSet::from(d);
    const std::vector<EnumeratedTree> trees = enumerate_trees(d, 1, 1);
    CHECK(trees.size() == set.total() + 1);
    CHECK(trees.front().split_count == 0);  // the empty tree comes first
}

TEST_CASE("enumeration merges trees grouping the points identically") {
    // The second feature mirrors the first, so every split on it repeats a
    // grouping available on feature 0 and must be absorbed.
    const Dataset d = make_dataset({{0.0, 1.0}, {0.25, 0.75}, {0.75, 0.25}, {1.0, 0.0}},
                                   {0, 0, 1, 1});
    const std::vector<EnumeratedTree> trees = enumerate_trees(d, 1, 1);
    CHECK(trees.size() == 3 + 1);
    for (const EnumeratedTree& entry : trees)
        if (entry.tree.has_split(1))
            CHECK(entry.tree.split(1)->feature == 0);  // the earlier twin wins
}

TEST_CASE("two separable points admit a perfect stump") {
    const Dataset d = make_dataset({{0.0}, {1.0}}, {0, 1});
    const std::vector<EnumeratedTree> trees = enumerate_trees(d, 1, 1);
    REQUIRE(trees.size() == 2);
    const bool has_perfect = std::any_of(trees.begin(), trees.end(),
                                         [](const EnumeratedTree& t) {
                                             return error_sum(t) == 0 && t.split_count == 1;
                                         });
    CHECK(has_perfect);
}

TEST_CASE("a constant feature leaves only the empty tree") {
    const Dataset d = make_dataset({{0.5}, {0.5}, {0.5}}, {1, 1, 0});
    const std::vector<EnumeratedTree> trees = enumerate_trees(d, 1, 1);
    REQUIRE(trees.size() == 1);
    CHECK(trees[0].split_count == 0);
    CHECK(error_sum(trees[0]) == 1);  // the minority point
    // Everything falls through to the rightmost leaf, labeled by majority.
    std::span<const double> x{d.row(0), d.feature_count()};
    CHECK(trees[0].tree.predict(x) == 1);
}

TEST_CASE("minimum leaf occupancy filters the enumeration") {
    const Dataset d = make_dataset({{0.0}, {0.25}, {0.5}, {0.75}}, {0, 0, 1, 1});
    CHECK(enumerate_trees(d, 1, 1).size() == 4);   // empty + three cuts
    const std::vector<EnumeratedTree> trees = enumerate_trees(d, 1, 2);
    REQUIRE(trees.size() == 2);                    // empty + the middle cut
    for (const EnumeratedTree& entry : trees)
        if (entry.tree.has_split(1))
            CHECK(entry.tree.split(1)->threshold == doctest::Approx(0.375));
}

TEST_CASE("depth-2 enumeration on a line yields every segmentation") {
    // Up to three cuts of four collinear points: 1 + 3 + 3 + 1 groupings.
    const Dataset d = make_dataset({{0.0}, {0.25}, {0.5}, {0.75}}, {0, 1, 0, 1});
    CHECK(enumerate_trees(d, 2, 1).size() == 8);
}

TEST_CASE("enumeration caps are hard errors with a size report") {
    Rng rng(31);
    const Dataset big = random_grid_dataset(21, 2, rng);
    CHECK_THROWS_AS(enumerate_trees(big, 1, 1), ConfigError);
    const Dataset wide = random_grid_dataset(8, 5, rng);
    CHECK_THROWS_AS(enumerate_trees(wide, 1, 1), ConfigError);
    const Dataset fine = random_grid_dataset(8, 2, rng);
    CHECK_THROWS_AS(enumerate_trees(fine, 3, 1), ConfigError);
    try {
        enumerate_trees(big, 1, 1);
        FAIL("expected a refusal");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("21") != std::string::npos);
        CHECK(what.find("20") != std::string::npos);
    }
}

TEST_CASE("combination cap refuses oversized forest searches") {
    Rng rng(32);
    const Dataset d = random_grid_dataset(10, 2, rng);
    OracleLimits limits;
    limits.max_combinations = 1;
    CHECK_THROWS_AS(best_forest(d, 3, 1, 2, 1, limits), ConfigError);
}

TEST_CASE("single-tree search equals the best enumerated tree") {
    Rng rng(501);
    for (int round = 0; round < 8; ++round) {
        const Dataset d = random_grid_dataset(8 + rng.below(5), 2, rng);
        const int budget = 1 + static_cast<int>(rng.below(3));
        const std::vector<EnumeratedTree> trees = enumerate_trees(d, 2, 1);
        std::size_t reference = d.size() + 1;
        for (const EnumeratedTree& entry : trees)
            if (entry.split_count <= budget)
                reference = std::min(reference, error_sum(entry));
        const OracleResult result = best_forest(d, 1, 2, budget, 1);
        CHECK(result.error_count == reference);
        CHECK(forest_errors(result, d) == result.error_count);
        CHECK(result.total_splits <= budget);
    }
}

TEST_CASE("single-split search matches the exhaustive stump") {
    Rng rng(502);
    for (int round = 0; round < 8; ++round) {
        const Dataset d = random_grid_dataset(6 + rng.below(7), 2, rng);
        std::vector<std::size_t> all_features;
        for (std::size_t q = 0; q < d.feature_count(); ++q) all_features.push_back(q);
        const Stump stump = best_stump(d, all_features);
        const OracleResult result = best_forest(d, 1, 1, 1, 1);
        CHECK(result.error_count == stump.error_count);
    }
}

TEST_CASE("optimum never worsens with a larger search space") {
    Rng rng(503);
    for (int round = 0; round < 4; ++round) {
        const Dataset d = random_grid_dataset(9 + rng.below(3), 2, rng);

        std::size_t previous = d.size() + 1;
        for (int budget : {1, 2, 3}) {
            const std::size_t err = best_forest(d, 3, 1, budget, 1).error_count;
            CHECK(err <= previous);
            previous = err;
        }

        CHECK(best_forest(d, 1, 2, 2, 1).error_count <=
              best_forest(d, 1, 1, 2, 1).error_count);

        const OracleResult single = best_forest(d, 1, 2, 3, 1);
        const int triple_budget = std::max(1, 3 * single.total_splits);
        CHECK(best_forest(d, 3, 2, triple_budget, 1).error_count <= single.error_count);
    }
}

TEST_CASE("trees may label a leaf against its own majority to help the vote") {
    // Four collinear points with one positive inside: two splits across three
    // trees can zero the vote error, but only if one tree labels the side
    // holding the positive point with the minority class. The best single
    // tree under the same budget still errs once.
    const Dataset d = make_dataset({{0.0}, {0.25}, {0.5}, {0.75}}, {0, 0, 1, 0});
    CHECK(best_forest(d, 1, 1, 2, 1).error_count == 1);
    const OracleResult triple = best_forest(d, 3, 1, 2, 1);
    CHECK(triple.error_count == 0);
    CHECK(forest_errors(triple, d) == 0);
}

TEST_CASE("three coordinated trees can be perfect where one tree cannot") {
    // Searched over random 13-point two-feature instances: the first seed
    // already separates the two optima.
    Dataset d;
    bool found = false;
    for (std::uint64_t seed = 0; seed < 64 && !found; ++seed) {
        Rng rng(seed);
        d = random_grid_dataset(13, 2, rng);
        const OracleResult single = best_forest(d, 1, 2, 3, 1);
        if (single.error_count == 0) continue;
        const OracleResult triple = best_forest(d, 3, 2, 7, 1);
        if (triple.error_count == 0) found = true;
    }
    REQUIRE(found);
    CHECK(best_forest(d, 1, 2, 3, 1).error_count >= 1);
    const OracleResult triple = best_forest(d, 3, 2, 7, 1);
    CHECK(triple.error_count == 0);
    CHECK(forest_errors(triple, d) == 0);
    CHECK(triple.forest.tree_count() == 3);
}

TEST_CASE("the optimum matches the solved model on random instances") {
    SolverConfig solver;
    solver.binary_path = OCF_REPO_ROOT "/tools/solve_lp.py";
    solver.time_limit_s = 120.0;

    Rng rng(504);
    for (int round = 0; round < 6; ++round) {
        const std::size_t n = 6 + rng.below(5);
        const Dataset d = random_grid_dataset(n, 2, rng);
        const int depth = 1 + static_cast<int>(rng.below(2));
        const int tree_count = rng.below(2) == 0 ? 1 : 3;
        const int budget = 1 + static_cast<int>(rng.below(3));

        OcfConfig cfg;
        cfg.tree_count = tree_count;
        cfg.depth = depth;
        cfg.split_budget = budget;
        cfg.epsilon = 1e-5;
        REQUIRE(cfg.epsilon < 0.5 * minimum_feature_gap(d));

        const OracleResult reference = best_forest(d, tree_count, depth, budget, 1);

        OcfModel built = build_ocf_model(d, cfg);
        const SolveOutcome outcome = solve_ocf(built, solver);
        REQUIRE(outcome.status == SolveStatus::Optimal);
        const auto solved_errors = static_cast<std::size_t>(
            std::llround(outcome.objective_value * static_cast<double>(d.size())));
        INFO("round ", round, ": n=", n, " depth=", depth, " trees=", tree_count,
             " budget=", budget);
        CHECK(solved_errors == reference.error_count);
    }
}
