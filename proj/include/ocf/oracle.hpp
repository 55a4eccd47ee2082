#pragma once

#include "ocf/dataset.hpp"
#include "ocf/tree.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ocf {

// Canonical split thresholds: for every feature, the sorted midpoints between
// consecutive distinct training values. Any other threshold routes the
// training set identically to one of these midpoints or to no split at all,
// so exhaustive search over this set covers every achievable partition.
struct CandidateSplitSet {
    std::vector<std::vector<double>> per_feature;

    static CandidateSplitSet from(const Dataset& data);
    std::size_t total() const;
};

// Hard size limits for the exhaustive learners. Exceeding any of them is a
// ConfigError with the offending sizes spelled out: an exhaustive search
// that silently truncates is no longer exhaustive, so there is no fallback.
struct OracleLimits {
    std::size_t max_observations = 20;
    std::size_t max_features = 4;
    int max_depth = 2;
    std::uint64_t max_combinations = 40'000'000;
};

// One structurally distinct tree: majority-labeled representative, its 0/1
// misclassification flags over the training points, and its split count.
struct EnumeratedTree {
    DecisionTree tree;
    std::vector<std::uint8_t> misclassified;
    int split_count = 0;
};

// Every structurally distinct pruned tree over the canonical thresholds:
// splits may only be active below an active parent, occupied leaves hold at
// least min_leaf_size points, and trees inducing the same partition of the
// training set are merged (representative: fewest splits, then generation
// order — features ascending, thresholds ascending, left subtree first).
// Points reaching an inactive branch fall through to its rightmost leaf.
std::vector<EnumeratedTree> enumerate_trees(const Dataset& data, int depth, int min_leaf_size,
                                            const OracleLimits& limits = {});

struct OracleResult {
    Forest forest;
    std::size_t error_count = 0;
    int total_splits = 0;
};

// Exact optimum of majority-vote training error over multisets of tree_count
// trees (1 or 3) with at most split_budget active splits in total. Leaf
// classes range over every labeling of occupied leaves, not only leaf
// majorities: a tree may label a leaf against its own members when that
// helps the ensemble vote. Ties break toward fewer total splits, then the
// earliest trees in generation order; the result is deterministic and
// independent of the worker count.
OracleResult best_forest(const Dataset& data, int tree_count, int depth, int split_budget,
                         int min_leaf_size, const OracleLimits& limits = {});

}  // namespace ocf
