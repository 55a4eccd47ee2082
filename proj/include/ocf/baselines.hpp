#pragma once

#include "ocf/dataset.hpp"
#include "ocf/tree.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace ocf {

// Best single root split over a feature subset, judged purely by training
// misclassifications with majority-class sides. The no-split option (one
// majority leaf) is the baseline; a split is returned only when it strictly
// beats it, so pure-label data and all-constant features both yield the
// no-split stump. Ties between splits break to the lowest feature index,
// then the smallest threshold.
struct Stump {
    std::optional<Split> split;   // absent: no split improves on majority
    int left_class = 0;           // side with x[feature] < threshold
    int right_class = 0;          // both sides equal the majority when no split
    std::size_t error_count = 0;
};

Stump best_stump(const Dataset& data, const std::vector<std::size_t>& feature_subset);

// Greedy tree induction: Gini-minimizing axis splits over candidate
// midpoints, grown best-first under a global cap on active splits.
struct CartConfig {
    int depth = 3;
    int min_leaf_size = 1;  // both children of any split must hold at least this many
    int split_budget = 7;   // total active splits granted, in order of impurity decrease

    void validate() const;
};

// Deterministic for fixed inputs: node selection ties break to the lowest
// node id, split ties to the lowest feature then smallest threshold, and
// impurity comparisons are exact (integer cross-products, no float drift).
DecisionTree train_cart(const Dataset& data, const CartConfig& config);

// Forest of shallow greedy trees, each grown on an independent random
// subsample drawn from its own stream of the master seed. Sampling is
// without replacement when the data suffices, with replacement otherwise.
struct RfConfig {
    int tree_count = 500;
    int depth = 2;
    std::size_t sample_size = 75;
    std::uint64_t seed = 0;

    void validate() const;
};

Forest train_rf(const Dataset& data, const RfConfig& config);

}  // namespace ocf
