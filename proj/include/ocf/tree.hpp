#pragma once

#include "ocf/topology.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ocf {

struct Split {
    int feature = 0;        // in [0, p)
    double threshold = 0.0; // in [0, 1]
};

// An axis-aligned decision tree over the complete binary topology. Branch
// nodes without a split are inactive; any observation arriving at one moves to
// the RIGHT child. This is the only direction a solved model permits for
// inactive nodes (the left-step constraint is unsatisfiable when a=0, b=0), so
// inference has to mirror it or extracted trees would disagree with the
// solver's routing variables.
class DecisionTree {
  public:
    DecisionTree(TreeTopology topology, int fallback_class);

    const TreeTopology& topology() const { return topology_; }
    int fallback_class() const { return fallback_class_; }
    void set_fallback_class(int c) { fallback_class_ = c; }

    // Split hierarchy: a non-root node may only be given a split if its parent
    // already has one.
    void set_split(NodeId branch, Split s);
    const std::optional<Split>& split(NodeId branch) const;
    bool has_split(NodeId branch) const { return split(branch).has_value(); }
    int active_split_count() const;

    void set_leaf_class(NodeId leaf, int cls);
    std::optional<int> leaf_class(NodeId leaf) const;
    void set_leaf_support(NodeId leaf, int count);
    std::optional<int> leaf_support(NodeId leaf) const;

    // Leftmost split test: x[feature] < threshold goes left, else right.
    // Inactive nodes route right. Total: every x reaches exactly one leaf.
    NodeId route(std::span<const double> x) const;
    int predict(std::span<const double> x) const;

    // Largest feature index referenced by any split, or -1 when none.
    int max_feature_index() const;

  private:
    void check_branch(NodeId t) const;
    void check_leaf(NodeId t) const;

    TreeTopology topology_;
    int fallback_class_;
    std::vector<std::optional<Split>> splits_;     // indexed by branch node
    std::vector<std::optional<int>> leaf_classes_; // indexed by leaf - first_leaf
    std::vector<std::optional<int>> leaf_support_;
};

// A trained ensemble. predict() returns 1 iff strictly more than half the
// trees vote 1; with the odd tree counts the MILP uses this never ties, and
// the even-sized baseline forests resolve exact ties to class 0.
class Forest {
  public:
    Forest() = default;
    explicit Forest(std::vector<DecisionTree> trees);

    std::size_t tree_count() const { return trees_.size(); }
    const std::vector<DecisionTree>& trees() const { return trees_; }
    const DecisionTree& tree(std::size_t r) const { return trees_[r]; }

    // Feature dimension the forest expects; the max referenced index + 1 if no
    // explicit dimension was recorded at build time.
    std::size_t feature_count() const { return feature_count_; }
    void set_feature_count(std::size_t p);

    const std::vector<std::string>& feature_names() const { return feature_names_; }
    void set_feature_names(std::vector<std::string> names);

    std::vector<int> votes(std::span<const double> x) const;
    int predict(std::span<const double> x) const;

  private:
    std::vector<DecisionTree> trees_;
    std::size_t feature_count_ = 0;
    std::vector<std::string> feature_names_;
};

// Misclassification count of majority-vote predictions over a feature matrix.
int forest_training_errors(const Forest& forest, const std::vector<double>& features,
                           const std::vector<int>& labels, std::size_t p);

}  // namespace ocf
