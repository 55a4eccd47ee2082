#include "ocf/tree.hpp"

#include "ocf/errors.hpp"

#include <string>

namespace ocf {

DecisionTree::DecisionTree(TreeTopology topology, int fallback_class)
    : topology_(topology), fallback_class_(fallback_class) {
    if (fallback_class != 0 && fallback_class != 1) throw ConfigError("fallback class must be 0 or 1");
    splits_.resize(static_cast<std::size_t>(topology_.branch_count()));
    leaf_classes_.resize(static_cast<std::size_t>(topology_.leaf_count()));
    leaf_support_.resize(static_cast<std::size_t>(topology_.leaf_count()));
}

void DecisionTree::check_branch(NodeId t) const {
    if (!topology_.is_branch(t)) throw ConfigError("node " + std::to_string(t) + " is not a branch node");
}

void DecisionTree::check_leaf(NodeId t) const {
    if (!topology_.is_leaf(t)) throw ConfigError("node " + std::to_string(t) + " is not a leaf node");
}

void DecisionTree::set_split(NodeId branch, Split s) {
    check_branch(branch);
    if (s.feature < 0) throw ConfigError("split feature index must be non-negative");
    if (!(s.threshold >= 0.0 && s.threshold <= 1.0)) throw ConfigError("split threshold must lie in [0,1]");
    if (branch > 1 && !splits_[static_cast<std::size_t>(TreeTopology::parent(branch) - 1)].has_value())
        throw ConfigError("split hierarchy violated: parent of node " + std::to_string(branch) + " has no split");
    splits_[static_cast<std::size_t>(branch - 1)] = s;
}

const std::optional<Split>& DecisionTree::split(NodeId branch) const {
    check_branch(branch);
    return splits_[static_cast<std::size_t>(branch - 1)];
}

int DecisionTree::active_split_count() const {
    int count = 0;
    for (const auto& s : splits_) count += s.has_value() ? 1 : 0;
    return count;
}

void DecisionTree::set_leaf_class(NodeId leaf, int cls) {
    check_leaf(leaf);
    if (cls != 0 && cls != 1) throw ConfigError("leaf class must be 0 or 1");
    leaf_classes_[static_cast<std::size_t>(leaf - topology_.first_leaf())] = cls;
}

std::optional<int> DecisionTree::leaf_class(NodeId leaf) const {
    check_leaf(leaf);
    return leaf_classes_[static_cast<std::size_t>(leaf - topology_.first_leaf())];
}

void DecisionTree::set_leaf_support(NodeId leaf, int count) {
    check_leaf(leaf);
    leaf_support_[static_cast<std::size_t>(leaf - topology_.first_leaf())] = count;
}

std::optional<int> DecisionTree::leaf_support(NodeId leaf) const {
    check_leaf(leaf);
    return leaf_support_[static_cast<std::size_t>(leaf - topology_.first_leaf())];
}

NodeId DecisionTree::route(std::span<const double> x) const {
    NodeId t = 1;
    while (topology_.is_branch(t)) {
        const auto& s = splits_[static_cast<std::size_t>(t - 1)];
        if (!s.has_value()) {
            t = TreeTopology::right_child(t);
            continue;
        }
        if (static_cast<std::size_t>(s->feature) >= x.size())
            throw DataError("route: observation has " + std::to_string(x.size()) +
                            " features, split needs index " + std::to_string(s->feature));
        t = x[static_cast<std::size_t>(s->feature)] < s->threshold ? TreeTopology::left_child(t)
                                                                   : TreeTopology::right_child(t);
    }
    return t;
}

int DecisionTree::predict(std::span<const double> x) const {
    auto cls = leaf_class(route(x));
    return cls.has_value() ? *cls : fallback_class_;
}

int DecisionTree::max_feature_index() const {
    int max_q = -1;
    for (const auto& s : splits_)
        if (s.has_value() && s->feature > max_q) max_q = s->feature;
    return max_q;
}

Forest::Forest(std::vector<DecisionTree> trees) : trees_(std::move(trees)) {
    if (trees_.empty()) throw ConfigError("forest must contain at least one tree");
    int max_q = -1;
    for (const auto& t : trees_) max_q = std::max(max_q, t.max_feature_index());
    feature_count_ = static_cast<std::size_t>(max_q + 1);
}

void Forest::set_feature_count(std::size_t p) {
    for (const auto& t : trees_)
        if (t.max_feature_index() >= static_cast<int>(p))
            throw ConfigError("forest feature_count smaller than a referenced split feature");
    feature_count_ = p;
}

void Forest::set_feature_names(std::vector<std::string> names) {
    if (!names.empty() && names.size() < feature_count_)
        throw ConfigError("forest feature name list shorter than feature_count");
    feature_names_ = std::move(names);
    if (feature_names_.size() > feature_count_) feature_count_ = feature_names_.size();
}

std::vector<int> Forest::votes(std::span<const double> x) const {
    if (trees_.empty()) throw ConfigError("predict on an empty forest");
    std::vector<int> v;
    v.reserve(trees_.size());
    for (const auto& t : trees_) v.push_back(t.predict(x));
    return v;
}

int Forest::predict(std::span<const double> x) const {
    if (trees_.empty()) throw ConfigError("predict on an empty forest");
    std::size_t ones = 0;
    for (const auto& t : trees_) ones += static_cast<std::size_t>(t.predict(x));
    return 2 * ones > trees_.size() ? 1 : 0;
}

int forest_training_errors(const Forest& forest, const std::vector<double>& features,
                           const std::vector<int>& labels, std::size_t p) {
    int errors = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::span<const double> x(features.data() + i * p, p);
        errors += forest.predict(x) != labels[i] ? 1 : 0;
    }
    return errors;
}

}  // namespace ocf
