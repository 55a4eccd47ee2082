#pragma once

#include <cstdint>
#include <vector>

namespace ocf {

using NodeId = int;  // 1-based, root = 1

// Complete-binary-tree index algebra. Nodes are numbered 1..T with
// T = 2^(D+1)-1; parent(t) = t/2, children of t are 2t and 2t+1. Branch nodes
// are 1..T/2, leaves are the rest.
class TreeTopology {
  public:
    explicit TreeTopology(int depth);

    int depth() const { return depth_; }
    int node_count() const { return node_count_; }
    NodeId first_leaf() const { return first_leaf_; }
    NodeId last_leaf() const { return node_count_; }
    int branch_count() const { return first_leaf_ - 1; }
    int leaf_count() const { return node_count_ - first_leaf_ + 1; }

    bool is_branch(NodeId t) const { return t >= 1 && t < first_leaf_; }
    bool is_leaf(NodeId t) const { return t >= first_leaf_ && t <= node_count_; }

    static NodeId parent(NodeId t) { return t / 2; }
    static NodeId left_child(NodeId t) { return 2 * t; }
    static NodeId right_child(NodeId t) { return 2 * t + 1; }

    // Ancestors of `leaf` split by which branch the root-to-leaf path takes:
    // first = left-step ancestors, second = right-step ancestors. Their union
    // is the full strict-ancestor set and the sizes add up to depth().
    std::pair<std::vector<NodeId>, std::vector<NodeId>> ancestors(NodeId leaf) const;

  private:
    int depth_;
    int node_count_;
    NodeId first_leaf_;
};

}  // namespace ocf
