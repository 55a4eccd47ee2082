#include "ocf/topology.hpp"

#include "ocf/errors.hpp"

#include <string>

namespace ocf {

TreeTopology::TreeTopology(int depth) : depth_(depth) {
    if (depth < 0 || depth > 25) throw ConfigError("tree depth out of range: " + std::to_string(depth));
    node_count_ = (1 << (depth + 1)) - 1;
    first_leaf_ = (node_count_ + 1) / 2;  // = 2^D
}

std::pair<std::vector<NodeId>, std::vector<NodeId>> TreeTopology::ancestors(NodeId leaf) const {
    if (!is_leaf(leaf))
        throw ConfigError("ancestors: node " + std::to_string(leaf) + " is not a leaf of a depth-" +
                          std::to_string(depth_) + " tree");
    std::vector<NodeId> left, right;
    NodeId t = leaf;
    while (t > 1) {
        NodeId p = parent(t);
        if (t == left_child(p))
            left.push_back(p);
        else
            right.push_back(p);
        t = p;
    }
    return {std::move(left), std::move(right)};
}

}  // namespace ocf
