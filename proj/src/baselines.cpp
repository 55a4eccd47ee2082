#include "ocf/baselines.hpp"

#include "ocf/errors.hpp"
#include "ocf/rng.hpp"
#include "ocf/splits.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <thread>
#include <utility>

namespace ocf {

namespace {

struct ClassCounts {
    long long c0 = 0;
    long long c1 = 0;

    long long total() const { return c0 + c1; }
    int majority() const { return c1 > c0 ? 1 : 0; }
    long long minority() const { return std::min(c0, c1); }
    bool pure() const { return c0 == 0 || c1 == 0; }
};

ClassCounts count_labels(const Dataset& data, const std::vector<std::size_t>& members) {
    ClassCounts c;
    for (std::size_t i : members) (data.labels[i] == 1 ? c.c1 : c.c0)++;
    return c;
}

// (value, label) pairs of the members on one feature, sorted by value.
std::vector<std::pair<double, int>> sorted_column(const Dataset& data,
                                                 const std::vector<std::size_t>& members,
                                                 std::size_t feature) {
    std::vector<std::pair<double, int>> col;
    col.reserve(members.size());
    for (std::size_t i : members) col.emplace_back(data.at(i, feature), data.labels[i]);
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return col;
}

}  // namespace

Stump best_stump(const Dataset& data, const std::vector<std::size_t>& feature_subset) {
    data.validate();
    if (data.size() == 0) throw ConfigError("best_stump: dataset is empty");
    if (feature_subset.empty()) throw ConfigError("best_stump: feature subset is empty");

    std::vector<std::size_t> features = feature_subset;
    std::sort(features.begin(), features.end());
    features.erase(std::unique(features.begin(), features.end()), features.end());
    if (features.back() >= data.feature_count())
        throw ConfigError("best_stump: feature index out of range");

    std::vector<std::size_t> all(data.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const ClassCounts whole = count_labels(data, all);

    Stump best;
    best.left_class = whole.majority();
    best.right_class = whole.majority();
    best.error_count = static_cast<std::size_t>(whole.minority());

    for (std::size_t q : features) {
        const auto col = sorted_column(data, all, q);
        ClassCounts left;
        for (std::size_t k = 1; k < col.size(); ++k) {
            (col[k - 1].second == 1 ? left.c1 : left.c0)++;
            if (col[k].first <= col[k - 1].first) continue;
            const double mid = 0.5 * (col[k - 1].first + col[k].first);
            if (!(mid > col[k - 1].first && mid < col[k].first)) continue;
            const ClassCounts right{whole.c0 - left.c0, whole.c1 - left.c1};
            const std::size_t err = static_cast<std::size_t>(left.minority() + right.minority());
            if (err < best.error_count) {
                best.split = Split{static_cast<int>(q), mid};
                best.left_class = left.majority();
                best.right_class = right.majority();
                best.error_count = err;
            }
        }
    }
    return best;
}

void CartConfig::validate() const {
    if (depth < 1) throw ConfigError("cart: depth must be at least 1");
    if (min_leaf_size < 1) throw ConfigError("cart: min_leaf_size must be at least 1");
    if (split_budget < 1) throw ConfigError("cart: split_budget must be at least 1");
}

namespace {

// Exact comparison state for one node's best split. Impurity quantities are
// ratios of products of class counts; comparing them through cross-products
// in 128-bit integers keeps every tie decision free of rounding, so the tree
// is reproducible bit-for-bit across platforms.
struct NodeSplit {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    // Weighted child impurity, minimized: sum_num / den with
    // sum_num = L0*L1*nR + R0*R1*nL and den = nL*nR.
    long long sum_num = 0;
    long long den = 1;
    // Impurity decrease against the parent: dec_num / dec_den, both >= 0.
    long long dec_num = 0;
    long long dec_den = 1;
};

bool ratio_less(long long num_a, long long den_a, long long num_b, long long den_b) {
    return static_cast<__int128>(num_a) * den_b < static_cast<__int128>(num_b) * den_a;
}

struct GrowNode {
    NodeId id = 0;
    std::vector<std::size_t> members;
    ClassCounts counts;
    NodeSplit best;
};

NodeSplit best_gini_split(const Dataset& data, const std::vector<std::size_t>& members,
                          const ClassCounts& parent, int min_leaf) {
    NodeSplit best;
    if (parent.pure()) return best;
    const long long n = parent.total();
    for (std::size_t q = 0; q < data.feature_count(); ++q) {
        const auto col = sorted_column(data, members, q);
        ClassCounts left;
        for (std::size_t k = 1; k < col.size(); ++k) {
            (col[k - 1].second == 1 ? left.c1 : left.c0)++;
            if (col[k].first <= col[k - 1].first) continue;
            const double mid = 0.5 * (col[k - 1].first + col[k].first);
            if (!(mid > col[k - 1].first && mid < col[k].first)) continue;
            const long long nl = left.total();
            const long long nr = n - nl;
            if (nl < min_leaf || nr < min_leaf) continue;
            const ClassCounts right{parent.c0 - left.c0, parent.c1 - left.c1};
            const long long sum_num = left.c0 * left.c1 * nr + right.c0 * right.c1 * nl;
            const long long den = nl * nr;
            if (!best.found || ratio_less(sum_num, den, best.sum_num, best.den)) {
                best.found = true;
                best.feature = q;
                best.threshold = mid;
                best.sum_num = sum_num;
                best.den = den;
                // decrease = P0*P1/nP - sum_num/den, over denominator nP*den
                best.dec_num = parent.c0 * parent.c1 * den - sum_num * n;
                best.dec_den = n * den;
            }
        }
    }
    if (best.found && best.dec_num <= 0) best.found = false;  // no impurity gain
    return best;
}

void label_leaves(DecisionTree& tree, const Dataset& data) {
    const TreeTopology& topo = tree.topology();
    std::vector<ClassCounts> per_leaf(static_cast<std::size_t>(topo.leaf_count()));
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::span<const double> x{data.row(i), data.feature_count()};
        const NodeId leaf = tree.route(x);
        auto& c = per_leaf[static_cast<std::size_t>(leaf - topo.first_leaf())];
        (data.labels[i] == 1 ? c.c1 : c.c0)++;
    }
    for (NodeId leaf = topo.first_leaf(); leaf <= topo.last_leaf(); ++leaf) {
        const auto& c = per_leaf[static_cast<std::size_t>(leaf - topo.first_leaf())];
        if (c.total() == 0) continue;
        tree.set_leaf_class(leaf, c.majority());
        tree.set_leaf_support(leaf, static_cast<int>(c.total()));
    }
}

}  // namespace

DecisionTree train_cart(const Dataset& data, const CartConfig& config) {
    config.validate();
    data.validate();
    if (data.size() == 0) throw ConfigError("cart: dataset is empty");

    TreeTopology topo(config.depth);
    DecisionTree tree(topo, data.majority_class());

    std::vector<GrowNode> frontier;
    {
        GrowNode root;
        root.id = 1;
        root.members.resize(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) root.members[i] = i;
        root.counts = count_labels(data, root.members);
        root.best = best_gini_split(data, root.members, root.counts, config.min_leaf_size);
        frontier.push_back(std::move(root));
    }

    int budget = config.split_budget;
    while (budget > 0) {
        // Best-first: the expandable node with the largest exact impurity
        // decrease wins the next slot of the budget; ties go to the lowest id.
        std::size_t pick = frontier.size();
        for (std::size_t k = 0; k < frontier.size(); ++k) {
            if (!frontier[k].best.found) continue;
            if (pick == frontier.size()) {
                pick = k;
                continue;
            }
            const auto& a = frontier[k].best;
            const auto& b = frontier[pick].best;
            if (ratio_less(b.dec_num, b.dec_den, a.dec_num, a.dec_den) ||
                (!ratio_less(a.dec_num, a.dec_den, b.dec_num, b.dec_den) &&
                 frontier[k].id < frontier[pick].id)) {
                pick = k;
            }
        }
        if (pick == frontier.size()) break;

        GrowNode node = std::move(frontier[pick]);
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));
        tree.set_split(node.id, Split{static_cast<int>(node.best.feature), node.best.threshold});
        --budget;

        GrowNode left, right;
        left.id = TreeTopology::left_child(node.id);
        right.id = TreeTopology::right_child(node.id);
        for (std::size_t i : node.members) {
            (data.at(i, node.best.feature) < node.best.threshold ? left : right)
                .members.push_back(i);
        }
        for (GrowNode* child : {&left, &right}) {
            if (!topo.is_branch(child->id)) continue;
            child->counts = count_labels(data, child->members);
            child->best = best_gini_split(data, child->members, child->counts,
                                          config.min_leaf_size);
            frontier.push_back(std::move(*child));
        }
    }

    label_leaves(tree, data);
    return tree;
}

void RfConfig::validate() const {
    if (tree_count < 1) throw ConfigError("random forest: tree_count must be at least 1");
    if (depth < 1) throw ConfigError("random forest: depth must be at least 1");
    if (sample_size < 1) throw ConfigError("random forest: sample_size must be at least 1");
}

Forest train_rf(const Dataset& data, const RfConfig& config) {
    config.validate();
    data.validate();
    if (data.size() == 0) throw ConfigError("random forest: dataset is empty");

    CartConfig cart;
    cart.depth = config.depth;
    cart.min_leaf_size = default_min_leaf_size(config.sample_size);
    cart.split_budget = (1 << config.depth) - 1;  // room for a full tree: never binds

    const std::size_t count = static_cast<std::size_t>(config.tree_count);
    std::vector<std::optional<DecisionTree>> slots(count);
    auto train_one = [&](std::size_t r) {
        // Stream r of the master seed: the subsample is a function of (seed, r)
        // alone, so trees are identical no matter how work is scheduled.
        Rng rng = Rng::stream(config.seed, r);
        const std::vector<std::size_t> rows =
            data.size() >= config.sample_size
                ? rng.sample_without_replacement(data.size(), config.sample_size)
                : rng.sample_with_replacement(data.size(), config.sample_size);
        slots[r].emplace(train_cart(data.select(rows), cart));
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>({count, hw, 8});
    if (workers <= 1 || count < 32) {
        for (std::size_t r = 0; r < count; ++r) train_one(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t r = next.fetch_add(1); r < count; r = next.fetch_add(1))
                    train_one(r);
            });
        }
        for (auto& t : pool) t.join();
    }

    std::vector<DecisionTree> trees;
    trees.reserve(count);
    for (auto& s : slots) trees.push_back(std::move(*s));
    Forest forest(std::move(trees));
    forest.set_feature_count(data.feature_count());
    forest.set_feature_names(data.feature_names);
    return forest;
}

}  // namespace ocf
