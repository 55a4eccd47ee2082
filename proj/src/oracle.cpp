#include "ocf/oracle.hpp"

#include "ocf/errors.hpp"
#include "ocf/splits.hpp"
#include "ocf/topology.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstddef>
#include <map>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ocf {

CandidateSplitSet CandidateSplitSet::from(const Dataset& data) {
    data.validate();
    CandidateSplitSet set;
    set.per_feature.resize(data.feature_count());
    for (std::size_t q = 0; q < data.feature_count(); ++q)
        set.per_feature[q] = candidate_midpoints(data, q);
    return set;
}

std::size_t CandidateSplitSet::total() const {
    std::size_t count = 0;
    for (const std::vector<double>& mids : per_feature) count += mids.size();
    return count;
}

namespace {

using Members = std::vector<std::size_t>;

// One candidate split applied to a member set; distinct below-sets only.
struct SideOption {
    Split split;
    Members below;
    Members above;
};

std::vector<Split> flatten_candidates(const CandidateSplitSet& set) {
    std::vector<Split> out;
    for (std::size_t q = 0; q < set.per_feature.size(); ++q)
        for (double thr : set.per_feature[q]) out.push_back(Split{static_cast<int>(q), thr});
    return out;
}

// All distinct one-split partitions of `members`, keeping the first candidate
// (features ascending, thresholds ascending) that achieves each partition.
// Options with an empty side are kept; global deduplication merges them with
// the corresponding unsplit shapes, which come earlier and win.
std::vector<SideOption> side_options(const Dataset& data, const Members& members,
                                     const std::vector<Split>& candidates) {
    std::vector<SideOption> out;
    std::map<Members, bool> seen;
    for (const Split& cand : candidates) {
        SideOption opt;
        opt.split = cand;
        for (std::size_t i : members) {
            const double x = data.at(i, static_cast<std::size_t>(cand.feature));
            (x < cand.threshold ? opt.below : opt.above).push_back(i);
        }
        if (seen.emplace(opt.below, true).second) out.push_back(std::move(opt));
    }
    return out;
}

struct Structure {
    std::vector<int> leaf_pos_of;                   // per point, 0..L-1
    std::vector<std::pair<NodeId, Split>> splits;   // active splits by node id
};

// Collects structures, merging any two that put the training points into the
// same groups: identical groups admit identical labelings, so only one
// representative (the earliest, which has the fewest splits because shapes
// are generated in ascending split count) needs to be kept.
class StructureCollector {
public:
    StructureCollector(std::size_t n, int leaf_count, int min_leaf)
        : n_(n), leaf_count_(leaf_count), min_leaf_(min_leaf) {}

    void emit(const std::array<const Members*, 4>& leaf_members,
              std::vector<std::pair<NodeId, Split>> splits) {
        std::vector<int> leaf_pos_of(n_, -1);
        for (int pos = 0; pos < leaf_count_; ++pos) {
            if (!leaf_members[static_cast<std::size_t>(pos)]) continue;
            const Members& members = *leaf_members[static_cast<std::size_t>(pos)];
            if (!members.empty() && members.size() < static_cast<std::size_t>(min_leaf_))
                return;  // an occupied leaf below the minimum occupancy
            for (std::size_t i : members) leaf_pos_of[i] = pos;
        }
        // Canonical key: group ids in order of first appearance, so that the
        // same partition hashes identically regardless of leaf positions.
        std::string key(n_, ' ');
        std::array<int, 4> relabel{-1, -1, -1, -1};
        int next = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (leaf_pos_of[i] < 0)
                throw InternalError("tree enumeration left a training point unrouted");
            int& g = relabel[static_cast<std::size_t>(leaf_pos_of[i])];
            if (g < 0) g = next++;
            key[i] = static_cast<char>('a' + g);
        }
        if (!index_.emplace(std::move(key), structures_.size()).second) return;
        structures_.push_back(Structure{std::move(leaf_pos_of), std::move(splits)});
    }

    std::vector<Structure> take() { return std::move(structures_); }

private:
    std::size_t n_;
    int leaf_count_;
    int min_leaf_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<Structure> structures_;
};

std::vector<Structure> enumerate_structures(const Dataset& data, int depth, int min_leaf_size,
                                            const OracleLimits& limits) {
    data.validate();
    const std::size_t n = data.size();
    const std::size_t p = data.feature_count();
    if (depth < 1) throw ConfigError("exhaustive search: depth must be at least 1");
    if (depth > limits.max_depth)
        throw ConfigError("exhaustive search refused: depth " + std::to_string(depth) +
                          " exceeds the cap of " + std::to_string(limits.max_depth));
    if (n > limits.max_observations)
        throw ConfigError("exhaustive search refused: " + std::to_string(n) +
                          " observations exceed the cap of " +
                          std::to_string(limits.max_observations));
    if (p > limits.max_features)
        throw ConfigError("exhaustive search refused: " + std::to_string(p) +
                          " features exceed the cap of " + std::to_string(limits.max_features));
    if (min_leaf_size < 1 || static_cast<std::size_t>(min_leaf_size) > n)
        throw ConfigError("exhaustive search: min_leaf_size must be in [1, n]");

    const std::vector<Split> candidates = flatten_candidates(CandidateSplitSet::from(data));
    const TreeTopology topo(depth);
    const int L = topo.leaf_count();
    StructureCollector collect(n, L, min_leaf_size);

    Members all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;

    // Inactive nodes route everything to their rightmost leaf, so the empty
    // tree concentrates all points in the last position.
    {
        std::array<const Members*, 4> leaves{nullptr, nullptr, nullptr, nullptr};
        leaves[static_cast<std::size_t>(L - 1)] = &all;
        collect.emit(leaves, {});
    }

    for (const SideOption& root : side_options(data, all, candidates)) {
        const std::vector<std::pair<NodeId, Split>> root_split{{NodeId{1}, root.split}};
        if (depth == 1) {
            collect.emit({&root.below, &root.above, nullptr, nullptr}, root_split);
            continue;
        }
        // Depth 2: an inactive child places its points in the right leaf of
        // its own subtree (positions 1 and 3).
        collect.emit({nullptr, &root.below, nullptr, &root.above}, root_split);

        const std::vector<SideOption> lefts = side_options(data, root.below, candidates);
        const std::vector<SideOption> rights = side_options(data, root.above, candidates);
        for (const SideOption& lo : lefts) {
            collect.emit({&lo.below, &lo.above, nullptr, &root.above},
                         {{NodeId{1}, root.split}, {NodeId{2}, lo.split}});
        }
        for (const SideOption& ro : rights) {
            collect.emit({nullptr, &root.below, &ro.below, &ro.above},
                         {{NodeId{1}, root.split}, {NodeId{3}, ro.split}});
        }
        for (const SideOption& lo : lefts) {
            for (const SideOption& ro : rights) {
                collect.emit({&lo.below, &lo.above, &ro.below, &ro.above},
                             {{NodeId{1}, root.split},
                              {NodeId{2}, lo.split},
                              {NodeId{3}, ro.split}});
            }
        }
    }
    return collect.take();
}

DecisionTree materialize(const Structure& structure, const TreeTopology& topo, int fallback) {
    DecisionTree tree(topo, fallback);
    for (const auto& [node, split] : structure.splits) tree.set_split(node, split);
    return tree;
}

}  // namespace

std::vector<EnumeratedTree> enumerate_trees(const Dataset& data, int depth, int min_leaf_size,
                                            const OracleLimits& limits) {
    const std::vector<Structure> structures =
        enumerate_structures(data, depth, min_leaf_size, limits);
    const TreeTopology topo(depth);
    const int fallback = data.majority_class();
    const std::size_t n = data.size();
    const std::size_t L = static_cast<std::size_t>(topo.leaf_count());

    std::vector<EnumeratedTree> out;
    out.reserve(structures.size());
    for (const Structure& structure : structures) {
        EnumeratedTree entry{materialize(structure, topo, fallback),
                             std::vector<std::uint8_t>(n, 0),
                             static_cast<int>(structure.splits.size())};
        std::vector<std::size_t> ones(L, 0), total(L, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto pos = static_cast<std::size_t>(structure.leaf_pos_of[i]);
            ones[pos] += static_cast<std::size_t>(data.labels[i]);
            ++total[pos];
        }
        std::vector<int> leaf_class(L, 0);
        for (std::size_t pos = 0; pos < L; ++pos) {
            if (total[pos] == 0) continue;
            leaf_class[pos] = 2 * ones[pos] > total[pos] ? 1 : 0;
            const NodeId leaf = topo.first_leaf() + static_cast<NodeId>(pos);
            entry.tree.set_leaf_class(leaf, leaf_class[pos]);
            entry.tree.set_leaf_support(leaf, total[pos]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto pos = static_cast<std::size_t>(structure.leaf_pos_of[i]);
            entry.misclassified[i] = leaf_class[pos] != data.labels[i] ? 1 : 0;
        }
        out.push_back(std::move(entry));
    }
    return out;
}

namespace {

struct PoolEntry {
    std::uint64_t mask = 0;  // bit i set when training point i is misclassified
    int splits = 0;
    std::size_t struct_idx = 0;
    unsigned labeling = 0;
};

struct ComboBest {
    std::size_t errors = static_cast<std::size_t>(-1);
    int splits = 0;
    std::array<std::size_t, 3> picks{0, 0, 0};

    bool improves_on(const ComboBest& other) const {
        if (errors != other.errors) return errors < other.errors;
        if (splits != other.splits) return splits < other.splits;
        return picks < other.picks;
    }
};

// Search all multisets {i <= j <= k} of pool entries whose split total fits
// the budget. Pool split counts are non-decreasing, so budget overruns break
// the loops early. The running best admits one sound prune: points two trees
// already misclassify stay misclassified under any third vote.
ComboBest best_triple_in_range(const std::vector<PoolEntry>& pool, int budget,
                               std::size_t i_begin, std::size_t i_end) {
    ComboBest best;
    for (std::size_t i = i_begin; i < i_end; ++i) {
        if (3 * pool[i].splits > budget) break;
        for (std::size_t j = i; j < pool.size(); ++j) {
            const int sij = pool[i].splits + pool[j].splits;
            if (sij + pool[j].splits > budget) break;
            const std::uint64_t both = pool[i].mask & pool[j].mask;
            const std::uint64_t either = pool[i].mask | pool[j].mask;
            if (static_cast<std::size_t>(std::popcount(both)) > best.errors) continue;
            for (std::size_t k = j; k < pool.size(); ++k) {
                const int total = sij + pool[k].splits;
                if (total > budget) break;
                const std::uint64_t wrong = both | (pool[k].mask & either);
                const ComboBest candidate{static_cast<std::size_t>(std::popcount(wrong)),
                                          total,
                                          {i, j, k}};
                if (candidate.improves_on(best)) best = candidate;
            }
        }
    }
    return best;
}

}  // namespace

OracleResult best_forest(const Dataset& data, int tree_count, int depth, int split_budget,
                         int min_leaf_size, const OracleLimits& limits) {
    if (tree_count != 1 && tree_count != 3)
        throw ConfigError("exhaustive forest search supports 1 or 3 trees");
    if (split_budget < 0) throw ConfigError("exhaustive forest search: negative split budget");
    const std::size_t n = data.size();
    if (n > 63)
        throw ConfigError("exhaustive forest search refused: " + std::to_string(n) +
                          " observations exceed the 63-point vote mask");

    const std::vector<Structure> structures =
        enumerate_structures(data, depth, min_leaf_size, limits);
    const TreeTopology topo(depth);
    const std::size_t L = static_cast<std::size_t>(topo.leaf_count());

    // Every (structure, leaf labeling) pair collapses to its misclassification
    // mask; the first generated pair per mask has the fewest splits because
    // structures are generated in ascending split count.
    std::vector<PoolEntry> pool;
    std::unordered_map<std::uint64_t, bool> seen_masks;
    for (std::size_t s = 0; s < structures.size(); ++s) {
        const Structure& structure = structures[s];
        const int splits = static_cast<int>(structure.splits.size());
        if (splits > split_budget) continue;
        std::vector<std::size_t> blocks;  // occupied leaf positions
        std::array<std::uint64_t, 4> wrong_as_zero{0, 0, 0, 0};
        std::array<std::uint64_t, 4> wrong_as_one{0, 0, 0, 0};
        std::array<bool, 4> occupied{false, false, false, false};
        for (std::size_t i = 0; i < n; ++i) {
            const auto pos = static_cast<std::size_t>(structure.leaf_pos_of[i]);
            occupied[pos] = true;
            if (data.labels[i] == 1)
                wrong_as_zero[pos] |= std::uint64_t{1} << i;
            else
                wrong_as_one[pos] |= std::uint64_t{1} << i;
        }
        for (std::size_t pos = 0; pos < L; ++pos)
            if (occupied[pos]) blocks.push_back(pos);
        const unsigned labelings = 1u << blocks.size();
        for (unsigned lab = 0; lab < labelings; ++lab) {
            std::uint64_t mask = 0;
            for (std::size_t b = 0; b < blocks.size(); ++b)
                mask |= (lab >> b) & 1u ? wrong_as_one[blocks[b]] : wrong_as_zero[blocks[b]];
            if (seen_masks.emplace(mask, true).second)
                pool.push_back(PoolEntry{mask, splits, s, lab});
        }
    }

    // Drop entries whose misclassified set contains another entry's with at
    // least as many splits: the vote count is monotone in each tree's wrong
    // set, so such entries can never improve any ensemble. This leaves the
    // optimum value and its minimal split total unchanged.
    {
        std::vector<std::size_t> order(pool.size());
        for (std::size_t x = 0; x < order.size(); ++x) order[x] = x;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const int pa = std::popcount(pool[a].mask), pb = std::popcount(pool[b].mask);
            if (pa != pb) return pa < pb;
            if (pool[a].splits != pool[b].splits) return pool[a].splits < pool[b].splits;
            return a < b;
        });
        std::vector<PoolEntry> kept;
        std::vector<bool> keep_flag(pool.size(), false);
        for (std::size_t x : order) {
            bool dominated = false;
            for (const PoolEntry& k : kept) {
                if (k.splits <= pool[x].splits && (k.mask & ~pool[x].mask) == 0) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) {
                kept.push_back(pool[x]);
                keep_flag[x] = true;
            }
        }
        std::vector<PoolEntry> surviving;
        surviving.reserve(kept.size());
        for (std::size_t x = 0; x < pool.size(); ++x)
            if (keep_flag[x]) surviving.push_back(pool[x]);
        pool = std::move(surviving);
    }

    const std::size_t M = pool.size();
    if (M == 0) throw InternalError("exhaustive forest search: empty candidate pool");
    const unsigned long long combos =
        tree_count == 1 ? M
                        : static_cast<unsigned long long>(M) * (M + 1) / 2 * (M + 2) / 3;
    if (combos > limits.max_combinations)
        throw ConfigError("exhaustive forest search refused: " + std::to_string(M) +
                          " candidate trees give " + std::to_string(combos) +
                          " combinations, over the cap of " +
                          std::to_string(limits.max_combinations));

    ComboBest best;
    if (tree_count == 1) {
        for (std::size_t i = 0; i < M; ++i) {
            const ComboBest candidate{static_cast<std::size_t>(std::popcount(pool[i].mask)),
                                      pool[i].splits,
                                      {i, i, i}};
            if (candidate.improves_on(best)) best = candidate;
        }
    } else {
        const unsigned hw = std::thread::hardware_concurrency();
        const std::size_t workers =
            combos >= 2'000'000 ? std::min<std::size_t>(hw == 0 ? 1 : hw, 8) : 1;
        if (workers <= 1) {
            best = best_triple_in_range(pool, split_budget, 0, M);
        } else {
            std::vector<ComboBest> partial(workers);
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> threads;
            for (std::size_t w = 0; w < workers; ++w) {
                threads.emplace_back([&, w] {
                    ComboBest local;
                    for (;;) {
                        const std::size_t i = next.fetch_add(1);
                        if (i >= M) break;
                        const ComboBest chunk =
                            best_triple_in_range(pool, split_budget, i, i + 1);
                        if (chunk.improves_on(local)) local = chunk;
                    }
                    partial[w] = local;
                });
            }
            for (std::thread& t : threads) t.join();
            for (const ComboBest& candidate : partial)
                if (candidate.improves_on(best)) best = candidate;
        }
    }
    if (best.errors == static_cast<std::size_t>(-1))
        throw InternalError("exhaustive forest search: no feasible combination");

    const int fallback = data.majority_class();
    std::vector<DecisionTree> trees;
    const std::size_t count = tree_count == 1 ? 1 : 3;
    for (std::size_t v = 0; v < count; ++v) {
        const PoolEntry& entry = pool[best.picks[v]];
        const Structure& structure = structures[entry.struct_idx];
        DecisionTree tree = materialize(structure, topo, fallback);
        std::array<std::size_t, 4> support{0, 0, 0, 0};
        for (std::size_t i = 0; i < n; ++i)
            ++support[static_cast<std::size_t>(structure.leaf_pos_of[i])];
        std::size_t block = 0;
        for (std::size_t pos = 0; pos < L; ++pos) {
            if (support[pos] == 0) continue;
            const NodeId leaf = topo.first_leaf() + static_cast<NodeId>(pos);
            tree.set_leaf_class(leaf, static_cast<int>((entry.labeling >> block) & 1u));
            tree.set_leaf_support(leaf, support[pos]);
            ++block;
        }
        trees.push_back(std::move(tree));
    }

    OracleResult result{Forest(std::move(trees)), best.errors, best.splits};
    result.forest.set_feature_count(data.feature_count());
    result.forest.set_feature_names(data.feature_names);
    return result;
}

}  // namespace ocf
