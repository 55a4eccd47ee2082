#include "ocf/formulation.hpp"

#include "ocf/errors.hpp"

#include <initializer_list>
#include <limits>
#include <string>
#include <utility>

namespace ocf {

void OcfConfig::validate() const {
    if (tree_count < 1 || tree_count % 2 == 0)
        throw ConfigError("ocf: tree_count must be a positive odd number");
    if (depth < 1) throw ConfigError("ocf: depth must be at least 1");
    if (split_budget < 1) throw ConfigError("ocf: split_budget must be at least 1");
    if (min_leaf_size < 1) throw ConfigError("ocf: min_leaf_size must be at least 1");
    if (!(epsilon > 0.0) || !(epsilon < 0.5))
        throw ConfigError("ocf: epsilon must lie strictly between 0 and 0.5");
    if (!budget_as_constraint && !(split_penalty > 0.0))
        throw ConfigError("ocf: the penalty objective needs a positive split_penalty");
}

namespace {

std::string tag(const char* stem, std::initializer_list<long long> indices) {
    std::string s(stem);
    for (long long v : indices) {
        s += '_';
        s += std::to_string(v);
    }
    return s;
}

}  // namespace

VariableRegistry::VariableRegistry(std::size_t observation_count, std::size_t feature_count,
                                   const OcfConfig& config)
    : n_(observation_count),
      p_(feature_count),
      trees_(config.tree_count),
      topo_(config.depth),
      flip_(config.symmetry_breaking) {
    config.validate();
    if (n_ == 0) throw ConfigError("variable registry: no observations");
    if (p_ == 0) throw ConfigError("variable registry: no features");

    const long long n = static_cast<long long>(n_);
    const long long p = static_cast<long long>(p_);
    const long long R = trees_;
    const long long L = topo_.leaf_count();
    const long long B = topo_.branch_count();

    base_alpha_ = 0;
    base_theta_ = base_alpha_ + n;
    base_z_ = base_theta_ + n * R;
    base_d_ = base_z_ + n * L * R;
    base_l_ = base_d_ + B * R;
    base_a_ = base_l_ + L * R;
    base_b_ = base_a_ + B * p * R;
    base_flip_ = base_b_ + B * R;
    const long long total = base_flip_ + (flip_ ? n * R : 0);
    if (total > std::numeric_limits<int>::max())
        throw ConfigError("variable registry: model too large to index");
    total_ = static_cast<int>(total);
}

void VariableRegistry::check_obs(std::size_t i) const {
    if (i >= n_) throw InternalError("variable registry: observation index out of range");
}

void VariableRegistry::check_tree(int r) const {
    if (r < 0 || r >= trees_) throw InternalError("variable registry: tree index out of range");
}

void VariableRegistry::check_feature(std::size_t q) const {
    if (q >= p_) throw InternalError("variable registry: feature index out of range");
}

void VariableRegistry::check_branch(NodeId t) const {
    if (!topo_.is_branch(t)) throw InternalError("variable registry: not a branch node");
}

void VariableRegistry::check_leaf(NodeId t) const {
    if (!topo_.is_leaf(t)) throw InternalError("variable registry: not a leaf node");
}

int VariableRegistry::alpha(std::size_t i) const {
    check_obs(i);
    return static_cast<int>(base_alpha_ + static_cast<long long>(i));
}

int VariableRegistry::theta(std::size_t i, int r) const {
    check_obs(i);
    check_tree(r);
    return static_cast<int>(base_theta_ + static_cast<long long>(i) * trees_ + r);
}

int VariableRegistry::z(std::size_t i, NodeId leaf, int r) const {
    check_obs(i);
    check_leaf(leaf);
    check_tree(r);
    const long long pos = leaf - topo_.first_leaf();
    const long long L = topo_.leaf_count();
    return static_cast<int>(base_z_ + (static_cast<long long>(i) * L + pos) * trees_ + r);
}

int VariableRegistry::d(NodeId branch, int r) const {
    check_branch(branch);
    check_tree(r);
    return static_cast<int>(base_d_ + static_cast<long long>(branch - 1) * trees_ + r);
}

int VariableRegistry::l(NodeId leaf, int r) const {
    check_leaf(leaf);
    check_tree(r);
    const long long pos = leaf - topo_.first_leaf();
    return static_cast<int>(base_l_ + pos * trees_ + r);
}

int VariableRegistry::a(NodeId branch, std::size_t q, int r) const {
    check_branch(branch);
    check_feature(q);
    check_tree(r);
    const long long p = static_cast<long long>(p_);
    return static_cast<int>(base_a_ +
                            (static_cast<long long>(branch - 1) * p + static_cast<long long>(q)) *
                                trees_ +
                            r);
}

int VariableRegistry::b(NodeId branch, int r) const {
    check_branch(branch);
    check_tree(r);
    return static_cast<int>(base_b_ + static_cast<long long>(branch - 1) * trees_ + r);
}

int VariableRegistry::flip(std::size_t i, int r) const {
    if (!flip_) throw InternalError("variable registry: no disagreement variables in this model");
    check_obs(i);
    check_tree(r);
    return static_cast<int>(base_flip_ + static_cast<long long>(i) * trees_ + r);
}

void VariableRegistry::register_variables(MilpModel& model) const {
    if (model.variable_count() != 0)
        throw InternalError("variable registry: target model already has columns");

    for (std::size_t i = 0; i < n_; ++i)
        model.add_variable(tag("alpha", {static_cast<long long>(i + 1)}), VarType::Binary, 0, 1);
    for (std::size_t i = 0; i < n_; ++i)
        for (int r = 0; r < trees_; ++r)
            model.add_variable(tag("theta", {static_cast<long long>(i + 1), r + 1}),
                               VarType::Binary, 0, 1);
    for (std::size_t i = 0; i < n_; ++i)
        for (NodeId t = topo_.first_leaf(); t <= topo_.last_leaf(); ++t)
            for (int r = 0; r < trees_; ++r)
                model.add_variable(tag("z", {static_cast<long long>(i + 1), t, r + 1}),
                                   VarType::Binary, 0, 1);
    for (NodeId t = 1; t < topo_.first_leaf(); ++t)
        for (int r = 0; r < trees_; ++r)
            model.add_variable(tag("d", {t, r + 1}), VarType::Binary, 0, 1);
    for (NodeId t = topo_.first_leaf(); t <= topo_.last_leaf(); ++t)
        for (int r = 0; r < trees_; ++r)
            model.add_variable(tag("l", {t, r + 1}), VarType::Binary, 0, 1);
    for (NodeId t = 1; t < topo_.first_leaf(); ++t)
        for (std::size_t q = 0; q < p_; ++q)
            for (int r = 0; r < trees_; ++r)
                model.add_variable(tag("a", {t, static_cast<long long>(q + 1), r + 1}),
                                   VarType::Binary, 0, 1);
    for (NodeId t = 1; t < topo_.first_leaf(); ++t)
        for (int r = 0; r < trees_; ++r)
            model.add_variable(tag("b", {t, r + 1}), VarType::Continuous, 0, 1);
    if (flip_) {
        for (std::size_t i = 0; i < n_; ++i)
            for (int r = 0; r < trees_; ++r)
                model.add_variable(tag("xor", {static_cast<long long>(i + 1), r + 1}),
                                   VarType::Binary, 0, 1);
    }

    if (model.variable_count() != static_cast<std::size_t>(total_))
        throw InternalError("variable registry: column count mismatch after registration");
}

namespace {

// Adds every leaf-agreement row pair for (tree r, leaf t, observations i<j):
// members of one leaf must cast the same vote.
void add_pair_rows(MilpModel& model, const VariableRegistry& reg, int r, NodeId t,
                   std::size_t i, std::size_t j) {
    const long long i1 = static_cast<long long>(i + 1);
    const long long j1 = static_cast<long long>(j + 1);
    model.add_constraint(tag("agree_up", {r + 1, t, i1, j1}),
                         {{reg.theta(i, r), 1.0},
                          {reg.theta(j, r), -1.0},
                          {reg.z(i, t, r), 1.0},
                          {reg.z(j, t, r), 1.0}},
                         Relation::LessEqual, 2.0);
    model.add_constraint(tag("agree_dn", {r + 1, t, i1, j1}),
                         {{reg.theta(i, r), -1.0},
                          {reg.theta(j, r), 1.0},
                          {reg.z(i, t, r), 1.0},
                          {reg.z(j, t, r), 1.0}},
                         Relation::LessEqual, 2.0);
}

}  // namespace

OcfModel build_ocf_model(const Dataset& data, const OcfConfig& config) {
    config.validate();
    data.validate();
    const std::size_t n = data.size();
    const std::size_t p = data.feature_count();
    if (n == 0) throw ConfigError("ocf model: dataset is empty");
    if (p == 0) throw ConfigError("ocf model: dataset has no features");
    if (static_cast<std::size_t>(config.min_leaf_size) > n)
        throw ConfigError("ocf model: min_leaf_size exceeds the observation count");

    VariableRegistry reg(n, p, config);
    MilpModel model;
    reg.register_variables(model);

    const TreeTopology& topo = reg.topology();
    const int R = config.tree_count;
    const double inv_n = 1.0 / static_cast<double>(n);
    const double inv_R = 1.0 / static_cast<double>(R);

    // Objective: the misclassified share. |y - alpha| with a 0/1 constant y
    // is affine: y + (1 - 2y) * alpha.
    double constant = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const int y = data.labels[i];
        constant += y * inv_n;
        model.add_objective_term(reg.alpha(i), (1.0 - 2.0 * y) * inv_n);
    }
    model.add_objective_constant(constant);
    if (!config.budget_as_constraint) {
        for (int r = 0; r < R; ++r)
            for (NodeId t = 1; t < topo.first_leaf(); ++t)
                model.add_objective_term(reg.d(t, r), config.split_penalty);
    }

    // Majority vote: alpha must round the mean of the votes. With odd R the
    // mean is never exactly 1/2, so the two rows pin alpha.
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<LinearTerm> up, dn;
        up.reserve(static_cast<std::size_t>(R) + 1);
        dn.reserve(static_cast<std::size_t>(R) + 1);
        for (int r = 0; r < R; ++r) {
            up.push_back({reg.theta(i, r), inv_R});
            dn.push_back({reg.theta(i, r), -inv_R});
        }
        up.push_back({reg.alpha(i), -1.0});
        dn.push_back({reg.alpha(i), 1.0});
        const long long i1 = static_cast<long long>(i + 1);
        model.add_constraint(tag("vote_up", {i1}), std::move(up), Relation::LessEqual, 0.5);
        model.add_constraint(tag("vote_dn", {i1}), std::move(dn), Relation::LessEqual, 0.5);
    }

    // Per-tree structure: feature selectors sum to the split indicator, the
    // threshold is capped by it, and children split only under split parents.
    for (int r = 0; r < R; ++r) {
        for (NodeId t = 1; t < topo.first_leaf(); ++t) {
            std::vector<LinearTerm> sel;
            sel.reserve(p + 1);
            for (std::size_t q = 0; q < p; ++q) sel.push_back({reg.a(t, q, r), 1.0});
            sel.push_back({reg.d(t, r), -1.0});
            model.add_constraint(tag("select", {t, r + 1}), std::move(sel), Relation::Equal, 0.0);
            model.add_constraint(tag("thrcap", {t, r + 1}),
                                 {{reg.b(t, r), 1.0}, {reg.d(t, r), -1.0}}, Relation::LessEqual,
                                 0.0);
            if (t != 1) {
                model.add_constraint(
                    tag("parent", {t, r + 1}),
                    {{reg.d(t, r), 1.0}, {reg.d(TreeTopology::parent(t), r), -1.0}},
                    Relation::LessEqual, 0.0);
            }
        }
    }

    // Each observation occupies exactly one leaf per tree.
    for (int r = 0; r < R; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<LinearTerm> row;
            row.reserve(static_cast<std::size_t>(topo.leaf_count()));
            for (NodeId t = topo.first_leaf(); t <= topo.last_leaf(); ++t)
                row.push_back({reg.z(i, t, r), 1.0});
            model.add_constraint(tag("place", {static_cast<long long>(i + 1), r + 1}),
                                 std::move(row), Relation::Equal, 1.0);
        }
    }

    // Occupied leaves are flagged and must meet the minimum occupancy.
    for (int r = 0; r < R; ++r) {
        for (NodeId t = topo.first_leaf(); t <= topo.last_leaf(); ++t) {
            for (std::size_t i = 0; i < n; ++i) {
                model.add_constraint(tag("occupy", {static_cast<long long>(i + 1), t, r + 1}),
                                     {{reg.z(i, t, r), 1.0}, {reg.l(t, r), -1.0}},
                                     Relation::LessEqual, 0.0);
            }
        }
    }
    for (int r = 0; r < R; ++r) {
        for (NodeId t = topo.first_leaf(); t <= topo.last_leaf(); ++t) {
            std::vector<LinearTerm> row;
            row.reserve(n + 1);
            for (std::size_t i = 0; i < n; ++i) row.push_back({reg.z(i, t, r), 1.0});
            row.push_back({reg.l(t, r), -static_cast<double>(config.min_leaf_size)});
            model.add_constraint(tag("support", {t, r + 1}), std::move(row),
                                 Relation::GreaterEqual, 0.0);
        }
    }

    // Routing: membership in a leaf forces every ancestor test. Left steps
    // are epsilon-strict (x < b), right steps are weak (x >= b); an inactive
    // node (a = 0, b = 0) therefore only admits the right branch.
    for (int r = 0; r < R; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            const long long i1 = static_cast<long long>(i + 1);
            for (NodeId t = topo.first_leaf(); t <= topo.last_leaf(); ++t) {
                const auto [lefts, rights] = topo.ancestors(t);
                for (NodeId m : lefts) {
                    std::vector<LinearTerm> row;
                    row.reserve(p + 2);
                    for (std::size_t q = 0; q < p; ++q) {
                        const double x = data.at(i, q);
                        if (x != 0.0) row.push_back({reg.a(m, q, r), x});
                    }
                    row.push_back({reg.b(m, r), -1.0});
                    row.push_back({reg.z(i, t, r), 1.0 + config.epsilon});
                    model.add_constraint(tag("left", {i1, t, m, r + 1}), std::move(row),
                                         Relation::LessEqual, 1.0);
                }
                for (NodeId m : rights) {
                    std::vector<LinearTerm> row;
                    row.reserve(p + 2);
                    for (std::size_t q = 0; q < p; ++q) {
                        const double x = data.at(i, q);
                        if (x != 0.0) row.push_back({reg.a(m, q, r), x});
                    }
                    row.push_back({reg.b(m, r), -1.0});
                    row.push_back({reg.z(i, t, r), -1.0});
                    model.add_constraint(tag("right", {i1, t, m, r + 1}), std::move(row),
                                         Relation::GreaterEqual, -1.0);
                }
            }
        }
    }

    // Leaf agreement, eager when the row count stays manageable.
    bool lazy = false;
    {
        const unsigned long long pairs = static_cast<unsigned long long>(n) * (n - 1) / 2;
        const unsigned long long rows = 2ULL * pairs *
                                        static_cast<unsigned long long>(topo.leaf_count()) *
                                        static_cast<unsigned long long>(R);
        if (rows <= config.eager_pair_limit) {
            for (int r = 0; r < R; ++r)
                for (NodeId t = topo.first_leaf(); t <= topo.last_leaf(); ++t)
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = i + 1; j < n; ++j)
                            add_pair_rows(model, reg, r, t, i, j);
        } else {
            lazy = true;
        }
    }

    // Global split budget.
    if (config.budget_as_constraint) {
        std::vector<LinearTerm> row;
        row.reserve(static_cast<std::size_t>(R) * static_cast<std::size_t>(topo.branch_count()));
        for (int r = 0; r < R; ++r)
            for (NodeId t = 1; t < topo.first_leaf(); ++t) row.push_back({reg.d(t, r), 1.0});
        model.add_constraint("budget", std::move(row), Relation::LessEqual,
                             static_cast<double>(config.split_budget));
    }

    // Symmetry breaking: xor_i_r = theta_i_r XOR alpha_i (exact for
    // binaries), and trees ordered by how much they disagree with the vote.
    if (config.symmetry_breaking) {
        for (std::size_t i = 0; i < n; ++i) {
            const long long i1 = static_cast<long long>(i + 1);
            for (int r = 0; r < R; ++r) {
                const int th = reg.theta(i, r);
                const int al = reg.alpha(i);
                const int fl = reg.flip(i, r);
                model.add_constraint(tag("flip_a", {i1, r + 1}),
                                     {{th, 1.0}, {al, -1.0}, {fl, -1.0}}, Relation::LessEqual,
                                     0.0);
                model.add_constraint(tag("flip_b", {i1, r + 1}),
                                     {{al, 1.0}, {th, -1.0}, {fl, -1.0}}, Relation::LessEqual,
                                     0.0);
                model.add_constraint(tag("flip_c", {i1, r + 1}),
                                     {{fl, 1.0}, {th, -1.0}, {al, -1.0}}, Relation::LessEqual,
                                     0.0);
                model.add_constraint(tag("flip_d", {i1, r + 1}),
                                     {{fl, 1.0}, {th, 1.0}, {al, 1.0}}, Relation::LessEqual,
                                     2.0);
            }
        }
        for (int r = 0; r + 1 < R; ++r) {
            std::vector<LinearTerm> row;
            row.reserve(2 * n);
            for (std::size_t i = 0; i < n; ++i) row.push_back({reg.flip(i, r), 1.0});
            for (std::size_t i = 0; i < n; ++i) row.push_back({reg.flip(i, r + 1), -1.0});
            model.add_constraint(tag("flip_order", {r + 1}), std::move(row), Relation::LessEqual,
                                 0.0);
        }
    }

    OcfModel built{std::move(model), std::move(reg), config, lazy, {}};
    return built;
}

OcfModel build_oct_model(const Dataset& data, int depth, int split_budget, int min_leaf_size,
                         double epsilon) {
    OcfConfig config;
    config.tree_count = 1;
    config.depth = depth;
    config.split_budget = split_budget;
    config.min_leaf_size = min_leaf_size;
    config.epsilon = epsilon;
    config.symmetry_breaking = false;  // nothing to permute with one tree
    config.warm_start = false;
    return build_ocf_model(data, config);
}

}  // namespace ocf
