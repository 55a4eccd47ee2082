#include "ocf/baselines.hpp"
#include "ocf/errors.hpp"
#include "ocf/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ocf {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

int round_binary(double v, double tol, const std::string& what) {
    const double r = std::round(v);
    if (std::abs(v - r) > tol || (r != 0.0 && r != 1.0)) {
        throw SolverError("extract: " + what + " = " + fmt_double(v) +
                          " is not 0/1 within tolerance");
    }
    return static_cast<int>(r);
}

}  // namespace

Forest extract_forest(const std::vector<double>& assignment, const VariableRegistry& registry,
                      const OcfConfig& config, double integrality_tol) {
    config.validate();
    if (assignment.size() != static_cast<std::size_t>(registry.column_count()))
        throw ConfigError("extract: assignment length does not match the model");

    const TreeTopology& topo = registry.topology();
    const std::size_t n = registry.observation_count();
    const std::size_t p = registry.feature_count();
    const int R = registry.tree_count();

    std::vector<DecisionTree> trees;
    trees.reserve(static_cast<std::size_t>(R));
    for (int r = 0; r < R; ++r) {
        DecisionTree tree(topo, 0);
        for (NodeId t = 1; t < topo.first_leaf(); ++t) {
            const std::string where = "node " + std::to_string(t) + " of tree " +
                                      std::to_string(r + 1);
            const int active = round_binary(assignment[static_cast<std::size_t>(
                                                registry.d(t, r))],
                                            integrality_tol, "split indicator at " + where);
            int chosen = -1;
            int ones = 0;
            for (std::size_t q = 0; q < p; ++q) {
                const int sel = round_binary(
                    assignment[static_cast<std::size_t>(registry.a(t, q, r))], integrality_tol,
                    "feature selector at " + where);
                if (sel == 1) {
                    ++ones;
                    if (chosen < 0) chosen = static_cast<int>(q);
                }
            }
            if (ones != active)
                throw SolverError("extract: " + std::to_string(ones) +
                                  " features selected at " + where + " but the split indicator is " +
                                  std::to_string(active));
            if (active == 1) {
                double thr = assignment[static_cast<std::size_t>(registry.b(t, r))];
                thr = std::min(1.0, std::max(0.0, thr));
                try {
                    tree.set_split(t, Split{chosen, thr});
                } catch (const ConfigError&) {
                    throw SolverError("extract: active split under an inactive parent at " +
                                      where);
                }
            }
        }

        // Leaf classes from the votes of the observations placed there.
        std::size_t vote_ones = 0;
        std::vector<int> votes(n);
        for (std::size_t i = 0; i < n; ++i) {
            votes[i] = round_binary(assignment[static_cast<std::size_t>(registry.theta(i, r))],
                                    integrality_tol,
                                    "vote of observation " + std::to_string(i + 1) + " in tree " +
                                        std::to_string(r + 1));
            vote_ones += static_cast<std::size_t>(votes[i]);
        }
        for (NodeId t = topo.first_leaf(); t <= topo.last_leaf(); ++t) {
            int members = 0;
            int leaf_class = -1;
            for (std::size_t i = 0; i < n; ++i) {
                const int in_leaf = round_binary(
                    assignment[static_cast<std::size_t>(registry.z(i, t, r))], integrality_tol,
                    "membership of observation " + std::to_string(i + 1));
                if (in_leaf == 0) continue;
                ++members;
                if (leaf_class < 0) {
                    leaf_class = votes[i];
                } else if (leaf_class != votes[i]) {
                    throw SolverError("extract: members of leaf " + std::to_string(t) +
                                      " in tree " + std::to_string(r + 1) +
                                      " cast different votes");
                }
            }
            if (members > 0) {
                tree.set_leaf_class(t, leaf_class);
                tree.set_leaf_support(t, members);
            }
        }
        tree.set_fallback_class(2 * vote_ones > n ? 1 : 0);
        trees.push_back(std::move(tree));
    }

    Forest forest(std::move(trees));
    forest.set_feature_count(p);
    return forest;
}

std::vector<double> warm_start_assignment(const Dataset& data, const OcfConfig& config,
                                          const std::vector<std::vector<std::size_t>>& tree_features) {
    config.validate();
    data.validate();
    const std::size_t n = data.size();
    if (n == 0) throw ConfigError("warm start: dataset is empty");
    if (static_cast<std::size_t>(config.min_leaf_size) > n)
        throw ConfigError("warm start: min_leaf_size exceeds the observation count");
    const int R = config.tree_count;
    if (tree_features.size() != static_cast<std::size_t>(R))
        throw ConfigError("warm start: need one feature subset per tree");
    for (const std::vector<std::size_t>& subset : tree_features) {
        if (subset.empty()) throw ConfigError("warm start: empty feature subset");
        for (std::size_t q : subset)
            if (q >= data.feature_count())
                throw ConfigError("warm start: feature index out of range");
    }

    VariableRegistry reg(n, data.feature_count(), config);
    const TreeTopology& topo = reg.topology();

    // One stump per tree while the budget lasts; later trees stay empty.
    // A stump is also dropped when a side would be too small or a left-side
    // point sits within epsilon of the threshold (the strict-routing row
    // would be violated).
    struct PlannedTree {
        bool split = false;
        std::size_t feature = 0;
        double threshold = 0.0;
    };
    std::vector<PlannedTree> planned(static_cast<std::size_t>(R));
    int budget_left = config.budget_as_constraint ? config.split_budget
                                                  : topo.branch_count() * R;
    for (int k = 0; k < R; ++k) {
        if (budget_left == 0) break;
        const Stump stump = best_stump(data, tree_features[static_cast<std::size_t>(k)]);
        if (!stump.split) continue;
        std::size_t left = 0, right = 0;
        bool margin_ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = data.at(i, stump.split->feature);
            if (x < stump.split->threshold) {
                ++left;
                if (!(x + config.epsilon <= stump.split->threshold)) margin_ok = false;
            } else {
                ++right;
            }
        }
        if (!margin_ok || left < static_cast<std::size_t>(config.min_leaf_size) ||
            right < static_cast<std::size_t>(config.min_leaf_size))
            continue;
        planned[static_cast<std::size_t>(k)] = {true, static_cast<std::size_t>(
                                                          stump.split->feature),
                                                stump.split->threshold};
        --budget_left;
    }

    // Route every observation, label leaves by member majority, vote.
    const std::size_t leaf_count = static_cast<std::size_t>(topo.leaf_count());
    std::vector<std::vector<int>> leaf_of(static_cast<std::size_t>(R),
                                          std::vector<int>(n));  // leaf position
    std::vector<std::vector<int>> theta(static_cast<std::size_t>(R), std::vector<int>(n));
    for (int k = 0; k < R; ++k) {
        DecisionTree tree(topo, 0);
        const auto& plan = planned[static_cast<std::size_t>(k)];
        if (plan.split)
            tree.set_split(1, Split{static_cast<int>(plan.feature), plan.threshold});
        std::vector<long long> ones(leaf_count, 0), members(leaf_count, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::span<const double> x{data.row(i), data.feature_count()};
            const int pos = tree.route(x) - topo.first_leaf();
            leaf_of[static_cast<std::size_t>(k)][i] = pos;
            ++members[static_cast<std::size_t>(pos)];
            ones[static_cast<std::size_t>(pos)] += data.labels[i];
        }
        std::vector<int> leaf_class(leaf_count, 0);
        for (std::size_t s = 0; s < leaf_count; ++s)
            leaf_class[s] = 2 * ones[s] > members[s] ? 1 : 0;
        for (std::size_t i = 0; i < n; ++i)
            theta[static_cast<std::size_t>(k)][i] =
                leaf_class[static_cast<std::size_t>(leaf_of[static_cast<std::size_t>(k)][i])];
    }

    std::vector<int> alpha(n);
    for (std::size_t i = 0; i < n; ++i) {
        int sum = 0;
        for (int k = 0; k < R; ++k) sum += theta[static_cast<std::size_t>(k)][i];
        alpha[i] = 2 * sum > R ? 1 : 0;
    }

    // With symmetry breaking the disagreement counts must be non-decreasing
    // in the tree index, so trees are assigned slots in that order.
    std::vector<int> order(static_cast<std::size_t>(R));
    std::iota(order.begin(), order.end(), 0);
    if (config.symmetry_breaking) {
        std::vector<long long> disagreements(static_cast<std::size_t>(R), 0);
        for (int k = 0; k < R; ++k)
            for (std::size_t i = 0; i < n; ++i)
                disagreements[static_cast<std::size_t>(k)] +=
                    theta[static_cast<std::size_t>(k)][i] != alpha[i];
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
            return disagreements[static_cast<std::size_t>(x)] <
                   disagreements[static_cast<std::size_t>(y)];
        });
    }

    std::vector<double> assignment(static_cast<std::size_t>(reg.column_count()), 0.0);
    for (std::size_t i = 0; i < n; ++i)
        assignment[static_cast<std::size_t>(reg.alpha(i))] = alpha[i];
    for (int r = 0; r < R; ++r) {
        const int k = order[static_cast<std::size_t>(r)];
        const auto& plan = planned[static_cast<std::size_t>(k)];
        if (plan.split) {
            assignment[static_cast<std::size_t>(reg.d(1, r))] = 1.0;
            assignment[static_cast<std::size_t>(reg.a(1, plan.feature, r))] = 1.0;
            assignment[static_cast<std::size_t>(reg.b(1, r))] = plan.threshold;
        }
        std::vector<char> occupied(static_cast<std::size_t>(topo.leaf_count()), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const int pos = leaf_of[static_cast<std::size_t>(k)][i];
            occupied[static_cast<std::size_t>(pos)] = 1;
            assignment[static_cast<std::size_t>(
                reg.z(i, topo.first_leaf() + pos, r))] = 1.0;
            assignment[static_cast<std::size_t>(reg.theta(i, r))] =
                theta[static_cast<std::size_t>(k)][i];
            if (config.symmetry_breaking) {
                assignment[static_cast<std::size_t>(reg.flip(i, r))] =
                    theta[static_cast<std::size_t>(k)][i] != alpha[i] ? 1.0 : 0.0;
            }
        }
        for (NodeId t = topo.first_leaf(); t <= topo.last_leaf(); ++t) {
            if (occupied[static_cast<std::size_t>(t - topo.first_leaf())])
                assignment[static_cast<std::size_t>(reg.l(t, r))] = 1.0;
        }
    }
    return assignment;
}

std::vector<std::string> verify_solution_consistency(const Dataset& data, const OcfModel& built,
                                                     const std::vector<double>& assignment,
                                                     double tol) {
    std::vector<std::string> problems;
    const VariableRegistry& reg = built.registry;
    const std::size_t n = reg.observation_count();
    const int R = reg.tree_count();
    const TreeTopology& topo = reg.topology();

    if (assignment.size() != static_cast<std::size_t>(reg.column_count())) {
        problems.push_back("assignment covers " + std::to_string(assignment.size()) +
                           " columns, model has " + std::to_string(reg.column_count()));
        return problems;
    }
    if (data.size() != n) {
        problems.push_back("dataset size does not match the model");
        return problems;
    }

    const AuditReport audit = audit_feasibility(built.model, assignment, tol);
    if (!audit.clean()) {
        std::string first;
        if (!audit.rows.empty())
            first = audit.rows.front().where + ": " + audit.rows.front().detail;
        else if (!audit.integrality.empty())
            first = audit.integrality.front().where + ": " + audit.integrality.front().detail;
        else
            first = audit.bounds.front().where + ": " + audit.bounds.front().detail;
        problems.push_back("feasibility audit found " + std::to_string(audit.rows.size()) +
                           " row, " + std::to_string(audit.integrality.size()) +
                           " integrality and " + std::to_string(audit.bounds.size()) +
                           " bound violations; first: " + first);
    }

    Forest forest;
    try {
        forest = extract_forest(assignment, reg, built.config, tol);
    } catch (const Error& e) {
        problems.push_back(e.what());
        return problems;
    }

    // The ensemble label must be the strict majority of the votes.
    std::size_t vote_defects = 0;
    for (std::size_t i = 0; i < n; ++i) {
        int sum = 0;
        for (int r = 0; r < R; ++r)
            sum += assignment[static_cast<std::size_t>(reg.theta(i, r))] > 0.5;
        const int expect = 2 * sum > R ? 1 : 0;
        const int have = assignment[static_cast<std::size_t>(reg.alpha(i))] > 0.5;
        if (expect != have && vote_defects++ < 3)
            problems.push_back("observation " + std::to_string(i + 1) + ": ensemble label " +
                               std::to_string(have) + " but the votes say " +
                               std::to_string(expect));
    }
    if (vote_defects > 3)
        problems.push_back("(" + std::to_string(vote_defects - 3) +
                           " more vote/label mismatches)");

    // Routing the data through the extracted trees must reproduce the
    // membership variables.
    std::size_t route_defects = 0;
    for (int r = 0; r < R; ++r) {
        const DecisionTree& tree = forest.tree(static_cast<std::size_t>(r));
        for (std::size_t i = 0; i < n; ++i) {
            std::span<const double> x{data.row(i), data.feature_count()};
            const NodeId routed = tree.route(x);
            NodeId assigned = 0;
            for (NodeId t = topo.first_leaf(); t <= topo.last_leaf(); ++t) {
                if (assignment[static_cast<std::size_t>(reg.z(i, t, r))] > 0.5) {
                    assigned = t;
                    break;
                }
            }
            if (routed != assigned && route_defects++ < 3)
                problems.push_back("observation " + std::to_string(i + 1) + " routes to leaf " +
                                   std::to_string(routed) + " of tree " + std::to_string(r + 1) +
                                   " but the model placed it in leaf " + std::to_string(assigned));
        }
    }
    if (route_defects > 3)
        problems.push_back("(" + std::to_string(route_defects - 3) + " more routing mismatches)");

    // Occupancy flags and the minimum leaf size.
    for (int r = 0; r < R; ++r) {
        for (NodeId t = topo.first_leaf(); t <= topo.last_leaf(); ++t) {
            std::size_t members = 0;
            for (std::size_t i = 0; i < n; ++i)
                members += assignment[static_cast<std::size_t>(reg.z(i, t, r))] > 0.5;
            const bool flagged = assignment[static_cast<std::size_t>(reg.l(t, r))] > 0.5;
            if (flagged != (members > 0))
                problems.push_back("leaf " + std::to_string(t) + " of tree " +
                                   std::to_string(r + 1) + " is " +
                                   (flagged ? "flagged occupied" : "flagged empty") + " but holds " +
                                   std::to_string(members) + " observations");
            if (members > 0 && members < static_cast<std::size_t>(built.config.min_leaf_size))
                problems.push_back("leaf " + std::to_string(t) + " of tree " +
                                   std::to_string(r + 1) + " holds " + std::to_string(members) +
                                   " observations, minimum is " +
                                   std::to_string(built.config.min_leaf_size));
        }
    }

    // Split budget over the whole forest.
    int splits = 0;
    for (const DecisionTree& tree : forest.trees()) splits += tree.active_split_count();
    if (built.config.budget_as_constraint && splits > built.config.split_budget)
        problems.push_back("forest uses " + std::to_string(splits) + " splits, budget is " +
                           std::to_string(built.config.split_budget));

    // The objective must equal the misclassified share of the training data.
    double objective = built.model.evaluate_objective(assignment);
    if (!built.config.budget_as_constraint) objective -= built.config.split_penalty * splits;
    const int errors = forest_training_errors(forest, data.features, data.labels,
                                              data.feature_count());
    if (std::abs(objective * static_cast<double>(n) - errors) > 1e-3)
        problems.push_back("objective " + fmt_double(objective) + " implies " +
                           fmt_double(objective * static_cast<double>(n)) +
                           " training errors but the extracted forest makes " +
                           std::to_string(errors));

    return problems;
}

std::size_t add_violated_pair_rows(OcfModel& built, const std::vector<double>& assignment) {
    const VariableRegistry& reg = built.registry;
    if (assignment.size() != static_cast<std::size_t>(reg.column_count()))
        throw ConfigError("pair generation: assignment length does not match the model");
    const TreeTopology& topo = reg.topology();
    const std::size_t n = reg.observation_count();

    std::size_t added = 0;
    for (int r = 0; r < reg.tree_count(); ++r) {
        for (NodeId t = topo.first_leaf(); t <= topo.last_leaf(); ++t) {
            std::vector<std::size_t> zeros, ones;
            for (std::size_t i = 0; i < n; ++i) {
                if (assignment[static_cast<std::size_t>(reg.z(i, t, r))] <= 0.5) continue;
                (assignment[static_cast<std::size_t>(reg.theta(i, r))] > 0.5 ? ones : zeros)
                    .push_back(i);
            }
            if (zeros.empty() || ones.empty()) continue;
            for (std::size_t i0 : zeros) {
                for (std::size_t i1 : ones) {
                    const std::size_t i = std::min(i0, i1);
                    const std::size_t j = std::max(i0, i1);
                    if (!built.added_pairs.insert(PairKey{r, t, i, j}).second) continue;
                    const long long ip = static_cast<long long>(i + 1);
                    const long long jp = static_cast<long long>(j + 1);
                    built.model.add_constraint(
                        "agree_up_" + std::to_string(r + 1) + "_" + std::to_string(t) + "_" +
                            std::to_string(ip) + "_" + std::to_string(jp),
                        {{reg.theta(i, r), 1.0},
                         {reg.theta(j, r), -1.0},
                         {reg.z(i, t, r), 1.0},
                         {reg.z(j, t, r), 1.0}},
                        Relation::LessEqual, 2.0);
                    built.model.add_constraint(
                        "agree_dn_" + std::to_string(r + 1) + "_" + std::to_string(t) + "_" +
                            std::to_string(ip) + "_" + std::to_string(jp),
                        {{reg.theta(i, r), -1.0},
                         {reg.theta(j, r), 1.0},
                         {reg.z(i, t, r), 1.0},
                         {reg.z(j, t, r), 1.0}},
                        Relation::LessEqual, 2.0);
                    added += 2;
                }
            }
        }
    }
    return added;
}

SolveOutcome solve_ocf(OcfModel& built, const SolverConfig& solver_config,
                       const std::vector<double>* warm_start, int max_rounds) {
    if (max_rounds < 1) throw ConfigError("solve_ocf: max_rounds must be at least 1");

    double total_wall = 0.0;
    std::size_t rows_added = 0;
    int rounds = 0;
    SolveOutcome outcome;
    for (;;) {
        ++rounds;
        outcome = solve(built.model, solver_config, warm_start);
        total_wall += outcome.wall_time_s;
        if (!has_assignment(outcome.status) || !built.lazy_pairs) break;
        const std::size_t added = add_violated_pair_rows(built, outcome.assignment);
        if (added == 0) break;
        rows_added += added;
        if (rounds >= max_rounds) {
            outcome.status = SolveStatus::Error;
            outcome.assignment.clear();
            outcome.message = "leaf-agreement row generation still violated after " +
                              std::to_string(rounds) + " rounds";
            break;
        }
    }
    outcome.wall_time_s = total_wall;
    if (rounds > 1) {
        const std::string note = "agreement rounds: " + std::to_string(rounds) +
                                 ", rows added: " + std::to_string(rows_added);
        outcome.message = outcome.message.empty() ? note : outcome.message + "; " + note;
    }
    return outcome;
}

}  // namespace ocf
