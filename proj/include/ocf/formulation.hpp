#pragma once

#include "ocf/dataset.hpp"
#include "ocf/milp.hpp"
#include "ocf/solution.hpp"
#include "ocf/solver.hpp"
#include "ocf/topology.hpp"
#include "ocf/tree.hpp"

#include <array>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace ocf {

// Hyperparameters of the joint-forest training model. The ensemble trains
// all trees at once, minimizing the share of training points whose
// majority-vote label is wrong, under a hard cap on the total number of
// active splits across the whole forest.
struct OcfConfig {
    int tree_count = 3;       // must be odd so majority votes cannot tie
    int depth = 2;            // complete binary topology per tree
    int split_budget = 1;     // cap on active splits summed over all trees
    int min_leaf_size = 1;    // occupied leaves must hold at least this many
    double epsilon = 1e-5;    // strictness margin for left-branch routing
    bool symmetry_breaking = true;  // order trees by disagreement with the vote
    bool warm_start = true;         // consumers seed solves with stump forests

    // Alternative objective that prices splits instead of capping them; kept
    // buildable but untuned. When enabled the budget row is dropped and each
    // split adds split_penalty to the objective.
    bool budget_as_constraint = true;
    double split_penalty = 0.0;

    // Leaf-agreement rows grow as pairs x leaves x trees; beyond this many
    // rows the model is built without them and they are generated on
    // violation during solve_ocf.
    std::size_t eager_pair_limit = 200000;

    void validate() const;
};

// Name <-> column bijection for one model instance. Columns are laid out in
// contiguous blocks, family by family, with the rightmost index fastest:
//
//   alpha_i        per observation: the ensemble's majority-vote label
//   theta_i_r      per observation and tree: that tree's vote
//   z_i_t_r        per observation, leaf and tree: leaf membership
//   d_t_r          per branch node and tree: split active?
//   l_t_r          per leaf and tree: leaf occupied?
//   a_t_q_r        per branch, feature and tree: split-feature selector
//   b_t_r          per branch and tree: split threshold (continuous, [0,1])
//   xor_i_r        per observation and tree: vote disagrees with alpha
//                  (present only when symmetry breaking is on)
//
// Name suffixes print observations, features and trees 1-based; node ids are
// the topology's own (root = 1). Accessors take 0-based i, q and r.
class VariableRegistry {
  public:
    VariableRegistry(std::size_t observation_count, std::size_t feature_count,
                     const OcfConfig& config);

    // Appends every column to an empty model, in layout order.
    void register_variables(MilpModel& model) const;

    std::size_t observation_count() const { return n_; }
    std::size_t feature_count() const { return p_; }
    int tree_count() const { return trees_; }
    const TreeTopology& topology() const { return topo_; }
    bool has_flip() const { return flip_; }
    int column_count() const { return total_; }

    int alpha(std::size_t i) const;
    int theta(std::size_t i, int r) const;
    int z(std::size_t i, NodeId leaf, int r) const;
    int d(NodeId branch, int r) const;
    int l(NodeId leaf, int r) const;
    int a(NodeId branch, std::size_t q, int r) const;
    int b(NodeId branch, int r) const;
    int flip(std::size_t i, int r) const;

  private:
    void check_obs(std::size_t i) const;
    void check_tree(int r) const;
    void check_feature(std::size_t q) const;
    void check_branch(NodeId t) const;
    void check_leaf(NodeId t) const;

    std::size_t n_;
    std::size_t p_;
    int trees_;
    TreeTopology topo_;
    bool flip_;
    long long base_alpha_, base_theta_, base_z_, base_d_, base_l_, base_a_, base_b_,
        base_flip_;
    int total_;
};

// Identifies one leaf-agreement pair row group already in the model:
// (tree, leaf, lower observation, higher observation).
struct PairKey {
    int r;
    NodeId t;
    std::size_t i;
    std::size_t j;

    auto operator<=>(const PairKey&) const = default;
};

// A built model plus everything needed to interpret and extend it.
struct OcfModel {
    MilpModel model;
    VariableRegistry registry;
    OcfConfig config;
    bool lazy_pairs = false;        // agreement rows deferred to solve_ocf
    std::set<PairKey> added_pairs;  // pair rows present when lazy
};

// Translates a normalized dataset and hyperparameters into the joint MILP:
//   minimize (1/n) sum_i |y_i - alpha_i|, written affinely as
//   sum_i [y_i + (1 - 2 y_i) alpha_i] / n
// subject to majority-vote linking of alpha to the theta votes, one class
// per occupied leaf, structural split rows per tree (selector sums, threshold
// caps, parent-before-child), unique leaf membership with minimum occupancy,
// epsilon-strict routing along each leaf's ancestor path, the global split
// budget, and optionally the disagreement-ordering symmetry chain.
OcfModel build_ocf_model(const Dataset& data, const OcfConfig& config);

// Single-tree instance of the same model: tree_count = 1, no symmetry rows.
OcfModel build_oct_model(const Dataset& data, int depth, int split_budget,
                         int min_leaf_size, double epsilon);

// Complete feasible assignment that places each tree's most discriminatory
// stump (over its feature subset) at the root. Falls back to the no-split
// tree when a stump would breach min_leaf_size or the routing margin, and
// stops granting stumps once the split budget is spent. With symmetry
// breaking on, trees are ordered by how often they disagree with the vote.
std::vector<double> warm_start_assignment(const Dataset& data, const OcfConfig& config,
                                          const std::vector<std::vector<std::size_t>>& tree_features);

// Reads a solved assignment back into trees: a branch splits iff its d
// rounds to 1, on the selected feature at threshold b; leaf classes come
// from the votes of their members; empty leaves stay unset and fall back to
// the tree's majority vote class. Binaries farther than integrality_tol from
// an integer, or leaves whose members disagree, raise SolverError.
Forest extract_forest(const std::vector<double>& assignment, const VariableRegistry& registry,
                      const OcfConfig& config, double integrality_tol = 1e-6);

// Cross-checks a solved assignment against the dataset and the extracted
// forest: row/bound/integrality feasibility, alpha = majority of votes,
// routing agreement between the trees and the membership variables, leaf
// occupancy versus min_leaf_size, the split budget, and the objective's
// match with the forest's recomputed training errors. Returns one line per
// problem; empty means consistent.
std::vector<std::string> verify_solution_consistency(const Dataset& data, const OcfModel& built,
                                                     const std::vector<double>& assignment,
                                                     double tol = 1e-6);

// Appends the leaf-agreement rows violated by the assignment (members of one
// leaf voting differently). Returns how many rows were added.
std::size_t add_violated_pair_rows(OcfModel& built, const std::vector<double>& assignment);

// Solves the model, generating deferred agreement rows on violation until
// the incumbent is coherent or max_rounds is hit. Wall time accumulates
// across rounds. The warm start, when given, stays valid in every round.
SolveOutcome solve_ocf(OcfModel& built, const SolverConfig& solver_config,
                       const std::vector<double>* warm_start = nullptr, int max_rounds = 50);

}  // namespace ocf
