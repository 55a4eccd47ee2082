#pragma once

#include "ocf/dataset.hpp"
#include "ocf/solution.hpp"
#include "ocf/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ocf {

// The five competing methods of the benchmark report.
enum class Method {
    Cart,         // greedy tree on the full training fold
    Oct,          // single tree trained to optimality by the MILP
    SmallForest,  // 3-tree random forest baseline
    LargeForest,  // 500-tree random forest baseline
    JointForest,  // 3-tree forest trained jointly by the MILP
};

// Report labels: "CART", "OCT", "3-RF", "500-RF", "3-OCF".
const char* method_name(Method m);

// Parses the labels above, case-insensitively. Throws ConfigError on
// anything else.
Method method_from_name(const std::string& text);

// All five methods in report column order.
std::vector<Method> all_methods();

// Full description of one benchmark run. The dataset comes either preloaded
// (dataset non-empty; used as-is) or from a manifest file that
// run_experiment loads first.
struct ExperimentSpec {
    std::string manifest_path;
    Dataset dataset;

    std::vector<Method> methods = all_methods();

    // Split-budget grid searched per fold for CART, OCT and the joint
    // forest. The random forests take no budget.
    std::vector<int> split_budgets = {1, 2, 3, 4, 5, 6, 7};

    // Master seed. Fold shuffles, forest subsampling and downsample draws
    // all derive from it through fixed per-purpose streams.
    std::uint64_t seed = 0;

    int repeat_count = 5;    // independent fold assignments, at most 5
    int rotation_count = 4;  // fold role rotations per repeat, at most 4

    int tree_depth = 3;    // CART and OCT
    int forest_depth = 2;  // random forests and the joint forest
    int joint_tree_count = 3;
    int small_forest_trees = 3;
    int large_forest_trees = 500;
    int min_leaf_size = 1;
    double epsilon = 1e-5;

    // Joint-forest training runs on random subsets of the training fold:
    // this many candidate subsets of this size, the winner picked on the
    // validation fold jointly with the split budget. Folds no larger than
    // the subset size train on the whole fold with a single candidate.
    std::size_t downsample_size = 75;
    int downsample_candidates = 5;

    // MILP methods only. The constructor lowers the per-solve time limit to
    // 60 seconds; everything else keeps the solver defaults.
    SolverConfig solver;

    ExperimentSpec();

    void validate() const;  // throws ConfigError
};

// One benchmark cell: a (repeat, rotation) fold triple crossed with a
// method. Grid search and downsample selection happen inside the cell; the
// record keeps only the winning model's numbers plus solve counters.
struct ExperimentRecord {
    int repeat = 0;
    int rotation = 0;
    Method method = Method::Cart;

    // Set when no grid point produced a usable model. The error text is the
    // first failure seen; the accuracy fields are meaningless then.
    bool failed = false;
    std::string error;

    int chosen_budget = 0;            // 0 when the method takes no budget
    int chosen_candidate = -1;        // downsample slot; -1 = full fold
    std::uint64_t subset_seed = 0;    // seed that drew the subset; 0 = none
    double validation_accuracy = 0;   // percent on the validation fold
    double test_accuracy = 0;         // percent on the test fold

    // Winning model's solve outcome for MILP methods; greedy methods report
    // Optimal with zero gap. Wall time covers the whole cell (all grid
    // points), not just the winner, so time budgets add up across records.
    SolveStatus solve_status = SolveStatus::Optimal;
    double gap = 0.0;
    double wall_time_s = 0.0;

    int solve_count = 0;          // MILP solves attempted in the cell
    int time_limited_count = 0;   // of those, stopped by the time limit
};

// Per-method aggregate over the cells of one run.
struct MethodSummary {
    Method method = Method::Cart;
    std::size_t cell_count = 0;
    std::size_t failed_count = 0;
    std::vector<double> test_accuracies;  // non-failed cells, record order
    double mean_test_accuracy = 0.0;      // over non-failed cells
    double std_test_accuracy = 0.0;       // sample std (n-1 divisor)
    int solve_count = 0;
    int time_limited_count = 0;

    bool fully_failed() const { return cell_count > 0 && failed_count == cell_count; }
};

struct ExperimentResult {
    std::string dataset_name;
    std::size_t observation_count = 0;
    std::uint64_t seed = 0;
    int repeat_count = 0;
    int rotation_count = 0;
    std::vector<Method> methods;            // report column order
    std::vector<ExperimentRecord> records;  // ordered by (repeat, rotation, method)

    // Recomputed from the records on every call, one entry per method.
    std::vector<MethodSummary> summaries() const;

    bool any_method_fully_failed() const;
};

// Runs the full protocol: for every (repeat, rotation) the observations
// split into four folds, one fold tests, the next validates, the rest
// train; features are rescaled to the training fold's ranges; every method
// trains over its grid and the best validation model is scored on the test
// fold. Cell-level failures are recorded, not fatal. Cells run on a
// bounded worker pool; results are ordered deterministically regardless.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Same, with the dataset supplied directly (spec's dataset/manifest ignored).
ExperimentResult run_experiment(const ExperimentSpec& spec, const Dataset& data);

// Reports. The CSV lists one record per row and contains no wall-clock
// fields, so rerunning with the same seed reproduces it byte for byte; the
// table renders one dataset row with a mean ± std column per method, plus
// per-method solve-status footnotes.
struct ExperimentReport {
    std::string csv;
    std::string table;
};

ExperimentReport summarize(const ExperimentResult& result);  // ConfigError if empty

// "80.00 ± 14.14" formatting used by the table: two decimals, sample
// standard deviation, "n/a" for an empty list.
std::string format_mean_std(const std::vector<double>& values);

}  // namespace ocf
