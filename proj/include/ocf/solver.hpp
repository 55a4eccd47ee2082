#pragma once

#include "ocf/milp.hpp"
#include "ocf/solution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ocf {

// Which command-line profile to drive the external solver with.
enum class SolverAdapter {
    HighsCli,         // <bin> model.lp --solution_file out --time_limit s ...
    GenericTemplate,  // command built from a placeholder template
};

struct SolverConfig {
    SolverAdapter adapter = SolverAdapter::HighsCli;
    std::string binary_path;  // empty: resolve_solver_binary() consults the environment
    double time_limit_s = 3600.0;
    double mip_gap = -1.0;  // relative gap target; negative leaves the solver default
    int threads = 1;        // 1 keeps runs reproducible
    std::uint64_t seed = 0;
    std::string workspace_root;  // empty: the system temp directory
    bool keep_workspace = false; // retain files even on success
    // GenericTemplate only: whitespace-separated argv with the placeholders
    // {bin} {lp} {sol} {time_limit} {seed} {threads} {mip_gap} {warm};
    // placeholders expanding to nothing drop their token.
    std::string command_template;
    // Solution dialect the binary writes; the HiGHS profile implies HighsStyle.
    SolutionFormat solution_format = SolutionFormat::HighsStyle;
};

// Explicit path if given, else the OCF_SOLVER environment variable; throws
// SolverError when neither is set.
std::string resolve_solver_binary(const std::string& explicit_path);

// Writes the model (and optional warm start) into a fresh workspace
// directory, runs the solver with a hard kill deadline comfortably past the
// soft time limit, and parses what it wrote. Solver-side failures come back
// as status=error with the log retained; only environment problems (missing
// binary, unusable workspace) throw.
SolveOutcome solve(const MilpModel& model, const SolverConfig& config,
                   const std::vector<double>* warm_start = nullptr);

}  // namespace ocf
