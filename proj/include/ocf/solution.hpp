#pragma once

#include "ocf/milp.hpp"

#include <string>
#include <vector>

namespace ocf {

enum class SolveStatus {
    Optimal,           // proven optimal assignment
    FeasibleTimeLimit, // limit hit with an incumbent in hand
    NoIncumbent,       // limit hit before any feasible point was found
    Infeasible,        // proven infeasible
    Error,             // solver crashed, was killed, or wrote nothing usable
};

const char* to_string(SolveStatus s);
bool has_assignment(SolveStatus s);

struct SolveOutcome {
    SolveStatus status = SolveStatus::Error;
    double objective_value = 0.0;
    std::vector<double> assignment;  // by model column; empty unless has_assignment(status)
    double gap = 0.0;                // relative MIP gap; +inf when unknown and not proven optimal
    double wall_time_s = 0.0;
    std::string solver_log_path;
    std::string message;  // human-readable detail, mainly for Error
};

// Which dialect of solution file to expect.
enum class SolutionFormat {
    HighsStyle,  // "Model status" header, then the primal column block
    Generic,     // "status <word>" / "objective <v>" / "<name> <value>" lines
};

// Parses solver output into an outcome aligned with `model`'s columns.
// Variables missing from the file default to 0 (sparse convention); names not
// present in the model are an error. The gap defaults to 0 for proven optima
// and +inf otherwise unless the file reports one.
SolveOutcome parse_solution(SolutionFormat format, const std::string& text, const MilpModel& model);

// Renders a complete assignment in the same shape parse_solution accepts, so
// it can seed a solver that reads starting solutions.
std::string write_solution_file(const MilpModel& model, const std::vector<double>& assignment,
                                double objective_value);

}  // namespace ocf
