#include "ocf/solution.hpp"

#include "ocf/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <vector>

namespace ocf {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::FeasibleTimeLimit: return "feasible-time-limit";
        case SolveStatus::NoIncumbent: return "no-incumbent";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Error: return "error";
    }
    return "error";
}

bool has_assignment(SolveStatus s) {
    return s == SolveStatus::Optimal || s == SolveStatus::FeasibleTimeLimit;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) lines.push_back(raw);
    return lines;
}

double parse_number(const std::string& s, std::size_t line_no) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ParseError("solution line " + std::to_string(line_no) + ": expected a number, got '" + s + "'");
    return v;
}

// "name value" split on the last run of whitespace.
std::pair<std::string, std::string> name_value(const std::string& line, std::size_t line_no) {
    std::size_t cut = line.find_last_of(" \t");
    if (cut == std::string::npos)
        throw ParseError("solution line " + std::to_string(line_no) + ": expected 'name value', got '" +
                         line + "'");
    std::string name = strip(line.substr(0, cut));
    std::string value = strip(line.substr(cut + 1));
    if (name.empty() || value.empty())
        throw ParseError("solution line " + std::to_string(line_no) + ": expected 'name value', got '" +
                         line + "'");
    return {name, value};
}

void assign(SolveOutcome& out, const MilpModel& model, const std::string& name, double value,
            std::size_t line_no) {
    int col = model.find_column(name);
    if (col < 0)
        throw ParseError("solution line " + std::to_string(line_no) + ": unknown variable '" + name + "'");
    out.assignment[static_cast<std::size_t>(col)] = value;
}

SolveOutcome parse_highs_style(const std::string& text, const MilpModel& model) {
    const std::vector<std::string> lines = split_lines(text);
    std::string model_status;
    std::string primal_status;
    bool have_objective = false;
    double objective = 0.0;
    double gap = -1.0;
    std::vector<std::pair<std::size_t, std::string>> column_lines;  // (line number, text)

    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = strip(lines[i]);
        if (line.empty()) continue;
        if (line == "Model status") {
            while (i + 1 < lines.size() && strip(lines[i + 1]).empty()) ++i;
            if (i + 1 >= lines.size()) throw ParseError("solution file ends after 'Model status'");
            model_status = strip(lines[++i]);
            continue;
        }
        if (line == "# Primal solution values") {
            while (i + 1 < lines.size() && strip(lines[i + 1]).empty()) ++i;
            if (i + 1 >= lines.size())
                throw ParseError("solution file ends after the primal section marker");
            primal_status = strip(lines[++i]);
            if (lower(primal_status) == "none") continue;
            // "Objective <v>" then "# Columns <n>" then n value lines.
            while (i + 1 < lines.size()) {
                std::string next = strip(lines[++i]);
                if (next.empty()) continue;
                if (next.rfind("Objective", 0) == 0) {
                    objective = parse_number(strip(next.substr(9)), i + 1);
                    have_objective = true;
                    continue;
                }
                if (next.rfind("# Columns", 0) == 0) {
                    long n = std::strtol(next.substr(9).c_str(), nullptr, 10);
                    for (long k = 0; k < n && i + 1 < lines.size(); ++k) {
                        std::string entry = strip(lines[++i]);
                        if (entry.empty()) {
                            --k;
                            continue;
                        }
                        column_lines.emplace_back(i + 1, entry);
                    }
                    break;
                }
                throw ParseError("solution line " + std::to_string(i + 1) +
                                 ": expected 'Objective' or '# Columns', got '" + next + "'");
            }
            continue;
        }
        if (line.rfind("# Gap", 0) == 0) {
            gap = parse_number(strip(line.substr(5)), i + 1);
            continue;
        }
        // Everything else (rows, duals, basis) is irrelevant here.
    }

    if (model_status.empty()) throw ParseError("solution file has no 'Model status' section");

    SolveOutcome out;
    const std::string ms = lower(model_status);
    const bool primal_feasible = lower(primal_status) == "feasible";
    if (ms == "optimal") {
        if (!primal_feasible)
            throw ParseError("solution file claims an optimum but carries no primal values");
        out.status = SolveStatus::Optimal;
    } else if (ms == "infeasible") {
        out.status = SolveStatus::Infeasible;
    } else if (ms == "time limit reached" || ms == "iteration limit reached" ||
               ms == "solution limit reached" || ms == "interrupted" ||
               ms == "bound on objective reached") {
        out.status = primal_feasible ? SolveStatus::FeasibleTimeLimit : SolveStatus::NoIncumbent;
        out.message = model_status;
    } else {
        out.status = SolveStatus::Error;
        out.message = "solver finished with status '" + model_status + "'";
        return out;
    }

    if (has_assignment(out.status)) {
        if (!have_objective) throw ParseError("solution file carries values but no objective");
        out.assignment.assign(model.variable_count(), 0.0);
        for (const auto& [line_no, entry] : column_lines) {
            auto [name, value] = name_value(entry, line_no);
            assign(out, model, name, parse_number(value, line_no), line_no);
        }
        out.objective_value = objective;
    }
    out.gap = gap >= 0 ? gap : (out.status == SolveStatus::Optimal ? 0.0 : kInf);
    return out;
}

SolveOutcome parse_generic(const std::string& text, const MilpModel& model) {
    const std::vector<std::string> lines = split_lines(text);
    SolveOutcome out;
    bool have_status = false;
    bool have_objective = false;
    double gap = -1.0;
    std::vector<std::pair<std::size_t, std::string>> value_lines;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = strip(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        std::string head_l = lower(head);
        if (head_l == "status") {
            std::string word;
            ls >> word;
            word = lower(word);
            if (word == "optimal") out.status = SolveStatus::Optimal;
            else if (word == "feasible" || word == "timelimit" || word == "time-limit" ||
                     word == "feasible-time-limit")
                out.status = SolveStatus::FeasibleTimeLimit;
            else if (word == "no-incumbent" || word == "noincumbent" || word == "unknown")
                out.status = SolveStatus::NoIncumbent;
            else if (word == "infeasible") out.status = SolveStatus::Infeasible;
            else if (word == "error") out.status = SolveStatus::Error;
            else
                throw ParseError("solution line " + std::to_string(i + 1) + ": unknown status '" + word +
                                 "'");
            have_status = true;
            continue;
        }
        if (head_l == "objective") {
            std::string v;
            ls >> v;
            out.objective_value = parse_number(v, i + 1);
            have_objective = true;
            continue;
        }
        if (head_l == "gap") {
            std::string v;
            ls >> v;
            gap = parse_number(v, i + 1);
            continue;
        }
        value_lines.emplace_back(i + 1, line);
    }

    if (!have_status) throw ParseError("solution file has no 'status' line");
    if (has_assignment(out.status)) {
        out.assignment.assign(model.variable_count(), 0.0);
        for (const auto& [line_no, entry] : value_lines) {
            auto [name, value] = name_value(entry, line_no);
            assign(out, model, name, parse_number(value, line_no), line_no);
        }
        if (!have_objective) out.objective_value = model.evaluate_objective(out.assignment);
    }
    out.gap = gap >= 0 ? gap : (out.status == SolveStatus::Optimal ? 0.0 : kInf);
    return out;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

SolveOutcome parse_solution(SolutionFormat format, const std::string& text, const MilpModel& model) {
    switch (format) {
        case SolutionFormat::HighsStyle: return parse_highs_style(text, model);
        case SolutionFormat::Generic: return parse_generic(text, model);
    }
    throw InternalError("parse_solution: unreachable format");
}

std::string write_solution_file(const MilpModel& model, const std::vector<double>& assignment,
                                double objective_value) {
    if (assignment.size() != model.variable_count())
        throw ConfigError("write_solution_file: assignment size mismatch");
    std::ostringstream out;
    out << "Model status\nOptimal\n\n";
    out << "# Primal solution values\nFeasible\n";
    out << "Objective " << num(objective_value) << "\n";
    out << "# Columns " << model.variable_count() << "\n";
    for (std::size_t col = 0; col < model.variable_count(); ++col)
        out << model.variable(static_cast<int>(col)).name << " " << num(assignment[col]) << "\n";
    out << "# Rows " << model.constraint_count() << "\n";
    for (const Constraint& c : model.constraints())
        out << c.name << " " << num(model.evaluate_row(c, assignment)) << "\n";
    out << "\n# Dual solution values\nNone\n\n# Basis\nHiGHS v1\nNone\n";
    return out.str();
}

}  // namespace ocf
