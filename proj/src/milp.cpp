#include "ocf/milp.hpp"

#include "ocf/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace ocf {

namespace {

bool lp_safe_name(const std::string& name) {
    if (name.empty() || name.size() > 255) return false;
    if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

}  // namespace

int MilpModel::add_variable(const std::string& name, VarType type, double lower, double upper) {
    if (!lp_safe_name(name))
        throw ConfigError("MilpModel: variable name '" + name + "' is not file-format safe");
    if (columns_.count(name)) throw ConfigError("MilpModel: duplicate variable name '" + name + "'");
    if (!(lower <= upper))
        throw ConfigError("MilpModel: variable '" + name + "' has inverted bounds");
    if (type == VarType::Binary && (lower != 0.0 || upper != 1.0))
        throw ConfigError("MilpModel: binary variable '" + name + "' must have bounds {0,1}");
    int col = static_cast<int>(variables_.size());
    variables_.push_back(Variable{name, type, lower, upper});
    columns_.emplace(name, col);
    objective_used_.push_back(0);
    if (type == VarType::Binary) ++binary_count_;
    return col;
}

int MilpModel::column(const std::string& name) const {
    auto it = columns_.find(name);
    if (it == columns_.end()) throw ConfigError("MilpModel: unknown variable '" + name + "'");
    return it->second;
}

int MilpModel::find_column(const std::string& name) const {
    auto it = columns_.find(name);
    return it == columns_.end() ? -1 : it->second;
}

void MilpModel::add_objective_term(int column, double coefficient) {
    if (column < 0 || column >= static_cast<int>(variables_.size()))
        throw InternalError("MilpModel: objective references a nonexistent column");
    if (objective_used_[static_cast<std::size_t>(column)])
        throw InternalError("MilpModel: objective already has a term for '" +
                            variables_[static_cast<std::size_t>(column)].name + "'");
    objective_used_[static_cast<std::size_t>(column)] = 1;
    objective_terms_.push_back(LinearTerm{column, coefficient});
}

void MilpModel::add_constraint(std::string name, std::vector<LinearTerm> row, Relation relation,
                               double rhs) {
    if (!lp_safe_name(name))
        throw ConfigError("MilpModel: constraint name '" + name + "' is not file-format safe");
    if (row.empty()) throw InternalError("MilpModel: constraint '" + name + "' has an empty row");
    std::set<int> seen;
    for (const LinearTerm& t : row) {
        if (t.column < 0 || t.column >= static_cast<int>(variables_.size()))
            throw InternalError("MilpModel: constraint '" + name + "' references a nonexistent column");
        if (!seen.insert(t.column).second)
            throw InternalError("MilpModel: constraint '" + name + "' repeats column '" +
                                variables_[static_cast<std::size_t>(t.column)].name + "'");
    }
    constraints_.push_back(Constraint{std::move(name), std::move(row), relation, rhs});
}

double MilpModel::evaluate_row(const Constraint& c, const std::vector<double>& assignment) const {
    double v = 0.0;
    for (const LinearTerm& t : c.row) v += t.coefficient * assignment.at(static_cast<std::size_t>(t.column));
    return v;
}

double MilpModel::evaluate_objective(const std::vector<double>& assignment) const {
    double v = objective_constant_;
    for (const LinearTerm& t : objective_terms_)
        v += t.coefficient * assignment.at(static_cast<std::size_t>(t.column));
    return v;
}

std::string AuditReport::to_string() const {
    std::ostringstream out;
    if (clean()) {
        out << "feasible within tolerance\n";
        return out.str();
    }
    for (const auto& v : rows) out << "row " << v.where << ": " << v.detail << "\n";
    for (const auto& v : integrality) out << "integrality " << v.where << ": " << v.detail << "\n";
    for (const auto& v : bounds) out << "bound " << v.where << ": " << v.detail << "\n";
    return out.str();
}

namespace {

std::string shorten(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

AuditReport audit_feasibility(const MilpModel& model, const std::vector<double>& assignment,
                              double tol) {
    if (assignment.size() != model.variable_count())
        throw ConfigError("audit_feasibility: assignment covers " + std::to_string(assignment.size()) +
                          " of " + std::to_string(model.variable_count()) + " variables");
    AuditReport report;
    for (const Constraint& c : model.constraints()) {
        double lhs = model.evaluate_row(c, assignment);
        double excess = 0.0;
        switch (c.relation) {
            case Relation::LessEqual: excess = lhs - c.rhs; break;
            case Relation::GreaterEqual: excess = c.rhs - lhs; break;
            case Relation::Equal: excess = std::abs(lhs - c.rhs); break;
        }
        if (excess > tol)
            report.rows.push_back(AuditViolation{
                c.name, excess - tol,
                "lhs " + shorten(lhs) + " vs rhs " + shorten(c.rhs) + " (excess " + shorten(excess) + ")"});
    }
    for (std::size_t col = 0; col < model.variable_count(); ++col) {
        const Variable& var = model.variable(static_cast<int>(col));
        double v = assignment[col];
        if (v < var.lower - tol || v > var.upper + tol)
            report.bounds.push_back(AuditViolation{
                var.name, std::max(var.lower - v, v - var.upper) - tol,
                "value " + shorten(v) + " outside [" + shorten(var.lower) + ", " + shorten(var.upper) + "]"});
        if (var.type == VarType::Binary) {
            double drift = std::abs(v - std::round(v));
            if (drift > tol)
                report.integrality.push_back(
                    AuditViolation{var.name, drift - tol, "value " + shorten(v) + " is not integral"});
        }
    }
    return report;
}

}  // namespace ocf
