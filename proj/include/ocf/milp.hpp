#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace ocf {

enum class VarType { Continuous, Binary };

struct Variable {
    std::string name;
    VarType type = VarType::Continuous;
    double lower = 0.0;
    double upper = 0.0;
};

enum class Relation { LessEqual, Equal, GreaterEqual };

// One entry of a sparse row: coefficient on the given column.
struct LinearTerm {
    int column = 0;
    double coefficient = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<LinearTerm> row;
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;
};

// A mixed-integer linear program, always minimizing. Columns are assigned in
// insertion order; rows and columns keep their order for deterministic output.
class MilpModel {
  public:
    // Returns the new column index. Binary variables must have bounds {0,1}.
    int add_variable(const std::string& name, VarType type, double lower, double upper);

    int column(const std::string& name) const;       // throws on unknown name
    int find_column(const std::string& name) const;  // -1 when absent

    std::size_t variable_count() const { return variables_.size(); }
    const Variable& variable(int column) const { return variables_.at(static_cast<std::size_t>(column)); }
    const std::vector<Variable>& variables() const { return variables_; }

    std::size_t binary_count() const { return binary_count_; }
    std::size_t continuous_count() const { return variables_.size() - binary_count_; }

    // Objective terms accumulate; adding a column twice is rejected.
    void add_objective_term(int column, double coefficient);
    void add_objective_constant(double value) { objective_constant_ += value; }
    const std::vector<LinearTerm>& objective_terms() const { return objective_terms_; }
    double objective_constant() const { return objective_constant_; }

    // Rows must be non-empty, reference valid columns, and not repeat a column.
    void add_constraint(std::string name, std::vector<LinearTerm> row, Relation relation, double rhs);
    std::size_t constraint_count() const { return constraints_.size(); }
    const Constraint& constraint(std::size_t i) const { return constraints_[i]; }
    const std::vector<Constraint>& constraints() const { return constraints_; }

    double evaluate_row(const Constraint& c, const std::vector<double>& assignment) const;
    double evaluate_objective(const std::vector<double>& assignment) const;

  private:
    std::vector<Variable> variables_;
    std::unordered_map<std::string, int> columns_;
    std::vector<LinearTerm> objective_terms_;
    std::vector<char> objective_used_;  // per column, guards duplicates
    double objective_constant_ = 0.0;
    std::vector<Constraint> constraints_;
    std::size_t binary_count_ = 0;
};

// One feasibility defect of an assignment against a model.
struct AuditViolation {
    std::string where;   // row name, variable name
    double amount = 0.0; // how far past the tolerance
    std::string detail;
};

struct AuditReport {
    std::vector<AuditViolation> rows;         // constraint rows violated beyond tol
    std::vector<AuditViolation> integrality;  // binaries away from {0,1}
    std::vector<AuditViolation> bounds;       // values outside their box

    bool clean() const { return rows.empty() && integrality.empty() && bounds.empty(); }
    std::size_t total() const { return rows.size() + integrality.size() + bounds.size(); }
    std::string to_string() const;
};

// Checks every row, every bound and every binary's integrality against the
// assignment. The assignment must cover all columns.
AuditReport audit_feasibility(const MilpModel& model, const std::vector<double>& assignment,
                              double tol = 1e-6);

}  // namespace ocf
