#include "ocf/lp_format.hpp"

#include "ocf/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace ocf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 17 significant digits: every binary64 value parses back to the same bits.
std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void append_terms(std::ostringstream& out, const std::vector<LinearTerm>& terms,
                  const std::vector<Variable>& vars, bool& first) {
    for (const LinearTerm& t : terms) {
        double c = t.coefficient;
        if (first) {
            out << (std::signbit(c) ? "-" : "") << num(std::abs(c));
            first = false;
        } else {
            out << (std::signbit(c) ? " - " : " + ") << num(std::abs(c));
        }
        out << " " << vars[static_cast<std::size_t>(t.column)].name;
    }
}

}  // namespace

std::string write_lp(const MilpModel& model) {
    std::ostringstream out;
    const auto& vars = model.variables();

    out << "Minimize\n obj: ";
    bool first = true;
    append_terms(out, model.objective_terms(), vars, first);
    double k = model.objective_constant();
    if (k != 0.0) {
        if (first) out << num(k);
        else out << (k < 0 ? " - " : " + ") << num(std::abs(k));
        first = false;
    }
    if (first) out << "0";
    out << "\n";

    out << "Subject To\n";
    for (const Constraint& c : model.constraints()) {
        out << " " << c.name << ": ";
        bool f = true;
        append_terms(out, c.row, vars, f);
        switch (c.relation) {
            case Relation::LessEqual: out << " <= "; break;
            case Relation::Equal: out << " = "; break;
            case Relation::GreaterEqual: out << " >= "; break;
        }
        out << num(c.rhs) << "\n";
    }

    out << "Bounds\n";
    for (const Variable& v : vars) {
        if (v.type == VarType::Binary) continue;
        if (v.lower == -kInf && v.upper == kInf) out << " " << v.name << " free\n";
        else if (v.lower == v.upper) out << " " << v.name << " = " << num(v.lower) << "\n";
        else if (v.upper == kInf) out << " " << v.name << " >= " << num(v.lower) << "\n";
        else if (v.lower == -kInf) out << " -inf <= " << v.name << " <= " << num(v.upper) << "\n";
        else out << " " << num(v.lower) << " <= " << v.name << " <= " << num(v.upper) << "\n";
    }

    if (model.binary_count() > 0) {
        out << "Binaries\n";
        for (const Variable& v : vars)
            if (v.type == VarType::Binary) out << " " << v.name << "\n";
    }
    out << "End\n";
    return out.str();
}

namespace {

// ---- reference reader ------------------------------------------------------
// Free-form token scan, deliberately independent of the writer above: a shared
// formatting helper would let one bug cancel the other in round-trip tests.

enum class Tok { Word, Number, Colon, Rel, Plus, Minus, Eof };

struct Token {
    Tok kind = Tok::Eof;
    std::string text;   // word, or "<" ">" "=" for relations
    double value = 0.0; // number payload
    int line = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        for (;;) {
            while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r'))
                ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '\n') {
                ++line_;
                ++pos_;
                continue;
            }
            if (pos_ < text_.size() && text_[pos_] == '\\') {  // comment to end of line
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
                continue;
            }
            break;
        }
        if (pos_ >= text_.size()) return Token{Tok::Eof, "", 0.0, line_};
        char c = text_[pos_];
        if (c == ':') {
            ++pos_;
            return Token{Tok::Colon, ":", 0.0, line_};
        }
        if (c == '+') {
            ++pos_;
            return Token{Tok::Plus, "+", 0.0, line_};
        }
        if (c == '-') {
            ++pos_;
            return Token{Tok::Minus, "-", 0.0, line_};
        }
        if (c == '<' || c == '>' || c == '=') {
            ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '=') ++pos_;
            return Token{Tok::Rel, std::string(1, c), 0.0, line_};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
                ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
                std::size_t mark = pos_;
                ++pos_;
                if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
                if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                        ++pos_;
                } else {
                    pos_ = mark;  // the 'e' starts a following name, not an exponent
                }
            }
            std::string s = text_.substr(start, pos_ - start);
            return Token{Tok::Number, s, std::strtod(s.c_str(), nullptr), line_};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_' || text_[pos_] == '.'))
                ++pos_;
            return Token{Tok::Word, text_.substr(start, pos_ - start), 0.0, line_};
        }
        throw ParseError("LP text line " + std::to_string(line_) + ": unexpected character '" +
                         std::string(1, c) + "'");
    }

  private:
    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool is_section_word(const std::string& w) {
    static const char* kw[] = {"subject",  "such",     "st",  "s.t.",     "bounds",   "bound",
                               "binaries", "binary",   "bin", "general",  "generals", "gen",
                               "end",      "minimize", "min", "minimise", "maximize", "max",
                               "maximise", "integer",  "semi-continuous"};
    for (const char* k : kw)
        if (w == k) return true;
    return false;
}

struct PendingVar {
    std::string name;
    double lower = 0.0;  // LP convention: default box is [0, +inf)
    double upper = kInf;
    bool binary = false;
};

struct PendingRow {
    std::string name;
    std::vector<std::pair<int, double>> terms;
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;
};

class Reader {
  public:
    explicit Reader(const std::string& text) : lex_(text) {}

    MilpModel run() {
        section_objective();
        section_constraints();
        section_trailers();
        return build();
    }

  private:
    // Single-token lookahead over the lexer.
    const Token& peek() {
        if (!lookahead_) lookahead_ = lex_.next();
        return *lookahead_;
    }
    Token take() {
        Token t = peek();
        lookahead_.reset();
        return t;
    }
    [[noreturn]] void fail(const std::string& msg, int line) {
        throw ParseError("LP text line " + std::to_string(line) + ": " + msg);
    }

    bool at_section_word() { return peek().kind == Tok::Word && is_section_word(lower(peek().text)); }

    int var_index(const std::string& name) {
        auto it = vars_by_name_.find(name);
        if (it != vars_by_name_.end()) return it->second;
        int idx = static_cast<int>(vars_.size());
        vars_.push_back(PendingVar{name, 0.0, kInf, false});
        vars_by_name_.emplace(name, idx);
        return idx;
    }

    // "name :" — consumed only when the colon is present; otherwise the name
    // is the first variable of the expression and is handled there.
    std::string read_label() {
        if (peek().kind != Tok::Word || at_section_word()) return "";
        Token name = take();
        if (peek().kind == Tok::Colon) {
            take();
            return name.text;
        }
        held_word_ = name;  // re-deliver to read_expression
        return "";
    }

    // Linear expression: signed terms with optional coefficients plus bare
    // constants. Stops before a relation token or a section keyword.
    void read_expression(std::vector<std::pair<int, double>>& terms, double& constant) {
        double sign = 1.0;
        bool pending_sign = false;

        if (held_word_) {
            Token w = *held_word_;
            held_word_.reset();
            terms.emplace_back(var_index(w.text), 1.0);
        }

        for (;;) {
            const Token& t = peek();
            if (t.kind == Tok::Eof || t.kind == Tok::Rel || t.kind == Tok::Colon) break;
            if (t.kind == Tok::Word && is_section_word(lower(t.text)) && !pending_sign) break;
            if (t.kind == Tok::Plus) {
                take();
                pending_sign = true;
                continue;
            }
            if (t.kind == Tok::Minus) {
                take();
                sign = -sign;
                pending_sign = true;
                continue;
            }
            if (t.kind == Tok::Number) {
                Token n = take();
                if (peek().kind == Tok::Word && !at_section_word()) {
                    Token v = take();
                    terms.emplace_back(var_index(v.text), sign * n.value);
                } else {
                    constant += sign * n.value;
                }
                sign = 1.0;
                pending_sign = false;
                continue;
            }
            if (t.kind == Tok::Word) {
                Token v = take();
                terms.emplace_back(var_index(v.text), sign);
                sign = 1.0;
                pending_sign = false;
                continue;
            }
            fail("unexpected token in expression", t.line);
        }
        if (pending_sign) fail("dangling sign at the end of an expression", peek().line);
    }

    void section_objective() {
        Token t = take();
        if (t.kind != Tok::Word) fail("expected an objective section keyword", t.line);
        std::string w = lower(t.text);
        if (w == "maximize" || w == "maximise" || w == "max")
            fail("only minimization is supported", t.line);
        if (!(w == "minimize" || w == "minimise" || w == "min"))
            fail("expected 'Minimize', got '" + t.text + "'", t.line);
        read_label();
        read_expression(objective_terms_, objective_constant_);
    }

    void section_constraints() {
        Token t = take();
        if (t.kind != Tok::Word) fail("expected 'Subject To'", t.line);
        std::string w = lower(t.text);
        if (w == "subject" || w == "such") {
            Token to = take();
            if (to.kind != Tok::Word || lower(to.text) != "to")
                fail("expected 'To' after '" + t.text + "'", to.line);
        } else if (w != "st" && w != "s.t.") {
            fail("expected 'Subject To', got '" + t.text + "'", t.line);
        }

        while (!(at_section_word() || peek().kind == Tok::Eof)) {
            PendingRow row;
            row.name = read_label();
            double lhs_constant = 0.0;
            read_expression(row.terms, lhs_constant);

            Token rel = take();
            if (rel.kind != Tok::Rel) fail("expected a relation in constraint", rel.line);
            row.relation = rel.text == "<"   ? Relation::LessEqual
                           : rel.text == ">" ? Relation::GreaterEqual
                                             : Relation::Equal;

            double sign = 1.0;
            Token rhs = take();
            while (rhs.kind == Tok::Plus || rhs.kind == Tok::Minus) {
                if (rhs.kind == Tok::Minus) sign = -sign;
                rhs = take();
            }
            if (rhs.kind != Tok::Number) fail("expected a number after the relation", rhs.line);
            row.rhs = sign * rhs.value - lhs_constant;
            if (row.terms.empty()) fail("constraint has no variables", rhs.line);
            if (row.name.empty()) row.name = "c" + std::to_string(rows_.size() + 1);
            rows_.push_back(std::move(row));
        }
        if (peek().kind == Tok::Eof) fail("LP text ends without 'End'", peek().line);
    }

    void section_trailers() {
        for (;;) {
            Token t = take();
            if (t.kind == Tok::Eof) fail("missing 'End'", t.line);
            if (t.kind != Tok::Word) fail("expected a section keyword", t.line);
            std::string w = lower(t.text);
            if (w == "end") return;
            if (w == "bounds" || w == "bound") section_bounds();
            else if (w == "binaries" || w == "binary" || w == "bin") section_binaries();
            else if (w == "general" || w == "generals" || w == "gen" || w == "integer")
                fail("general integer variables are not supported", t.line);
            else fail("unexpected section '" + t.text + "'", t.line);
        }
    }

    bool read_bound_number(double& out) {
        double sign = 1.0;
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            if (take().kind == Tok::Minus) sign = -sign;
        }
        const Token& t = peek();
        if (t.kind == Tok::Number) {
            out = sign * take().value;
            return true;
        }
        if (t.kind == Tok::Word && (lower(t.text) == "inf" || lower(t.text) == "infinity")) {
            take();
            out = sign * kInf;
            return true;
        }
        return false;
    }

    // Entries: "lo <= x <= up" | "x <= up" | "x >= lo" | "x = v" | "x free",
    // with signed inf accepted wherever a number is.
    void section_bounds() {
        while (!(at_section_word() || peek().kind == Tok::Eof)) {
            double first_value = 0.0;
            if (read_bound_number(first_value)) {
                Token rel = take();
                if (rel.kind != Tok::Rel || rel.text != "<")
                    fail("expected '<=' after a bound value", rel.line);
                Token name = take();
                if (name.kind != Tok::Word) fail("expected a variable name in Bounds", name.line);
                PendingVar& v = vars_[static_cast<std::size_t>(var_index(name.text))];
                v.lower = first_value;
                if (peek().kind == Tok::Rel) {
                    Token rel2 = take();
                    if (rel2.text != "<") fail("expected '<=' after the variable", rel2.line);
                    if (!read_bound_number(v.upper)) fail("expected an upper bound", rel2.line);
                }
                continue;
            }

            Token name = take();
            if (name.kind != Tok::Word) fail("expected a variable name in Bounds", name.line);
            PendingVar& v = vars_[static_cast<std::size_t>(var_index(name.text))];
            if (peek().kind == Tok::Word && lower(peek().text) == "free") {
                take();
                v.lower = -kInf;
                v.upper = kInf;
                continue;
            }
            Token rel = take();
            if (rel.kind != Tok::Rel) fail("expected a relation in Bounds", rel.line);
            double value = 0.0;
            if (!read_bound_number(value)) fail("expected a bound value", rel.line);
            if (rel.text == "<") v.upper = value;
            else if (rel.text == ">") v.lower = value;
            else v.lower = v.upper = value;
        }
        if (peek().kind == Tok::Eof) fail("LP text ends inside Bounds", peek().line);
    }

    void section_binaries() {
        while (!(at_section_word() || peek().kind == Tok::Eof)) {
            Token name = take();
            if (name.kind != Tok::Word) fail("expected a variable name in Binaries", name.line);
            vars_[static_cast<std::size_t>(var_index(name.text))].binary = true;
        }
        if (peek().kind == Tok::Eof) fail("LP text ends inside Binaries", peek().line);
    }

    static std::vector<LinearTerm> merge_terms(const std::vector<std::pair<int, double>>& raw) {
        // First-appearance order; repeated mentions of a variable sum.
        std::vector<LinearTerm> out;
        std::map<int, std::size_t> where;
        for (const auto& [col, coeff] : raw) {
            auto it = where.find(col);
            if (it == where.end()) {
                where.emplace(col, out.size());
                out.push_back(LinearTerm{col, coeff});
            } else {
                out[it->second].coefficient += coeff;
            }
        }
        return out;
    }

    MilpModel build() {
        MilpModel model;
        for (const PendingVar& v : vars_) {
            if (v.binary) model.add_variable(v.name, VarType::Binary, 0.0, 1.0);
            else model.add_variable(v.name, VarType::Continuous, v.lower, v.upper);
        }
        for (const LinearTerm& t : merge_terms(objective_terms_))
            model.add_objective_term(t.column, t.coefficient);
        model.add_objective_constant(objective_constant_);
        for (const PendingRow& r : rows_)
            model.add_constraint(r.name, merge_terms(r.terms), r.relation, r.rhs);
        return model;
    }

    Lexer lex_;
    std::optional<Token> lookahead_;
    std::optional<Token> held_word_;
    std::vector<PendingVar> vars_;
    std::map<std::string, int> vars_by_name_;
    std::vector<std::pair<int, double>> objective_terms_;
    double objective_constant_ = 0.0;
    std::vector<PendingRow> rows_;
};

}  // namespace

MilpModel read_lp(const std::string& text) { return Reader(text).run(); }

bool models_equivalent(const MilpModel& a, const MilpModel& b, std::string* why) {
    auto differ = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };

    if (a.variable_count() != b.variable_count())
        return differ("variable counts differ: " + std::to_string(a.variable_count()) + " vs " +
                      std::to_string(b.variable_count()));
    for (const Variable& va : a.variables()) {
        int col = b.find_column(va.name);
        if (col < 0) return differ("variable '" + va.name + "' missing from the second model");
        const Variable& vb = b.variable(col);
        if (va.type != vb.type) return differ("variable '" + va.name + "' changes type");
        if (va.lower != vb.lower || va.upper != vb.upper)
            return differ("variable '" + va.name + "' changes bounds");
    }

    auto objective_map = [](const MilpModel& m) {
        std::map<std::string, double> out;
        for (const LinearTerm& t : m.objective_terms()) out[m.variable(t.column).name] += t.coefficient;
        return out;
    };
    if (objective_map(a) != objective_map(b)) return differ("objective coefficients differ");
    if (a.objective_constant() != b.objective_constant()) return differ("objective constants differ");

    if (a.constraint_count() != b.constraint_count())
        return differ("constraint counts differ: " + std::to_string(a.constraint_count()) + " vs " +
                      std::to_string(b.constraint_count()));
    for (std::size_t i = 0; i < a.constraint_count(); ++i) {
        const Constraint& ca = a.constraint(i);
        const Constraint& cb = b.constraint(i);
        if (ca.name != cb.name)
            return differ("row " + std::to_string(i) + " name differs: '" + ca.name + "' vs '" +
                          cb.name + "'");
        if (ca.relation != cb.relation) return differ("row '" + ca.name + "' relation differs");
        if (ca.rhs != cb.rhs) return differ("row '" + ca.name + "' right-hand side differs");
        std::map<std::string, double> ra, rb;
        for (const LinearTerm& t : ca.row) ra[a.variable(t.column).name] += t.coefficient;
        for (const LinearTerm& t : cb.row) rb[b.variable(t.column).name] += t.coefficient;
        if (ra != rb) return differ("row '" + ca.name + "' coefficients differ");
    }
    return true;
}

}  // namespace ocf
