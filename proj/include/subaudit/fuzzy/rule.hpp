#pragma once

#include <span>
#include <string>
#include <vector>

#include "subaudit/fuzzy/variable.hpp"

namespace subaudit::fuzzy {

/// Antecedent expression tree. AND/OR nodes are n-ary and never have a
/// child of their own kind (builders flatten), so printing and reparsing
/// yields the same tree.
struct Expr {
    enum class Kind { Atom, And, Or };

    Kind kind = Kind::Atom;
    std::string variable;  // Atom only
    std::string term;      // Atom only
    std::vector<Expr> children;

    static Expr atom(std::string variable, std::string term);
    static Expr all_of(std::vector<Expr> operands);
    static Expr any_of(std::vector<Expr> operands);

    bool operator==(const Expr&) const = default;
};

struct Rule {
    std::string id;
    Expr antecedent;
    std::string output_variable;
    std::string output_term;
    double weight = 1.0;

    bool operator==(const Rule&) const = default;
};

struct RuleBase {
    std::vector<Rule> rules;

    const Rule* find(std::string_view id) const;
    bool operator==(const RuleBase&) const = default;
};

/// `P_cum IS Low AND (Goals IS None OR Assists IS None)`
std::string to_string(const Expr& expr);
/// One `RULE id: IF ... THEN var IS term [WEIGHT w]` line.
std::string to_string(const Rule& rule);
/// Whole rule file, one rule per line.
std::string print_rules(const RuleBase& rules);

/// Firing degree of an antecedent: min for AND, max for OR. `inputs` holds
/// one crisp value per variable in `variables` (same order); values are
/// clamped into each universe. Throws Error naming an unbound variable or term.
double antecedent_strength(const Expr& expr, std::span<const LinguisticVariable> variables,
                           std::span<const double> inputs);

}  // namespace subaudit::fuzzy
