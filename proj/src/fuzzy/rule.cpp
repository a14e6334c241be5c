#include "subaudit/fuzzy/rule.hpp"

#include <algorithm>
#include <cstdio>

#include "subaudit/error.hpp"

namespace subaudit::fuzzy {

const Term* LinguisticVariable::find(std::string_view term) const {
    for (const auto& t : terms) {
        if (t.name == term) return &t;
    }
    return nullptr;
}

std::optional<std::size_t> LinguisticVariable::index_of(std::string_view term) const {
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].name == term) return i;
    }
    return std::nullopt;
}

std::string_view to_string(VariableKind kind) {
    switch (kind) {
        case VariableKind::Input: return "input";
        case VariableKind::Switch: return "switch";
        case VariableKind::Output: return "output";
    }
    return "?";
}

std::optional<VariableKind> parse_variable_kind(std::string_view text) {
    if (text == "input") return VariableKind::Input;
    if (text == "switch") return VariableKind::Switch;
    if (text == "output") return VariableKind::Output;
    return std::nullopt;
}

Expr Expr::atom(std::string variable, std::string term) {
    Expr e;
    e.kind = Kind::Atom;
    e.variable = std::move(variable);
    e.term = std::move(term);
    return e;
}

namespace {

Expr combine(Expr::Kind kind, std::vector<Expr> operands) {
    if (operands.size() == 1) return std::move(operands.front());
    Expr e;
    e.kind = kind;
    for (auto& op : operands) {
        if (op.kind == kind) {
            for (auto& c : op.children) e.children.push_back(std::move(c));
        } else {
            e.children.push_back(std::move(op));
        }
    }
    return e;
}

void print(const Expr& e, std::string& out, bool parenthesize_or) {
    switch (e.kind) {
        case Expr::Kind::Atom:
            out += e.variable + " IS " + e.term;
            return;
        case Expr::Kind::And:
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                if (i) out += " AND ";
                print(e.children[i], out, true);
            }
            return;
        case Expr::Kind::Or:
            if (parenthesize_or) out += '(';
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                if (i) out += " OR ";
                print(e.children[i], out, false);
            }
            if (parenthesize_or) out += ')';
            return;
    }
}

std::string format_weight(double w) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", w);
    return buf;
}

}  // namespace

Expr Expr::all_of(std::vector<Expr> operands) { return combine(Kind::And, std::move(operands)); }
Expr Expr::any_of(std::vector<Expr> operands) { return combine(Kind::Or, std::move(operands)); }

const Rule* RuleBase::find(std::string_view id) const {
    for (const auto& r : rules) {
        if (r.id == id) return &r;
    }
    return nullptr;
}

std::string to_string(const Expr& expr) {
    std::string out;
    print(expr, out, false);
    return out;
}

std::string to_string(const Rule& rule) {
    std::string out = "RULE " + rule.id + ": IF " + to_string(rule.antecedent) + " THEN " + rule.output_variable +
                      " IS " + rule.output_term;
    if (rule.weight != 1.0) out += " WEIGHT " + format_weight(rule.weight);
    return out;
}

std::string print_rules(const RuleBase& rules) {
    std::string out;
    for (const auto& r : rules.rules) out += to_string(r) + '\n';
    return out;
}

double antecedent_strength(const Expr& expr, std::span<const LinguisticVariable> variables,
                           std::span<const double> inputs) {
    switch (expr.kind) {
        case Expr::Kind::Atom: {
            for (std::size_t i = 0; i < variables.size(); ++i) {
                if (variables[i].name != expr.variable) continue;
                if (i >= inputs.size()) throw Error("unbound variable '" + expr.variable + "'");
                const Term* t = variables[i].find(expr.term);
                if (!t) throw Error("variable '" + expr.variable + "' has no term '" + expr.term + "'");
                return t->mf(variables[i].universe.clamp(inputs[i]));
            }
            throw Error("unbound variable '" + expr.variable + "'");
        }
        case Expr::Kind::And: {
            double v = 1.0;
            for (const auto& c : expr.children) v = std::min(v, antecedent_strength(c, variables, inputs));
            return v;
        }
        case Expr::Kind::Or: {
            double v = 0.0;
            for (const auto& c : expr.children) v = std::max(v, antecedent_strength(c, variables, inputs));
            return v;
        }
    }
    return 0.0;
}

}  // namespace subaudit::fuzzy
