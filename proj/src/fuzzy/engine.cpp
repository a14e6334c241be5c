#include "subaudit/fuzzy/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subaudit/error.hpp"

namespace subaudit::fuzzy {

double defuzz_centroid(std::span<const double> curve, const Universe& universe, const kernels::KernelTable& k) {
    const auto xs = universe.grid();
    if (curve.size() != xs.size()) throw DomainError("curve length does not match the universe grid");
    const auto m = k.centroid_moments(xs, curve);
    if (!(m.mass > 0.0)) return 0.0;
    return std::clamp(m.first / m.mass, universe.lo, universe.hi);
}

Engine::Engine(std::vector<LinguisticVariable> variables, RuleBase rules, const kernels::KernelTable& kernels)
    : variables_(std::move(variables)), rules_(std::move(rules)), kernels_(&kernels) {
    std::size_t outputs = 0;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        variables_[i].universe.validate();
        if (variables_[i].kind == VariableKind::Output) {
            output_index_ = i;
            ++outputs;
        }
    }
    if (outputs == 0 && !rules_.rules.empty()) {
        output_index_ = variable_index(rules_.rules.front().output_variable);
        ++outputs;
    }
    if (outputs != 1) throw ValidationError("fuzzy system needs exactly one output variable");

    const LinguisticVariable& out = variables_[output_index_];
    for (const auto& r : rules_.rules) {
        if (r.output_variable != out.name) {
            throw ValidationError("rule " + r.id + " concludes on '" + r.output_variable + "', not the output '" +
                                  out.name + "'");
        }
        const auto term = out.index_of(r.output_term);
        if (!term) throw ValidationError("rule " + r.id + " uses unknown output term '" + r.output_term + "'");
        compiled_.push_back({compile(r.antecedent, r.id), *term, r.weight});
    }

    grid_ = out.universe.grid();
    for (const auto& t : out.terms) {
        std::vector<double> curve(grid_.size());
        const auto& p = t.mf.corners();
        kernels_->sample_trapezoid(p[0], p[1], p[2], p[3], grid_, curve);
        term_curves_.push_back(std::move(curve));
    }
}

std::size_t Engine::variable_index(std::string_view name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i].name == name) return i;
    }
    throw Error("unknown variable '" + std::string(name) + "'");
}

Engine::Node Engine::compile(const Expr& e, const std::string& rule_id) const {
    Node n;
    n.kind = e.kind;
    if (e.kind == Expr::Kind::Atom) {
        std::size_t v = variables_.size();
        for (std::size_t i = 0; i < variables_.size(); ++i) {
            if (variables_[i].name == e.variable) v = i;
        }
        if (v == variables_.size()) {
            throw ValidationError("rule " + rule_id + " references unknown variable '" + e.variable + "'");
        }
        const auto t = variables_[v].index_of(e.term);
        if (!t) throw ValidationError("rule " + rule_id + " references unknown term '" + e.term + "'");
        n.variable = v;
        n.term = *t;
        return n;
    }
    if (e.children.empty()) throw ValidationError("rule " + rule_id + " has an empty expression");
    for (const auto& c : e.children) n.children.push_back(compile(c, rule_id));
    return n;
}

std::vector<double> Engine::bind(const std::map<std::string, double>& by_name) const {
    std::vector<double> inputs(variables_.size(), std::numeric_limits<double>::quiet_NaN());
    for (const auto& [name, value] : by_name) inputs[variable_index(name)] = value;
    return inputs;
}

double Engine::strength(const Node& n, std::span<const double> inputs) const {
    switch (n.kind) {
        case Expr::Kind::Atom: {
            const LinguisticVariable& var = variables_[n.variable];
            if (n.variable >= inputs.size() || std::isnan(inputs[n.variable])) {
                throw Error("unbound variable '" + var.name + "'");
            }
            return var.terms[n.term].mf(var.universe.clamp(inputs[n.variable]));
        }
        case Expr::Kind::And: {
            double v = 1.0;
            for (const auto& c : n.children) v = std::min(v, strength(c, inputs));
            return v;
        }
        case Expr::Kind::Or: {
            double v = 0.0;
            for (const auto& c : n.children) v = std::max(v, strength(c, inputs));
            return v;
        }
    }
    return 0.0;
}

Inference Engine::infer(std::span<const double> inputs) const {
    Inference result;
    result.trace.rules.reserve(compiled_.size());
    std::vector<double> strengths;
    strengths.reserve(compiled_.size());
    for (std::size_t r = 0; r < compiled_.size(); ++r) {
        const double s = strength(compiled_[r].antecedent, inputs) * compiled_[r].weight;
        strengths.push_back(s);
        result.trace.rules.push_back({rules_.rules[r].id, s, rules_.rules[r].output_term, s > 0.0});
    }
    result.curve = aggregate(strengths);
    return result;
}

std::vector<double> Engine::aggregate(std::span<const double> strengths) const {
    if (strengths.size() != compiled_.size()) throw DomainError("one strength per rule is required");
    std::vector<double> curve(grid_.size(), 0.0);
    for (std::size_t r = 0; r < compiled_.size(); ++r) {
        if (strengths[r] > 0.0) kernels_->clip_max(term_curves_[compiled_[r].consequent], strengths[r], curve);
    }
    return curve;
}

double Engine::defuzzify(std::span<const double> curve) const {
    if (curve.size() != grid_.size()) throw DomainError("curve length does not match the output grid");
    const auto m = kernels_->centroid_moments(grid_, curve);
    if (!(m.mass > 0.0)) return 0.0;
    return std::clamp(m.first / m.mass, output().universe.lo, output().universe.hi);
}

double Engine::evaluate(std::span<const double> inputs, ActivationTrace* trace) const {
    Inference inf = infer(inputs);
    const double value = defuzzify(inf.curve);
    if (trace) *trace = std::move(inf.trace);
    return value;
}

}  // namespace subaudit::fuzzy
