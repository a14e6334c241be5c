#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subaudit/fuzzy/kernels.hpp"
#include "subaudit/fuzzy/rule.hpp"
#include "subaudit/fuzzy/variable.hpp"

namespace subaudit::fuzzy {

struct RuleActivation {
    std::string rule_id;
    double strength = 0.0;  // antecedent degree times rule weight
    std::string consequent_term;
    bool contributes = false;  // strength > 0, i.e. the clipped term adds area
};

/// One entry per rule, in rule-base order, zeros included.
struct ActivationTrace {
    std::vector<RuleActivation> rules;
};

struct Inference {
    std::vector<double> curve;  // aggregated output membership on the output grid
    ActivationTrace trace;
};

/// Centroid of a curve sampled on `universe`'s grid by trapezoidal
/// accumulation. A curve with no area defuzzifies to 0.
double defuzz_centroid(std::span<const double> curve, const Universe& universe,
                       const kernels::KernelTable& kernels = kernels::active());

/// Mamdani engine: AND = min, OR = max, implication = min (clip),
/// aggregation = max, centroid defuzzification. Immutable after
/// construction; all queries are const and thread-safe.
class Engine {
public:
    /// Throws ValidationError when a rule names an unknown variable or term,
    /// or when consequents do not all target the output variable.
    Engine(std::vector<LinguisticVariable> variables, RuleBase rules,
           const kernels::KernelTable& kernels = kernels::active());

    const std::vector<LinguisticVariable>& variables() const noexcept { return variables_; }
    const RuleBase& rule_base() const noexcept { return rules_; }
    const LinguisticVariable& output() const noexcept { return variables_[output_index_]; }
    const std::vector<double>& output_grid() const noexcept { return grid_; }
    const kernels::KernelTable& kernels() const noexcept { return *kernels_; }

    /// Index into variables(); throws Error for unknown names.
    std::size_t variable_index(std::string_view name) const;

    /// Crisp input vector aligned with variables(). Variables not named stay
    /// unbound (NaN); the output variable is ignored.
    std::vector<double> bind(const std::map<std::string, double>& by_name) const;

    /// Clips every consequent at its rule's strength and max-aggregates.
    /// Inputs are clamped into their universes. Throws Error when a rule
    /// reads an unbound variable.
    Inference infer(std::span<const double> inputs) const;

    /// Aggregate curve for given per-rule strengths (rule-base order).
    std::vector<double> aggregate(std::span<const double> strengths) const;

    double defuzzify(std::span<const double> curve) const;

    /// infer + defuzzify.
    double evaluate(std::span<const double> inputs, ActivationTrace* trace = nullptr) const;

private:
    struct Node {
        Expr::Kind kind = Expr::Kind::Atom;
        std::size_t variable = 0;
        std::size_t term = 0;
        std::vector<Node> children;
    };
    struct CompiledRule {
        Node antecedent;
        std::size_t consequent = 0;
        double weight = 1.0;
    };

    Node compile(const Expr& e, const std::string& rule_id) const;
    double strength(const Node& n, std::span<const double> inputs) const;

    std::vector<LinguisticVariable> variables_;
    RuleBase rules_;
    const kernels::KernelTable* kernels_;
    std::size_t output_index_ = 0;
    std::vector<CompiledRule> compiled_;
    std::vector<double> grid_;
    std::vector<std::vector<double>> term_curves_;
};

}  // namespace subaudit::fuzzy
