#include "subaudit/rulebase.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bundled_assets.hpp"
#include "subaudit/error.hpp"
#include "subaudit/fuzzy/config_io.hpp"
#include "subaudit/fuzzy/rule_parser.hpp"

namespace subaudit {

SystemConfig load_system(std::string_view variables_json, std::string_view rules_text) {
    const auto doc = nlohmann::json::parse(variables_json, nullptr, false);
    if (doc.is_discarded()) throw SchemaError("variable document is not valid JSON");

    SystemConfig cfg;
    cfg.variables = fuzzy::variables_from_json(doc);
    cfg.rules = fuzzy::parse_rules(rules_text, cfg.variables);
    cfg.output = doc.value("output", "");
    if (cfg.output.empty()) {
        for (const auto& v : cfg.variables) {
            if (v.kind == fuzzy::VariableKind::Output) cfg.output = v.name;
        }
    }
    for (const auto& v : doc["variables"]) {
        const std::string name = v.value("name", "");
        if (v.contains("source")) cfg.bindings[name] = v["source"].get<std::string>();
        for (const auto& t : v.value("terms", nlohmann::json::array())) {
            if (t.contains("origin")) cfg.origins[name + "." + t.value("name", "")] = t["origin"].get<std::string>();
        }
    }
    if (doc.contains("rule_titles")) {
        for (const auto& [id, title] : doc["rule_titles"].items()) cfg.rule_titles[id] = title.get<std::string>();
    }
    return cfg;
}

SystemConfig load_system_files(const std::string& variables_path, const std::string& rules_path) {
    const auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw SchemaError("cannot open '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    return load_system(slurp(variables_path), slurp(rules_path));
}

std::string_view bundled_variables_text() { return assets::kBundledVariables; }
std::string_view bundled_rules_text() { return assets::kBundledRules; }

SystemConfig build_paper_system() { return load_system(assets::kBundledVariables, assets::kBundledRules); }

std::string_view to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::CoverageGap: return "coverage_gap";
        case Violation::Kind::DanglingReference: return "dangling_reference";
        case Violation::Kind::ParameterOrder: return "parameter_order";
        case Violation::Kind::OutputGap: return "output_gap";
        case Violation::Kind::OutsideUniverse: return "outside_universe";
        case Violation::Kind::DuplicateName: return "duplicate_name";
    }
    return "?";
}

namespace {

void check_expr(const fuzzy::Expr& e, const SystemConfig& cfg, const std::string& rule_id,
                std::vector<Violation>& out) {
    if (e.kind != fuzzy::Expr::Kind::Atom) {
        for (const auto& c : e.children) check_expr(c, cfg, rule_id, out);
        return;
    }
    for (const auto& v : cfg.variables) {
        if (v.name != e.variable) continue;
        if (!v.find(e.term)) {
            out.push_back({Violation::Kind::DanglingReference,
                           "rule " + rule_id + " references undefined term " + e.variable + "." + e.term});
        }
        return;
    }
    out.push_back({Violation::Kind::DanglingReference, "rule " + rule_id + " references undefined variable " + e.variable});
}

}  // namespace

std::vector<Violation> validate_system(const SystemConfig& cfg) {
    std::vector<Violation> out;
    std::set<std::string> names;
    for (const auto& v : cfg.variables) {
        if (!names.insert(v.name).second) {
            out.push_back({Violation::Kind::DuplicateName, "variable " + v.name + " defined twice"});
        }
        std::set<std::string> terms;
        for (const auto& t : v.terms) {
            const std::string where = v.name + "." + t.name;
            if (!terms.insert(t.name).second) {
                out.push_back({Violation::Kind::DuplicateName, "term " + where + " defined twice"});
            }
            if (!t.mf.ordered()) {
                out.push_back({Violation::Kind::ParameterOrder, "term " + where + " has unordered parameters"});
            }
            const auto& p = t.mf.corners();
            if (p[0] < v.universe.lo || p[3] > v.universe.hi) {
                out.push_back({Violation::Kind::OutsideUniverse, "term " + where + " extends outside the universe"});
            }
        }
        if (v.kind == fuzzy::VariableKind::Switch || !(v.universe.lo < v.universe.hi) || v.universe.resolution < 3) {
            continue;
        }
        for (const double x : v.universe.grid()) {
            bool covered = false;
            for (const auto& t : v.terms) covered = covered || t.mf(x) > 0.0;
            if (!covered) {
                out.push_back({v.kind == fuzzy::VariableKind::Output ? Violation::Kind::OutputGap
                                                                     : Violation::Kind::CoverageGap,
                               "variable " + v.name + " has no term covering x = " + std::to_string(x)});
                break;
            }
        }
    }

    for (const auto& r : cfg.rules.rules) {
        check_expr(r.antecedent, cfg, r.id, out);
        check_expr(fuzzy::Expr::atom(r.output_variable, r.output_term), cfg, r.id, out);
    }
    return out;
}

}  // namespace subaudit
