#include "subaudit/fuzzy/config_io.hpp"

#include "subaudit/error.hpp"

namespace subaudit::fuzzy {

namespace {

MembershipFunction mf_from_json(const nlohmann::json& t, const std::string& where) {
    const std::string shape = t.value("shape", "");
    const auto& p = t.at("params");
    if (!p.is_array()) throw SchemaError(where + ": params must be an array");
    std::vector<double> v;
    for (const auto& x : p) {
        if (!x.is_number()) throw SchemaError(where + ": params must be numbers");
        v.push_back(x.get<double>());
    }
    if (shape == "triangle") {
        if (v.size() != 3) throw SchemaError(where + ": triangle takes 3 parameters");
        return MembershipFunction::triangle(v[0], v[1], v[2]);
    }
    if (shape == "trapezoid") {
        if (v.size() != 4) throw SchemaError(where + ": trapezoid takes 4 parameters");
        return MembershipFunction::trapezoid(v[0], v[1], v[2], v[3]);
    }
    throw SchemaError(where + ": unknown shape '" + shape + "'");
}

}  // namespace

std::vector<LinguisticVariable> variables_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("variables") || !doc["variables"].is_array()) {
        throw SchemaError("variable document needs a 'variables' array");
    }
    std::vector<LinguisticVariable> vars;
    try {
        for (const auto& v : doc["variables"]) {
            LinguisticVariable var;
            var.name = v.at("name").get<std::string>();
            const auto kind = parse_variable_kind(v.value("kind", "input"));
            if (!kind) throw SchemaError("variable '" + var.name + "': unknown kind");
            var.kind = *kind;
            const auto& u = v.at("universe");
            if (!u.is_array() || u.size() != 2) throw SchemaError("variable '" + var.name + "': universe is [lo, hi]");
            var.universe.lo = u[0].get<double>();
            var.universe.hi = u[1].get<double>();
            var.universe.resolution = v.value("resolution", std::size_t{2001});
            for (const auto& t : v.at("terms")) {
                const std::string name = t.at("name").get<std::string>();
                var.terms.push_back({name, mf_from_json(t, var.name + "." + name)});
            }
            vars.push_back(std::move(var));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("variable document: ") + e.what());
    }
    return vars;
}

nlohmann::ordered_json variables_to_json(const std::vector<LinguisticVariable>& variables) {
    nlohmann::ordered_json out;
    out["variables"] = nlohmann::ordered_json::array();
    for (const auto& v : variables) {
        nlohmann::ordered_json j;
        j["name"] = v.name;
        j["kind"] = to_string(v.kind);
        j["universe"] = {v.universe.lo, v.universe.hi};
        j["resolution"] = v.universe.resolution;
        j["terms"] = nlohmann::ordered_json::array();
        for (const auto& t : v.terms) {
            j["terms"].push_back({{"name", t.name}, {"shape", to_string(t.mf.shape())}, {"params", t.mf.parameters()}});
        }
        out["variables"].push_back(std::move(j));
    }
    return out;
}

}  // namespace subaudit::fuzzy
