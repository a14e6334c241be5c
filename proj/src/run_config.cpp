#include "subaudit/run_config.hpp"

#include <fstream>
#include <set>

#include "subaudit/error.hpp"

namespace subaudit {

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + " must be an object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) throw SchemaError("unknown key '" + item.key() + "' in " + where);
    }
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& target, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        target = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw SchemaError(where + "." + key + " has the wrong type");
    }
}

std::string_view normalization_name(TechnicalNormalization n) {
    return n == TechnicalNormalization::TeamVolume ? "team_volume" : "none";
}

}  // namespace

void RunConfig::validate() const {
    pipeline.validate();
    priority.validate();
    if (variables_path.empty() != rules_path.empty()) {
        throw DomainError("system.variables and system.rules must be given together");
    }
    if (kernels != "auto" && kernels != "scalar" && kernels != "avx2") {
        throw DomainError("kernels must be auto, scalar or avx2");
    }
}

SystemConfig RunConfig::load_system() const {
    if (variables_path.empty()) return build_paper_system();
    return load_system_files(variables_path, rules_path);
}

const fuzzy::kernels::KernelTable& RunConfig::kernel_table() const {
    if (kernels == "scalar") return fuzzy::kernels::scalar();
    if (kernels == "avx2") {
        const auto* t = fuzzy::kernels::avx2();
        if (!t) throw DomainError("avx2 kernels requested but not supported by this CPU");
        return *t;
    }
    return fuzzy::kernels::active();
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig c;
    reject_unknown(j, {"pipeline", "priority", "system", "kernels"}, "run config");
    read(j, "kernels", c.kernels, "run config");

    if (j.contains("pipeline")) {
        const auto& p = j["pipeline"];
        reject_unknown(p, {"alpha_net", "normalization", "default_age", "centrality", "technical_weights"}, "pipeline");
        read(p, "alpha_net", c.pipeline.alpha_net, "pipeline");
        read(p, "default_age", c.pipeline.default_age, "pipeline");
        if (p.contains("normalization")) {
            std::string n;
            read(p, "normalization", n, "pipeline");
            if (n == "team_volume") c.pipeline.normalization = TechnicalNormalization::TeamVolume;
            else if (n == "none") c.pipeline.normalization = TechnicalNormalization::None;
            else throw DomainError("pipeline.normalization must be team_volume or none");
        }
        if (p.contains("centrality")) {
            const auto& cj = p["centrality"];
            reject_unknown(cj, {"teleport", "max_iterations", "tolerance"}, "pipeline.centrality");
            read(cj, "teleport", c.pipeline.centrality.teleport, "pipeline.centrality");
            read(cj, "max_iterations", c.pipeline.centrality.max_iterations, "pipeline.centrality");
            read(cj, "tolerance", c.pipeline.centrality.tolerance, "pipeline.centrality");
        }
        if (p.contains("technical_weights")) {
            if (!p["technical_weights"].is_array()) throw SchemaError("pipeline.technical_weights must be an array");
            c.pipeline.technical_weights.clear();
            for (const auto& w : p["technical_weights"]) {
                reject_unknown(w, {"event", "sub_event", "tag", "weight"}, "technical weight");
                WeightRule rule;
                read(w, "event", rule.event_name, "technical weight");
                read(w, "sub_event", rule.sub_event_name, "technical weight");
                if (w.contains("tag") && !w["tag"].is_null()) {
                    int tag = 0;
                    read(w, "tag", tag, "technical weight");
                    rule.tag = tag;
                }
                if (!w.contains("weight")) throw SchemaError("technical weight without 'weight'");
                read(w, "weight", rule.weight, "technical weight");
                if (rule.event_name.empty()) throw SchemaError("technical weight without 'event'");
                c.pipeline.technical_weights.push_back(std::move(rule));
            }
        }
    }
    if (j.contains("priority")) {
        const auto& p = j["priority"];
        reject_unknown(p, {"alpha", "critical_threshold"}, "priority");
        read(p, "alpha", c.priority.alpha, "priority");
        read(p, "critical_threshold", c.priority.critical_threshold, "priority");
    }
    if (j.contains("system")) {
        const auto& s = j["system"];
        reject_unknown(s, {"variables", "rules"}, "system");
        if (s.contains("variables") && !s["variables"].is_null()) read(s, "variables", c.variables_path, "system");
        if (s.contains("rules") && !s["rules"].is_null()) read(s, "rules", c.rules_path, "system");
    }
    c.validate();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open run config " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("run config " + path + ": " + e.what());
    }
    return run_config_from_json(j);
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    auto& p = j["pipeline"];
    p["alpha_net"] = c.pipeline.alpha_net;
    p["normalization"] = normalization_name(c.pipeline.normalization);
    p["default_age"] = c.pipeline.default_age;
    p["centrality"] = {{"teleport", c.pipeline.centrality.teleport},
                       {"max_iterations", c.pipeline.centrality.max_iterations},
                       {"tolerance", c.pipeline.centrality.tolerance}};
    p["technical_weights"] = nlohmann::ordered_json::array();
    for (const auto& w : c.pipeline.technical_weights) {
        nlohmann::ordered_json e;
        e["event"] = w.event_name;
        e["sub_event"] = w.sub_event_name;
        e["tag"] = w.tag ? nlohmann::ordered_json(*w.tag) : nlohmann::ordered_json(nullptr);
        e["weight"] = w.weight;
        p["technical_weights"].push_back(std::move(e));
    }
    j["priority"] = {{"alpha", c.priority.alpha}, {"critical_threshold", c.priority.critical_threshold}};
    const auto path_or_null = [](const std::string& s) {
        return s.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(s);
    };
    j["system"] = {{"variables", path_or_null(c.variables_path)}, {"rules", path_or_null(c.rules_path)}};
    j["kernels"] = c.kernels;
    return j;
}

}  // namespace subaudit
