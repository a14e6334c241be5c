#include "subaudit/audit_io.hpp"

#include <ostream>

#include "subaudit/csv.hpp"

namespace subaudit {

namespace {

ojson optional_int(const std::optional<int>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::string optional_cell(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

ojson trace_json(const fuzzy::ActivationTrace& trace, const SystemConfig* system) {
    ojson rules = ojson::array();
    for (const auto& a : trace.rules) {
        ojson r;
        r["rule_id"] = a.rule_id;
        if (system) {
            if (const auto it = system->rule_titles.find(a.rule_id); it != system->rule_titles.end()) {
                r["title"] = it->second;
            }
            if (const auto* rule = system->rules.find(a.rule_id)) r["text"] = fuzzy::to_string(*rule);
        }
        r["strength"] = a.strength;
        r["consequent"] = a.consequent_term;
        r["contributes"] = a.contributes;
        rules.push_back(std::move(r));
    }
    return rules;
}

}  // namespace

ojson to_json(const PriorityResult& r, const SystemConfig* system) {
    ojson j;
    j["match_id"] = r.match_id;
    j["player_id"] = r.player_id;
    j["team_id"] = r.team_id;
    j["slice"] = r.tempo_partida;
    j["p_cum"] = r.p_cum;
    j["baseline"] = r.baseline;
    j["modifier"] = r.modifier;
    j["p_final"] = r.p_final;
    j["rank"] = r.rank;
    j["team_rank"] = r.team_rank;
    j["inputs"] = ojson::object();
    for (const auto& [name, value] : r.inputs) j["inputs"][name] = value;
    j["overridden"] = r.overridden;
    j["trace"] = trace_json(r.trace, system);
    return j;
}

ojson to_json(const LatencyEntry& e) {
    ojson j;
    j["player_id"] = e.player_id;
    j["team_id"] = e.team_id;
    j["first_critical_minute"] = optional_int(e.first_critical_minute);
    j["substitution_minute"] = optional_int(e.substitution_minute);
    j["latency_minutes"] = optional_int(e.latency_minutes);
    j["status"] = to_string(e.status);
    return j;
}

ojson to_json(const PostEntryTrack& t) {
    ojson j;
    j["player_id"] = t.player_id;
    j["team_id"] = t.team_id;
    j["replaced_player_id"] = t.replaced_player_id;
    j["entry_minute"] = t.entry_minute;
    j["series"] = ojson::array();
    for (const auto& [slice, p] : t.p_final) j["series"].push_back({{"slice", slice}, {"p_final", p}});
    j["high_impact"] = t.high_impact;
    return j;
}

ojson to_json(const Substitution& s) {
    return {{"minute", s.minute}, {"team_id", s.team_id}, {"player_out", s.player_out}, {"player_in", s.player_in}};
}

ojson to_json(const MatchAudit& audit, const PriorityConfig& config, const SystemConfig* system) {
    ojson j;
    j["match_id"] = audit.match_id;
    j["alpha"] = config.alpha;
    j["critical_threshold"] = config.critical_threshold;
    j["slices"] = ojson::array();
    for (const auto& s : audit.slices) {
        ojson slice;
        slice["slice"] = s.tempo_partida;
        slice["results"] = ojson::array();
        for (const auto& r : s.results) slice["results"].push_back(to_json(r, system));
        j["slices"].push_back(std::move(slice));
    }
    j["substitutions"] = ojson::array();
    for (const auto& s : audit.substitutions) j["substitutions"].push_back(to_json(s));
    j["latency"] = ojson::array();
    for (const auto& e : audit.latency) j["latency"].push_back(to_json(e));
    j["post_entry"] = ojson::array();
    for (const auto& t : audit.post_entry) j["post_entry"].push_back(to_json(t));
    return j;
}

ojson timeline_json(const MatchAudit& audit, const PriorityConfig& config) {
    ojson j;
    j["match_id"] = audit.match_id;
    j["critical_threshold"] = config.critical_threshold;
    j["slices"] = ojson::array();
    for (const auto& s : audit.slices) {
        ojson slice;
        slice["slice"] = s.tempo_partida;
        slice["entries"] = ojson::array();
        for (const auto& r : s.results) {
            slice["entries"].push_back({{"rank", r.rank},
                                        {"team_rank", r.team_rank},
                                        {"player_id", r.player_id},
                                        {"team_id", r.team_id},
                                        {"p_cum", r.p_cum},
                                        {"baseline", r.baseline},
                                        {"modifier", r.modifier},
                                        {"p_final", r.p_final}});
        }
        j["slices"].push_back(std::move(slice));
    }
    j["substitutions"] = ojson::array();
    for (const auto& s : audit.substitutions) j["substitutions"].push_back(to_json(s));
    return j;
}

ojson player_series_json(const MatchAudit& audit, std::string_view player_id, const SystemConfig* system) {
    ojson j;
    j["match_id"] = audit.match_id;
    j["player_id"] = std::string(player_id);
    j["series"] = ojson::array();
    for (const auto& s : audit.slices) {
        for (const auto& r : s.results) {
            if (r.player_id == player_id) j["series"].push_back(to_json(r, system));
        }
    }
    for (const auto& e : audit.latency) {
        if (e.player_id == player_id) j["latency"] = to_json(e);
    }
    return j;
}

void write_timeline_csv(std::ostream& out, std::span<const MatchAudit> audits, const PriorityConfig& config) {
    csv::write_row(out, {"matchId", "Tempo_Partida", "rank", "team_rank", "playerId", "teamId", "p_cum", "baseline",
                         "modifier", "p_final", "critical"});
    for (const auto& a : audits) {
        for (const auto& s : a.slices) {
            for (const auto& r : s.results) {
                csv::write_row(out, {a.match_id, std::to_string(s.tempo_partida), std::to_string(r.rank),
                                     std::to_string(r.team_rank), r.player_id, r.team_id, csv::format_fixed(r.p_cum),
                                     csv::format_fixed(r.baseline), csv::format_fixed(r.modifier),
                                     csv::format_fixed(r.p_final), r.p_final > config.critical_threshold ? "1" : "0"});
            }
        }
    }
}

void write_latency_csv(std::ostream& out, std::span<const MatchAudit> audits) {
    csv::write_row(out, {"matchId", "playerId", "teamId", "first_critical_minute", "substitution_minute",
                         "latency_minutes", "status"});
    for (const auto& a : audits) {
        for (const auto& e : a.latency) {
            csv::write_row(out, {a.match_id, e.player_id, e.team_id, optional_cell(e.first_critical_minute),
                                 optional_cell(e.substitution_minute), optional_cell(e.latency_minutes),
                                 std::string(to_string(e.status))});
        }
    }
}

void write_plot_csv(std::ostream& out, std::span<const MatchAudit> audits, const PriorityConfig& config) {
    csv::write_row(out, {"matchId", "teamId", "playerId", "Tempo_Partida", "p_final", "critical_threshold",
                         "sub_out_minute", "sub_in_minute"});
    for (const auto& a : audits) {
        std::map<std::pair<std::string, std::string>, std::vector<const PriorityResult*>> curves;
        for (const auto& s : a.slices) {
            for (const auto& r : s.results) curves[{r.team_id, r.player_id}].push_back(&r);
        }
        for (const auto& [key, points] : curves) {
            std::optional<int> out_min, in_min;
            for (const auto& sub : a.substitutions) {
                if (sub.player_out == key.second) out_min = sub.minute;
                if (sub.player_in == key.second) in_min = sub.minute;
            }
            for (const auto* r : points) {
                csv::write_row(out, {a.match_id, r->team_id, r->player_id, std::to_string(r->tempo_partida),
                                     csv::format_fixed(r->p_final), csv::format_fixed(config.critical_threshold),
                                     optional_cell(out_min), optional_cell(in_min)});
            }
        }
    }
}

}  // namespace subaudit
