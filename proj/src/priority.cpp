#include "subaudit/priority.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "subaudit/csv.hpp"
#include "subaudit/error.hpp"

namespace subaudit {

void PriorityConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("priority alpha must be positive");
    if (!(critical_threshold >= 0.0 && critical_threshold <= 100.0)) {
        throw DomainError("critical threshold must lie in [0, 100]");
    }
}

double baseline(double p_cum) {
    if (!(p_cum >= 0.0 && p_cum <= 1.0)) throw DomainError("p_cum must lie in [0, 1]");
    return 100.0 * (1.0 - p_cum);
}

double final_priority(double base, double modifier, const PriorityConfig& config) {
    return std::clamp(base + modifier * config.alpha, 0.0, 100.0);
}

std::optional<double> state_value(const PlayerSliceState& s, std::string_view source) {
    if (source == "p_cum") return s.p_cum();
    if (source == "momentum_rate") return s.momentum_rate;
    if (source == "minutes_played") return s.minutes_played;
    if (source == "cartao_amarelo") return s.cartao_amarelo;
    if (source == "player_age") return s.player_age;
    if (source == "goals_scored") return s.goals_scored;
    if (source == "assists") return s.assists;
    if (source == "is_defender") return s.player_position == Role::Defender ? 1.0 : 0.0;
    if (source == "is_midfielder") return s.player_position == Role::Midfielder ? 1.0 : 0.0;
    if (source == "is_forward") return s.player_position == Role::Forward ? 1.0 : 0.0;
    if (source == "is_goalkeeper") return s.player_position == Role::Goalkeeper ? 1.0 : 0.0;
    return std::nullopt;
}

PriorityModel::PriorityModel(SystemConfig system, PriorityConfig config, const fuzzy::kernels::KernelTable& kernels)
    : system_(std::move(system)), config_(config), engine_(system_.variables, system_.rules, kernels) {
    config_.validate();
    static const PlayerSliceState probe{};
    for (const auto& v : engine_.variables()) {
        if (v.kind == fuzzy::VariableKind::Output) {
            sources_.emplace_back();
            continue;
        }
        const auto it = system_.bindings.find(v.name);
        if (it == system_.bindings.end()) throw ValidationError("input variable '" + v.name + "' has no state binding");
        if (!state_value(probe, it->second)) {
            throw ValidationError("input variable '" + v.name + "' is bound to unknown field '" + it->second + "'");
        }
        sources_.push_back(it->second);
    }
}

std::vector<double> PriorityModel::crisp_inputs(const PlayerSliceState& state) const {
    std::vector<double> x(sources_.size(), 0.0);
    for (std::size_t i = 0; i < sources_.size(); ++i) {
        if (!sources_[i].empty()) x[i] = *state_value(state, sources_[i]);
    }
    return x;
}

namespace {

void check_state(const PlayerSliceState& s) {
    const auto fail = [&](const std::string& what) {
        throw DomainError("state of player " + s.player_id + " at " + std::to_string(s.tempo_partida) + "': " + what);
    };
    if (!(s.p_cum() >= 0.0 && s.p_cum() <= 1.0)) fail("p_cum outside [0, 1]");
    if (!(s.momentum_rate >= -1.0 && s.momentum_rate <= 1.0)) fail("momentum_rate outside [-1, 1]");
    if (s.cartao_amarelo != 0 && s.cartao_amarelo != 1) fail("cartao_amarelo must be 0 or 1");
    if (s.minutes_played < 0) fail("minutes_played negative");
    if (s.goals_scored < 0 || s.assists < 0) fail("negative goal or assist count");
}

bool ranks_before(const PriorityResult& a, const PriorityResult& b) {
    if (a.p_final != b.p_final) return a.p_final > b.p_final;
    if (a.p_cum != b.p_cum) return a.p_cum < b.p_cum;
    return a.player_id < b.player_id;
}

}  // namespace

PriorityResult PriorityModel::score(const PlayerSliceState& state) const {
    check_state(state);
    PriorityResult r;
    r.match_id = state.match_id;
    r.player_id = state.player_id;
    r.team_id = state.team_id;
    r.tempo_partida = state.tempo_partida;
    r.p_cum = state.p_cum();
    const auto x = crisp_inputs(state);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!sources_[i].empty()) r.inputs[engine_.variables()[i].name] = x[i];
    }
    r.modifier = engine_.evaluate(x, &r.trace);
    r.baseline = baseline(r.p_cum);
    r.p_final = final_priority(r.baseline, r.modifier, config_);
    return r;
}

std::vector<PriorityResult> audit_slice(std::span<const PlayerSliceState> states, const PriorityModel& model) {
    std::vector<PriorityResult> out;
    for (const auto& s : states) {
        if (s.player_position == Role::Goalkeeper) continue;
        out.push_back(model.score(s));
    }
    std::sort(out.begin(), out.end(), ranks_before);
    std::map<std::string, int> team_counter;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].rank = static_cast<int>(i + 1);
        out[i].team_rank = ++team_counter[out[i].team_id];
    }
    return out;
}

void rank_against(PriorityResult& result, const SliceRanking& slice) {
    int rank = 1, team_rank = 1;
    for (const auto& other : slice.results) {
        if (other.player_id == result.player_id) continue;
        if (ranks_before(other, result)) {
            ++rank;
            if (other.team_id == result.team_id) ++team_rank;
        }
    }
    result.rank = rank;
    result.team_rank = team_rank;
}

std::string_view to_string(LatencyStatus status) {
    switch (status) {
        case LatencyStatus::Resolved: return "resolved";
        case LatencyStatus::UnresolvedCritical: return "unresolved_critical";
        case LatencyStatus::NotCritical: return "not_critical";
    }
    return "?";
}

const PriorityResult* MatchAudit::find(std::string_view player_id, int tempo_partida) const {
    for (const auto& s : slices) {
        if (s.tempo_partida != tempo_partida) continue;
        for (const auto& r : s.results) {
            if (r.player_id == player_id) return &r;
        }
    }
    return nullptr;
}

MatchAudit audit_match(std::span<const PlayerSliceState> states, const MatchRecord& match, const PriorityModel& model) {
    MatchAudit audit;
    audit.match_id = match.match_id;
    audit.substitutions = match.substitutions;

    std::map<int, std::vector<PlayerSliceState>> by_slice;
    for (const auto& s : states) {
        if (s.match_id == match.match_id) by_slice[s.tempo_partida].push_back(s);
    }
    for (const auto& [label, group] : by_slice) {
        auto ranked = audit_slice(group, model);
        if (!ranked.empty()) audit.slices.push_back({label, std::move(ranked)});
    }

    for (const auto& sub : match.substitutions) {
        PostEntryTrack track;
        track.player_id = sub.player_in;
        track.team_id = sub.team_id;
        track.replaced_player_id = sub.player_out;
        track.entry_minute = sub.minute;
        for (const auto& slice : audit.slices) {
            for (const auto& r : slice.results) {
                if (r.player_id == sub.player_in) track.p_final.emplace_back(slice.tempo_partida, r.p_final);
            }
        }
        track.high_impact = track.p_final.size() >= 2;
        for (std::size_t i = 1; i < track.p_final.size(); ++i) {
            track.high_impact = track.high_impact && track.p_final[i].second < track.p_final[i - 1].second;
        }
        audit.post_entry.push_back(std::move(track));
    }
    audit.latency = decision_latency(audit, model.config());
    return audit;
}

std::vector<LatencyEntry> decision_latency(const MatchAudit& audit, const PriorityConfig& config) {
    std::map<std::pair<std::string, std::string>, LatencyEntry> entries;  // (team, player)
    for (const auto& slice : audit.slices) {
        for (const auto& r : slice.results) {
            auto& e = entries[{r.team_id, r.player_id}];
            e.player_id = r.player_id;
            e.team_id = r.team_id;
            if (r.p_final > config.critical_threshold &&
                (!e.first_critical_minute || slice.tempo_partida < *e.first_critical_minute)) {
                e.first_critical_minute = slice.tempo_partida;
            }
        }
    }
    std::vector<LatencyEntry> out;
    for (auto& [key, e] : entries) {
        for (const auto& sub : audit.substitutions) {
            if (sub.player_out == e.player_id) e.substitution_minute = sub.minute;
        }
        if (e.first_critical_minute && e.substitution_minute) {
            e.latency_minutes = std::max(0, *e.substitution_minute - *e.first_critical_minute);
            e.status = LatencyStatus::Resolved;
        } else if (e.first_critical_minute) {
            e.status = LatencyStatus::UnresolvedCritical;
        } else {
            e.status = LatencyStatus::NotCritical;
        }
        out.push_back(std::move(e));
    }
    return out;
}

namespace {

struct FieldSpec {
    const char* canonical;
    std::vector<std::string_view> aliases;
    double lo;
    double hi;
    bool integral;
};

const std::vector<FieldSpec>& override_fields() {
    static const std::vector<FieldSpec> fields = {
        {"playerank_acumulativo_media_percentil", {"p_cum", "P_cum"}, 0.0, 1.0, false},
        {"momentum_rate", {"momentum", "Momentum"}, -1.0, 1.0, false},
        {"minutes_played", {"min_played", "Min_played"}, 0.0, 100.0, true},
        {"cartao_amarelo", {"card_y", "Card_Y"}, 0.0, 1.0, true},
        {"player_age", {"age", "Age"}, 15.0, 45.0, true},
        {"goals_scored", {"goals", "Goals"}, 0.0, 10.0, true},
        {"assists", {"Assists"}, 0.0, 10.0, true},
        {"player_position", {"position"}, 0.0, 0.0, false},
    };
    return fields;
}

std::string bounds_text(const FieldSpec& f) {
    return "[" + csv::format_general(f.lo) + ", " + csv::format_general(f.hi) + "]";
}

}  // namespace

PriorityResult what_if(const PlayerSliceState& state, const std::map<std::string, OverrideValue>& overrides,
                       const PriorityModel& model) {
    PlayerSliceState s = state;
    std::vector<std::string> changed;
    for (const auto& [key, value] : overrides) {
        const FieldSpec* spec = nullptr;
        for (const auto& f : override_fields()) {
            if (key == f.canonical || std::find(f.aliases.begin(), f.aliases.end(), key) != f.aliases.end()) spec = &f;
        }
        if (!spec) throw OverrideError(key, "unknown override field '" + key + "'");
        const std::string field = spec->canonical;

        if (field == "player_position") {
            const auto* text = std::get_if<std::string>(&value);
            const auto role = text ? parse_role(*text) : std::nullopt;
            if (!role) throw OverrideError(key, "override player_position must be one of Goalkeeper, Defender, Midfielder, Forward");
            s.player_position = *role;
            changed.push_back(field);
            continue;
        }
        const auto* num = std::get_if<double>(&value);
        if (!num || !std::isfinite(*num)) throw OverrideError(key, "override " + field + " must be a number");
        const double v = *num;
        if (v < spec->lo || v > spec->hi) {
            throw OverrideError(key, "override " + field + " = " + csv::format_general(v) + " outside " + bounds_text(*spec));
        }
        if (spec->integral && v != std::floor(v)) throw OverrideError(key, "override " + field + " must be an integer");
        const int iv = static_cast<int>(v);
        if (field == "playerank_acumulativo_media_percentil") s.playerank_acumulativo_media_percentil = v;
        else if (field == "momentum_rate") s.momentum_rate = v;
        else if (field == "minutes_played") s.minutes_played = iv;
        else if (field == "cartao_amarelo") s.cartao_amarelo = iv;
        else if (field == "player_age") s.player_age = iv;
        else if (field == "goals_scored") s.goals_scored = iv;
        else if (field == "assists") s.assists = iv;
        changed.push_back(field);
    }
    PriorityResult r = model.score(s);
    std::sort(changed.begin(), changed.end());
    changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
    r.overridden = std::move(changed);
    return r;
}

}  // namespace subaudit
