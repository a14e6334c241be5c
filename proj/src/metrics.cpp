#include "subaudit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "subaudit/csv.hpp"
#include "subaudit/error.hpp"

namespace subaudit {

void PipelineConfig::validate() const {
    if (!(alpha_net >= 0.0 && alpha_net <= 1.0)) throw DomainError("alpha_net must lie in [0, 1]");
    for (const auto& w : technical_weights) {
        if (!std::isfinite(w.weight)) throw DomainError("technical weight for '" + w.event_name + "' is not finite");
    }
    if (!(centrality.teleport > 0.0)) throw DomainError("centrality teleport must be positive");
}

std::vector<WeightRule> default_technical_weights() {
    return {
        {"Pass", "", tag::kAccurate, 1.0},
        {"Pass", "", tag::kNotAccurate, -1.0},
        {"Shot", "", tag::kAccurate, 2.0},
        {"Duel", "", tag::kDuelWon, 1.0},
        {"Duel", "", tag::kDuelLost, -1.0},
        {"*", "", tag::kInterception, 1.0},
        {"Others on the ball", "Clearance", std::nullopt, 0.5},
        {"Foul", "", std::nullopt, -1.0},
    };
}

PipelineConfig default_pipeline_config() {
    PipelineConfig c;
    c.technical_weights = default_technical_weights();
    return c;
}

double event_weight(const RawEvent& event, std::span<const WeightRule> weights) {
    double w = 0.0;
    for (const auto& rule : weights) {
        if (rule.event_name != "*" && rule.event_name != event.event_name) continue;
        if (!rule.sub_event_name.empty() && rule.sub_event_name != event.sub_event_name) continue;
        if (rule.tag && !event.has_tag(*rule.tag)) continue;
        w += rule.weight;
    }
    return w;
}

double team_volume(std::span<const RawEvent> team_events, const PipelineConfig& config) {
    double v = 0.0;
    for (const auto& ev : team_events) v += std::abs(event_weight(ev, config.technical_weights));
    return v;
}

double technical_score(std::span<const RawEvent> player_events, double volume, const PipelineConfig& config) {
    double sum = 0.0;
    for (const auto& ev : player_events) sum += event_weight(ev, config.technical_weights);
    if (config.normalization == TechnicalNormalization::None) return sum;
    return volume > 0.0 ? sum / volume : 0.0;
}

double raw_slice_score(double tech, double net, double alpha_net) {
    return (1.0 - alpha_net) * tech + alpha_net * net;
}

std::vector<double> role_percentile(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> pct(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // ranks i+1..j+1 share their average
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) pct[order[k]] = avg_rank / static_cast<double>(n);
        i = j + 1;
    }
    return pct;
}

std::vector<double> cumulative_mean(std::span<const double> series) {
    std::vector<double> out(series.size());
    double sum = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        sum += series[t];
        out[t] = sum / static_cast<double>(t + 1);
    }
    return out;
}

std::vector<double> momentum(std::span<const double> series) {
    std::vector<double> out(series.size(), 0.0);
    for (std::size_t t = 1; t < series.size(); ++t) out[t] = series[t] - series[t - 1];
    return out;
}

int age_in_years(const Date& birth, const Date& on) {
    int years = static_cast<int>(on.year()) - static_cast<int>(birth.year());
    if (on.month() < birth.month() || (on.month() == birth.month() && on.day() < birth.day())) --years;
    return years;
}

namespace {

bool overlaps(std::size_t slice, double start, double end) {
    const double lo = kSliceSeconds * static_cast<double>(slice);
    return lo < end && lo + kSliceSeconds > start;
}

bool is_yellow(const RawEvent& ev) { return ev.has_tag(tag::kYellowCard) || ev.has_tag(tag::kSecondYellowCard); }

bool is_goal(const RawEvent& ev) {
    return ev.event_name == "Shot" && (ev.sub_event_name == "Goal" || ev.has_tag(tag::kGoal));
}

struct TimedEvent {
    const RawEvent* event;
    std::size_t slice;
};

std::vector<TimedEvent> timed(std::span<const RawEvent> events) {
    std::vector<TimedEvent> out;
    out.reserve(events.size());
    for (const auto& ev : events) {
        if (ev.period == MatchPeriod::Penalties) continue;
        out.push_back({&ev, slice_index(absolute_seconds(ev))});
    }
    return out;
}

}  // namespace

std::vector<SliceScore> score_slices(std::span<const RawEvent> events, std::span<const OnFieldInterval> intervals,
                                     const PlayerDirectory& /*players*/, const PipelineConfig& config) {
    const auto stream = timed(events);
    const double end = match_end_seconds(events);
    std::size_t slice_count = static_cast<std::size_t>(std::ceil(end / kSliceSeconds));
    for (const auto& te : stream) slice_count = std::max(slice_count, te.slice + 1);

    using TeamSlice = std::pair<std::string, std::size_t>;
    std::map<TeamSlice, std::vector<RawEvent>> team_events;
    std::map<std::pair<std::string, std::size_t>, std::vector<RawEvent>> player_events;
    std::map<TeamSlice, PassGraph> graphs;

    for (std::size_t i = 0; i < stream.size(); ++i) {
        const RawEvent& ev = *stream[i].event;
        const std::size_t s = stream[i].slice;
        team_events[{ev.team_id, s}].push_back(ev);
        player_events[{ev.player_id, s}].push_back(ev);
        if (ev.event_name != "Pass" || !ev.has_tag(tag::kAccurate) || i + 1 >= stream.size()) continue;
        const RawEvent& next = *stream[i + 1].event;
        if (next.period != ev.period || next.team_id != ev.team_id) continue;
        if (next.player_id.empty() || next.player_id == "0" || next.player_id == ev.player_id) continue;
        graphs[{ev.team_id, s}].add_pass(ev.player_id, next.player_id);
    }

    // Players on the field join their team's graph even without passes.
    for (const auto& iv : intervals) {
        for (std::size_t s = 0; s < slice_count; ++s) {
            if (!overlaps(s, iv.start_sec, iv.end_sec)) continue;
            auto it = graphs.find({iv.team_id, s});
            if (it != graphs.end()) it->second.add_player(iv.player_id);
        }
    }

    std::map<TeamSlice, std::map<std::string, double>> centrality;
    std::map<TeamSlice, double> volume;
    for (const auto& [key, graph] : graphs) centrality[key] = network_score(graph, config.centrality);
    for (const auto& [key, evs] : team_events) volume[key] = team_volume(evs, config);

    std::vector<SliceScore> scores;
    for (const auto& iv : intervals) {
        std::set<std::size_t> slices;
        for (std::size_t s = 0; s < slice_count; ++s) {
            if (overlaps(s, iv.start_sec, iv.end_sec) || player_events.count({iv.player_id, s})) slices.insert(s);
        }
        for (const std::size_t s : slices) {
            SliceScore sc;
            sc.team_id = iv.team_id;
            sc.player_id = iv.player_id;
            sc.slice = s;
            const auto pe = player_events.find({iv.player_id, s});
            const auto vol = volume.find({iv.team_id, s});
            if (pe != player_events.end()) {
                sc.technical = technical_score(pe->second, vol == volume.end() ? 0.0 : vol->second, config);
            }
            if (const auto c = centrality.find({iv.team_id, s}); c != centrality.end()) {
                if (const auto p = c->second.find(iv.player_id); p != c->second.end()) sc.network = p->second;
            }
            sc.raw = raw_slice_score(sc.technical, sc.network, config.alpha_net);
            scores.push_back(std::move(sc));
        }
    }
    return scores;
}

MatchDataset enrich_and_harmonize(std::span<const SliceScore> scores, const MatchRecord& match,
                                  const PlayerDirectory& players, std::span<const RawEvent> events,
                                  std::span<const OnFieldInterval> intervals, const PipelineConfig& config) {
    MatchDataset out;
    const auto stream = timed(events);

    for (const auto& iv : intervals) {
        const auto pit = players.find(iv.player_id);
        Role role = Role::Midfielder;
        int age = config.default_age;
        if (pit == players.end()) {
            out.warnings.push_back("player " + iv.player_id + " missing from player table; role Midfielder, age " +
                                   std::to_string(config.default_age));
        } else {
            role = pit->second.role;
            if (pit->second.birth_date && match.date) {
                age = std::clamp(age_in_years(*pit->second.birth_date, *match.date), 15, 45);
            } else {
                out.warnings.push_back("player " + iv.player_id + " has no birth date (or match " + match.match_id +
                                       " no date); age set to " + std::to_string(config.default_age));
            }
        }
        const bool keeper = role == Role::Goalkeeper;

        std::vector<const SliceScore*> mine;
        for (const auto& sc : scores) {
            if (sc.player_id != iv.player_id) continue;
            if (!keeper && !overlaps(sc.slice, iv.start_sec, iv.end_sec)) continue;
            mine.push_back(&sc);
        }
        std::sort(mine.begin(), mine.end(), [](auto* a, auto* b) { return a->slice < b->slice; });

        std::vector<double> raws;
        raws.reserve(mine.size());
        for (auto* sc : mine) raws.push_back(sc->raw);
        const auto cum = cumulative_mean(raws);

        for (std::size_t t = 0; t < mine.size(); ++t) {
            const SliceScore& sc = *mine[t];
            PlayerSliceState st;
            st.match_id = match.match_id;
            st.player_id = iv.player_id;
            st.team_id = iv.team_id;
            st.tempo_partida = slice_label(sc.slice);
            st.minutes_played = static_cast<int>(5 * (t + 1));
            st.score_tecnico_fatia = sc.technical;
            st.score_rede_fatia = sc.network;
            st.playerank_fatia_raw = sc.raw;
            st.playerank_acumulativo_media_raw = cum[t];
            st.player_age = age;
            st.player_position = role;
            for (const auto& te : stream) {
                if (te.slice > sc.slice || te.event->player_id != iv.player_id) continue;
                if (is_yellow(*te.event)) st.cartao_amarelo = 1;
                if (is_goal(*te.event)) ++st.goals_scored;
                if (te.event->has_tag(tag::kAssist)) ++st.assists;
            }
            out.states.push_back(std::move(st));
        }
    }

    // Role-aware percentiles over every retained row of the match.
    std::map<Role, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < out.states.size(); ++i) groups[out.states[i].player_position].push_back(i);
    for (const auto& [role, idx] : groups) {
        std::vector<double> slice_raw, cum_raw;
        for (auto i : idx) {
            slice_raw.push_back(out.states[i].playerank_fatia_raw);
            cum_raw.push_back(out.states[i].playerank_acumulativo_media_raw);
        }
        const auto p_slice = role_percentile(slice_raw);
        const auto p_cum = role_percentile(cum_raw);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            out.states[idx[k]].playerank_fatia_percentil = p_slice[k];
            out.states[idx[k]].playerank_acumulativo_media_percentil = p_cum[k];
        }
    }

    // Rows of one player are contiguous and slice-ordered.
    for (std::size_t i = 0; i < out.states.size();) {
        std::size_t j = i;
        while (j < out.states.size() && out.states[j].player_id == out.states[i].player_id) ++j;
        std::vector<double> series;
        for (std::size_t k = i; k < j; ++k) series.push_back(out.states[k].p_cum());
        const auto mom = momentum(series);
        for (std::size_t k = i; k < j; ++k) out.states[k].momentum_rate = mom[k - i];
        i = j;
    }
    return out;
}

MatchDataset compute_match(const MatchRecord& match, std::span<const RawEvent> events,
                           const PlayerDirectory& players, const PipelineConfig& config) {
    config.validate();
    std::vector<RawEvent> own;
    for (const auto& ev : events) {
        if (ev.match_id == match.match_id && ev.period != MatchPeriod::Penalties) own.push_back(ev);
    }
    const auto intervals = on_field_intervals(match, own, players);
    const auto scores = score_slices(own, intervals, players, config);
    return enrich_and_harmonize(scores, match, players, own, intervals, config);
}

namespace {

const std::vector<std::string>& dataset_columns() {
    static const std::vector<std::string> cols = {
        "matchId",
        "playerId",
        "teamId",
        "Tempo_Partida",
        "minutes_played",
        "playerank_fatia_raw",
        "playerank_acumulativo_media_raw",
        "score_tecnico_fatia",
        "score_rede_fatia",
        "playerank_fatia_percentil",
        "playerank_acumulativo_media_percentil",
        "momentum_rate",
        "cartao_amarelo",
        "player_age",
        "player_position",
        "goals_scored",
        "assists",
        "position",
    };
    return cols;
}

}  // namespace

void write_dataset_csv(std::ostream& out, std::span<const PlayerSliceState> states) {
    csv::write_row(out, dataset_columns());
    const auto g = [](double v) { return csv::format_general(v, 9); };
    for (const auto& s : states) {
        const std::string role(to_string(s.player_position));
        csv::write_row(out, {s.match_id, s.player_id, s.team_id, std::to_string(s.tempo_partida),
                             std::to_string(s.minutes_played), g(s.playerank_fatia_raw),
                             g(s.playerank_acumulativo_media_raw), g(s.score_tecnico_fatia), g(s.score_rede_fatia),
                             g(s.playerank_fatia_percentil), g(s.playerank_acumulativo_media_percentil),
                             g(s.momentum_rate), std::to_string(s.cartao_amarelo), std::to_string(s.player_age), role,
                             std::to_string(s.goals_scored), std::to_string(s.assists), role});
    }
}

std::vector<PlayerSliceState> read_dataset_csv(std::istream& in) {
    const csv::Table t = csv::read(in);
    std::vector<std::size_t> col;
    for (const auto& name : dataset_columns()) col.push_back(t.require(name, "dataset"));

    std::vector<PlayerSliceState> states;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const auto num = [&](std::size_t c) {
            const std::string& cell = row[col[c]];
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != cell.size()) {
                throw ParseError(r + 1, "column '" + dataset_columns()[c] + "' value '" + cell + "' is not a number");
            }
            return v;
        };
        const auto integer = [&](std::size_t c) { return static_cast<int>(std::lround(num(c))); };
        PlayerSliceState s;
        s.match_id = row[col[0]];
        s.player_id = row[col[1]];
        s.team_id = row[col[2]];
        s.tempo_partida = integer(3);
        s.minutes_played = integer(4);
        s.playerank_fatia_raw = num(5);
        s.playerank_acumulativo_media_raw = num(6);
        s.score_tecnico_fatia = num(7);
        s.score_rede_fatia = num(8);
        s.playerank_fatia_percentil = num(9);
        s.playerank_acumulativo_media_percentil = num(10);
        s.momentum_rate = num(11);
        s.cartao_amarelo = integer(12);
        s.player_age = integer(13);
        const auto role = parse_role(row[col[14]]);
        if (!role) throw ParseError(r + 1, "unknown player_position '" + row[col[14]] + "'");
        s.player_position = *role;
        s.goals_scored = integer(15);
        s.assists = integer(16);
        states.push_back(std::move(s));
    }
    return states;
}

}  // namespace subaudit
