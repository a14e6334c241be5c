#include "subaudit/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "subaudit/csv.hpp"
#include "subaudit/error.hpp"

namespace subaudit {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::optional<double> to_double(std::string_view s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<long long> to_integer(std::string_view s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

// Normalizes identifiers such as "8325.0" (pandas float export) to "8325".
std::string normalize_id(std::string_view s) {
    std::string t = trim(s);
    if (const auto dot = t.find('.'); dot != std::string::npos && dot > 0 &&
                                      t.find_first_not_of('0', dot + 1) == std::string::npos &&
                                      to_integer(std::string_view(t).substr(0, dot))) {
        t.resize(dot);
    }
    return t;
}

std::size_t column_any(const csv::Table& t, std::initializer_list<std::string_view> names,
                       std::string_view table_name) {
    for (auto n : names) {
        if (auto idx = t.column(n)) return *idx;
    }
    return t.require(*names.begin(), table_name);
}

// Python literal (dict/list repr) to JSON text: single-quoted strings become
// double-quoted, True/False/None become true/false/null.
std::string python_literal_to_json(std::string_view src) {
    std::string out;
    out.reserve(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        const char c = src[i];
        if (c == '"' || c == '\'') {
            const char quote = c;
            out.push_back('"');
            for (++i; i < src.size() && src[i] != quote; ++i) {
                if (src[i] == '\\' && i + 1 < src.size()) {
                    if (src[i + 1] == '\'') {
                        out.push_back('\'');
                    } else {
                        out.push_back('\\');
                        out.push_back(src[i + 1]);
                    }
                    ++i;
                } else if (src[i] == '"') {
                    out += "\\\"";
                } else {
                    out.push_back(src[i]);
                }
            }
            out.push_back('"');
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            const std::string_view word = src.substr(i, j - i);
            if (word == "True") out += "true";
            else if (word == "False") out += "false";
            else if (word == "None") out += "null";
            else out += word;
            i = j - 1;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

nlohmann::json parse_loose_json(std::string_view text) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (!j.is_discarded()) return j;
    return nlohmann::json::parse(python_literal_to_json(text), nullptr, false);
}

std::string json_id(const nlohmann::json& v) {
    if (v.is_string()) return normalize_id(v.get<std::string>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return normalize_id(std::to_string(v.get<double>()));
    return {};
}

std::vector<int> parse_tags(std::string_view cell, const TagDictionary& dict, std::size_t row) {
    std::vector<int> tags;
    std::size_t i = 0;
    while (i < cell.size()) {
        const unsigned char c = static_cast<unsigned char>(cell[i]);
        if (c == '-' && i + 1 < cell.size() && std::isdigit(static_cast<unsigned char>(cell[i + 1]))) {
            throw ParseError(row, "negative tag code in '" + std::string(cell) + "'");
        }
        if (!std::isalnum(c) && c != '_') {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < cell.size() && (std::isalnum(static_cast<unsigned char>(cell[j])) || cell[j] == '_')) ++j;
        const std::string_view token = cell.substr(i, j - i);
        i = j;
        if (token == "id") continue;
        if (auto code = to_integer(token)) {
            tags.push_back(static_cast<int>(*code));
        } else if (auto known = dict.code_of(token)) {
            tags.push_back(*known);
        } else {
            throw ParseError(row, "unknown tag label '" + std::string(token) + "'");
        }
    }
    return tags;
}

}  // namespace

std::optional<MatchPeriod> parse_match_period(std::string_view text) {
    const std::string t = trim(text);
    if (t == "1H") return MatchPeriod::FirstHalf;
    if (t == "2H") return MatchPeriod::SecondHalf;
    if (t == "E1") return MatchPeriod::ExtraFirst;
    if (t == "E2") return MatchPeriod::ExtraSecond;
    if (t == "P") return MatchPeriod::Penalties;
    return std::nullopt;
}

std::string_view to_string(MatchPeriod period) {
    switch (period) {
        case MatchPeriod::FirstHalf: return "1H";
        case MatchPeriod::SecondHalf: return "2H";
        case MatchPeriod::ExtraFirst: return "E1";
        case MatchPeriod::ExtraSecond: return "E2";
        case MatchPeriod::Penalties: return "P";
    }
    return "?";
}

std::optional<Role> parse_role(std::string_view text) {
    const std::string t = lower(text);
    if (t.find("goalkeeper") != std::string::npos) return Role::Goalkeeper;
    if (t.find("defender") != std::string::npos) return Role::Defender;
    if (t.find("midfielder") != std::string::npos) return Role::Midfielder;
    if (t.find("forward") != std::string::npos) return Role::Forward;
    const std::string code = trim(t);
    if (code == "gk" || code == "gkp") return Role::Goalkeeper;
    if (code == "df" || code == "def") return Role::Defender;
    if (code == "md" || code == "mid") return Role::Midfielder;
    if (code == "fw" || code == "fwd") return Role::Forward;
    return std::nullopt;
}

std::string_view to_string(Role role) {
    switch (role) {
        case Role::Goalkeeper: return "Goalkeeper";
        case Role::Defender: return "Defender";
        case Role::Midfielder: return "Midfielder";
        case Role::Forward: return "Forward";
    }
    return "?";
}

std::optional<Date> parse_date(std::string_view text) {
    const std::string t = trim(text);
    if (t.size() < 10 || t[4] != '-' || t[7] != '-') return std::nullopt;
    const auto y = to_integer(std::string_view(t).substr(0, 4));
    const auto m = to_integer(std::string_view(t).substr(5, 2));
    const auto d = to_integer(std::string_view(t).substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    const Date date{std::chrono::year{static_cast<int>(*y)}, std::chrono::month{static_cast<unsigned>(*m)},
                    std::chrono::day{static_cast<unsigned>(*d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

bool RawEvent::has_tag(int code) const {
    return std::find(tags.begin(), tags.end(), code) != tags.end();
}

void TagDictionary::add(int code, std::string label) {
    by_label_[label] = code;
    by_code_[code] = std::move(label);
}

std::optional<int> TagDictionary::code_of(std::string_view label) const {
    if (auto it = by_label_.find(label); it != by_label_.end()) return it->second;
    return std::nullopt;
}

std::optional<std::string> TagDictionary::label_of(int code) const {
    if (auto it = by_code_.find(code); it != by_code_.end()) return it->second;
    return std::nullopt;
}

TagDictionary parse_tag_dictionary(std::istream& in) {
    const csv::Table t = csv::read(in);
    const std::size_t code_col = column_any(t, {"Tag", "tag", "id"}, "tags2name");
    const std::size_t label_col = column_any(t, {"Label", "label", "name"}, "tags2name");
    TagDictionary dict;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto code = to_integer(t.rows[r][code_col]);
        if (!code || *code < 0) throw ParseError(r + 1, "invalid tag code '" + t.rows[r][code_col] + "'");
        dict.add(static_cast<int>(*code), trim(t.rows[r][label_col]));
    }
    return dict;
}

std::vector<RawEvent> parse_event_log(std::istream& in, const TagDictionary& tags) {
    const csv::Table t = csv::read(in);
    const std::size_t c_match = t.require("matchId", "events");
    const std::size_t c_team = t.require("teamId", "events");
    const std::size_t c_player = t.require("playerId", "events");
    const std::size_t c_name = t.require("eventName", "events");
    const std::size_t c_sub = t.require("subEventName", "events");
    const std::size_t c_tags = t.require("tags", "events");
    const std::size_t c_sec = t.require("eventSec", "events");
    const std::size_t c_period = t.require("matchPeriod", "events");

    std::vector<RawEvent> events;
    events.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::size_t rownum = r + 1;
        RawEvent ev;
        ev.match_id = normalize_id(row[c_match]);
        ev.team_id = normalize_id(row[c_team]);
        ev.player_id = normalize_id(row[c_player]);
        ev.event_name = trim(row[c_name]);
        ev.sub_event_name = trim(row[c_sub]);
        if (ev.match_id.empty()) throw ParseError(rownum, "empty matchId");
        const auto sec = to_double(row[c_sec]);
        if (!sec) throw ParseError(rownum, "eventSec '" + row[c_sec] + "' is not a number");
        if (*sec < 0.0) throw ParseError(rownum, "eventSec must be non-negative");
        ev.event_sec = *sec;
        const auto period = parse_match_period(row[c_period]);
        if (!period) throw ParseError(rownum, "unknown matchPeriod '" + row[c_period] + "'");
        ev.period = *period;
        ev.tags = parse_tags(row[c_tags], tags, rownum);
        events.push_back(std::move(ev));
    }
    return events;
}

std::vector<MatchRecord> parse_match_table(std::istream& in) {
    const csv::Table t = csv::read(in);
    const std::size_t c_id = column_any(t, {"wyId", "matchId"}, "matches");
    const auto c_date = t.column("dateutc") ? t.column("dateutc") : t.column("date");
    const std::size_t c_teams = t.require("teamsData", "matches");

    std::vector<MatchRecord> matches;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        MatchRecord m;
        m.match_id = normalize_id(row[c_id]);
        if (c_date) m.date = parse_date(row[*c_date]);
        const nlohmann::json teams = parse_loose_json(row[c_teams]);
        if (teams.is_discarded() || !teams.is_object()) {
            throw ParseError(r + 1, "teamsData is not a JSON or Python object");
        }
        for (const auto& [key, team] : teams.items()) {
            const std::string team_id = team.contains("teamId") ? json_id(team["teamId"]) : normalize_id(key);
            m.teams.push_back(team_id);
            auto& lineup = m.lineups[team_id];
            if (!team.contains("formation") || !team["formation"].is_object()) continue;
            const auto& formation = team["formation"];
            if (formation.contains("lineup") && formation["lineup"].is_array()) {
                for (const auto& p : formation["lineup"]) {
                    lineup.push_back(p.is_object() ? json_id(p.value("playerId", nlohmann::json{})) : json_id(p));
                }
            }
            if (formation.contains("substitutions") && formation["substitutions"].is_array()) {
                for (const auto& s : formation["substitutions"]) {
                    if (!s.is_object()) continue;
                    Substitution sub;
                    sub.team_id = team_id;
                    sub.player_in = json_id(s.value("playerIn", nlohmann::json{}));
                    sub.player_out = json_id(s.value("playerOut", nlohmann::json{}));
                    const auto& minute = s.value("minute", nlohmann::json{});
                    if (!minute.is_number()) throw ParseError(r + 1, "substitution without numeric minute");
                    sub.minute = minute.get<int>();
                    if (sub.minute < 0 || sub.minute > 130) {
                        throw ParseError(r + 1, "substitution minute " + std::to_string(sub.minute) +
                                                    " outside [0, 130]");
                    }
                    m.substitutions.push_back(std::move(sub));
                }
            }
        }
        std::stable_sort(m.substitutions.begin(), m.substitutions.end(),
                         [](const Substitution& a, const Substitution& b) { return a.minute < b.minute; });
        matches.push_back(std::move(m));
    }
    return matches;
}

PlayerDirectory parse_player_table(std::istream& in) {
    const csv::Table t = csv::read(in);
    const std::size_t c_id = column_any(t, {"wyId", "playerId"}, "players");
    const std::size_t c_birth = t.require("birthDate", "players");
    const std::size_t c_role = t.require("role", "players");
    const auto c_name = t.column("shortName");

    PlayerDirectory players;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        PlayerRecord p;
        p.player_id = normalize_id(row[c_id]);
        p.birth_date = parse_date(row[c_birth]);
        const auto role = parse_role(row[c_role]);
        if (!role) throw ParseError(r + 1, "unknown role '" + row[c_role] + "'");
        p.role = *role;
        if (c_name) p.name = trim(row[*c_name]);
        players[p.player_id] = std::move(p);
    }
    return players;
}

double absolute_seconds(MatchPeriod period, double event_sec) {
    switch (period) {
        case MatchPeriod::FirstHalf: return event_sec;
        case MatchPeriod::SecondHalf: return event_sec + 2700.0;
        case MatchPeriod::ExtraFirst: return event_sec + 5400.0;
        case MatchPeriod::ExtraSecond: return event_sec + 6300.0;
        case MatchPeriod::Penalties: break;
    }
    throw DomainError("penalty-shootout events have no absolute match time");
}

double absolute_seconds(const RawEvent& event) { return absolute_seconds(event.period, event.event_sec); }

std::size_t slice_index(double abs_sec) {
    if (!(abs_sec >= 0.0)) throw DomainError("absolute seconds must be non-negative");
    return static_cast<std::size_t>(std::floor(abs_sec / kSliceSeconds));
}

double match_end_seconds(std::span<const RawEvent> events) {
    double nominal = 5400.0;
    double last = 0.0;
    for (const auto& ev : events) {
        if (ev.period == MatchPeriod::Penalties) continue;
        if (ev.period == MatchPeriod::ExtraFirst) nominal = std::max(nominal, 6300.0);
        if (ev.period == MatchPeriod::ExtraSecond) nominal = std::max(nominal, 7200.0);
        last = std::max(last, absolute_seconds(ev));
    }
    return std::max(nominal, last);
}

std::vector<OnFieldInterval> on_field_intervals(const MatchRecord& match, std::span<const RawEvent> events,
                                                const PlayerDirectory& players) {
    const double end = match_end_seconds(events);
    const auto is_goalkeeper = [&](const std::string& id) {
        const auto it = players.find(id);
        return it != players.end() && it->second.role == Role::Goalkeeper;
    };

    std::vector<OnFieldInterval> out;
    bool any_lineup = false;
    for (const auto& [team, lineup] : match.lineups) any_lineup = any_lineup || !lineup.empty();

    if (!any_lineup) {
        std::set<std::pair<std::string, std::string>> seen;
        for (const auto& ev : events) {
            if (ev.match_id != match.match_id || ev.player_id.empty() || ev.player_id == "0") continue;
            if (seen.emplace(ev.team_id, ev.player_id).second) {
                out.push_back({ev.player_id, match.match_id, ev.team_id, 0.0, end});
            }
        }
        return out;
    }

    struct Presence {
        std::string team;
        double start;
        std::optional<double> stop;
    };
    std::map<std::string, Presence> presence;
    std::vector<std::string> order;
    for (const auto& team : match.teams) {
        const auto it = match.lineups.find(team);
        if (it == match.lineups.end()) continue;
        for (const auto& pid : it->second) {
            if (presence.emplace(pid, Presence{team, 0.0, std::nullopt}).second) order.push_back(pid);
        }
    }

    for (const auto& sub : match.substitutions) {
        if (sub.minute < 0 || sub.minute > 130) {
            throw ValidationError("substitution minute " + std::to_string(sub.minute) + " outside [0, 130]");
        }
        const double sec = std::min(60.0 * sub.minute, end);
        auto out_it = presence.find(sub.player_out);
        if (out_it == presence.end() || out_it->second.stop) {
            throw ValidationError("substitution at minute " + std::to_string(sub.minute) +
                                  " references unknown player '" + sub.player_out + "' in match " +
                                  match.match_id);
        }
        if (presence.count(sub.player_in)) {
            throw ValidationError("substitute '" + sub.player_in + "' in match " + match.match_id +
                                  " is already on the field");
        }
        const std::string team = sub.team_id.empty() ? out_it->second.team : sub.team_id;
        if (!is_goalkeeper(sub.player_out)) out_it->second.stop = sec;
        presence.emplace(sub.player_in, Presence{team, sec, std::nullopt});
        order.push_back(sub.player_in);
    }

    for (const auto& pid : order) {
        const Presence& p = presence.at(pid);
        double start = p.start;
        double stop = p.stop.value_or(end);
        if (is_goalkeeper(pid) && start == 0.0) stop = end;
        if (start < stop) out.push_back({pid, match.match_id, p.team, start, stop});
    }
    return out;
}

InputTables load_input_directory(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw SchemaError("input directory '" + dir + "' does not exist");

    std::vector<fs::path> event_files;
    std::vector<fs::path> match_files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.path().extension() != ".csv") continue;
        if (name.rfind("events_", 0) == 0) event_files.push_back(entry.path());
        if (name.rfind("matches_", 0) == 0) match_files.push_back(entry.path());
    }
    std::sort(event_files.begin(), event_files.end());
    std::sort(match_files.begin(), match_files.end());
    if (event_files.empty()) throw SchemaError("no events_*.csv in '" + dir + "'");
    if (match_files.empty()) throw SchemaError("no matches_*.csv in '" + dir + "'");

    const auto open = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw SchemaError("cannot open '" + p.string() + "'");
        return in;
    };

    InputTables tables;
    const fs::path tag_path = fs::path(dir) / "tags2name.csv";
    if (fs::exists(tag_path)) {
        auto in = open(tag_path);
        tables.tags = parse_tag_dictionary(in);
    }
    const fs::path player_path = fs::path(dir) / "players.csv";
    if (!fs::exists(player_path)) throw SchemaError("no players.csv in '" + dir + "'");
    {
        auto in = open(player_path);
        tables.players = parse_player_table(in);
    }
    for (const auto& p : match_files) {
        auto in = open(p);
        auto ms = parse_match_table(in);
        std::move(ms.begin(), ms.end(), std::back_inserter(tables.matches));
    }
    for (const auto& p : event_files) {
        auto in = open(p);
        auto evs = parse_event_log(in, tables.tags);
        std::move(evs.begin(), evs.end(), std::back_inserter(tables.events));
    }
    return tables;
}

void dump_events_jsonl(std::ostream& out, std::span<const RawEvent> events) {
    for (const auto& ev : events) {
        if (ev.period == MatchPeriod::Penalties) continue;
        const double abs = absolute_seconds(ev);
        const std::size_t slice = slice_index(abs);
        nlohmann::ordered_json j;
        j["matchId"] = ev.match_id;
        j["teamId"] = ev.team_id;
        j["playerId"] = ev.player_id;
        j["eventName"] = ev.event_name;
        j["subEventName"] = ev.sub_event_name;
        j["tags"] = ev.tags;
        j["matchPeriod"] = to_string(ev.period);
        j["eventSec"] = ev.event_sec;
        j["absoluteSec"] = abs;
        j["slice"] = slice;
        j["Tempo_Partida"] = slice_label(slice);
        out << j.dump() << '\n';
    }
}

}  // namespace subaudit
