#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace subaudit {

// Wyscout tag codes used by the pipeline.
namespace tag {
inline constexpr int kGoal = 101;
inline constexpr int kAssist = 302;
inline constexpr int kInterception = 1401;
inline constexpr int kYellowCard = 1702;
inline constexpr int kSecondYellowCard = 1703;
inline constexpr int kAccurate = 1801;
inline constexpr int kNotAccurate = 1802;
inline constexpr int kDuelLost = 701;
inline constexpr int kDuelWon = 703;
}  // namespace tag

inline constexpr double kSliceSeconds = 300.0;

enum class MatchPeriod { FirstHalf, SecondHalf, ExtraFirst, ExtraSecond, Penalties };

std::optional<MatchPeriod> parse_match_period(std::string_view text);
std::string_view to_string(MatchPeriod period);

enum class Role { Goalkeeper, Defender, Midfielder, Forward };

std::optional<Role> parse_role(std::string_view text);
std::string_view to_string(Role role);

using Date = std::chrono::year_month_day;

/// Accepts "YYYY-MM-DD" optionally followed by a time part.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& date);

/// One on-pitch action.
struct RawEvent {
    std::string match_id;
    std::string team_id;
    std::string player_id;
    std::string event_name;
    std::string sub_event_name;
    std::vector<int> tags;
    double event_sec = 0.0;
    MatchPeriod period = MatchPeriod::FirstHalf;

    bool has_tag(int code) const;
};

struct Substitution {
    int minute = 0;
    std::string team_id;
    std::string player_out;
    std::string player_in;
};

struct MatchRecord {
    std::string match_id;
    std::optional<Date> date;
    std::vector<std::string> teams;
    /// team_id -> starting player ids
    std::map<std::string, std::vector<std::string>> lineups;
    std::vector<Substitution> substitutions;
};

struct PlayerRecord {
    std::string player_id;
    std::string name;
    std::optional<Date> birth_date;
    Role role = Role::Midfielder;
};

using PlayerDirectory = std::map<std::string, PlayerRecord>;

struct OnFieldInterval {
    std::string player_id;
    std::string match_id;
    std::string team_id;
    double start_sec = 0.0;
    double end_sec = 0.0;
};

/// Maps tag labels (tags2name.csv) to codes and back.
class TagDictionary {
public:
    TagDictionary() = default;
    void add(int code, std::string label);
    std::optional<int> code_of(std::string_view label) const;
    std::optional<std::string> label_of(int code) const;
    std::size_t size() const noexcept { return by_code_.size(); }

private:
    std::map<int, std::string> by_code_;
    std::map<std::string, int, std::less<>> by_label_;
};

TagDictionary parse_tag_dictionary(std::istream& in);

/// One RawEvent per data row, in row order. Penalty-shootout rows are kept
/// here and dropped by the pipeline. Tag cells may hold integer codes in any
/// bracket/dict notation or labels known to `tags`.
std::vector<RawEvent> parse_event_log(std::istream& in, const TagDictionary& tags);

/// Match table: `wyId` (or `matchId`), `dateutc` (or `date`), `teamsData`
/// holding the Wyscout teams object as JSON or a Python literal.
std::vector<MatchRecord> parse_match_table(std::istream& in);

/// Player table: `wyId` (or `playerId`), `birthDate`, `role`; `shortName` optional.
PlayerDirectory parse_player_table(std::istream& in);

/// Absolute seconds from kickoff using nominal period offsets
/// (1H +0, 2H +2700, E1 +5400, E2 +6300). Throws DomainError for shootouts.
double absolute_seconds(MatchPeriod period, double event_sec);
double absolute_seconds(const RawEvent& event);

/// Half-open 300 s windows: [300k, 300(k+1)).
std::size_t slice_index(double abs_sec);
/// Reporting label of a slice: the minute at which it ends.
inline int slice_label(std::size_t index) { return static_cast<int>(5 * (index + 1)); }

/// Nominal end of the match given the periods present, extended to the last event.
double match_end_seconds(std::span<const RawEvent> events);

/// Presence intervals per player. Starters begin at 0, substitutes at their
/// entry minute; goalkeepers are always on for the full match. Throws
/// ValidationError when a substitution names a player not on the field.
std::vector<OnFieldInterval> on_field_intervals(const MatchRecord& match, std::span<const RawEvent> events,
                                                const PlayerDirectory& players);

/// Everything read from an input directory in the public dataset layout.
struct InputTables {
    std::vector<RawEvent> events;
    std::vector<MatchRecord> matches;
    PlayerDirectory players;
    TagDictionary tags;
};

/// Reads events_*.csv, matches_*.csv, players.csv and (optionally) tags2name.csv.
InputTables load_input_directory(const std::string& dir);

/// One JSON object per line, shootout events dropped, with absolute seconds and slice.
void dump_events_jsonl(std::ostream& out, std::span<const RawEvent> events);

}  // namespace subaudit
