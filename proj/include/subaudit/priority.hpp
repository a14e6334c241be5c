#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "subaudit/error.hpp"
#include "subaudit/fuzzy/engine.hpp"
#include "subaudit/ingest.hpp"
#include "subaudit/metrics.hpp"
#include "subaudit/rulebase.hpp"

namespace subaudit {

struct PriorityConfig {
    double alpha = 0.25;
    double critical_threshold = 90.0;

    /// Throws DomainError unless alpha > 0 and the threshold lies in [0, 100].
    void validate() const;
};

/// 100 * (1 - p_cum). Throws DomainError for p_cum outside [0, 1].
double baseline(double p_cum);

/// clip(baseline + modifier * alpha, 0, 100).
double final_priority(double baseline, double modifier, const PriorityConfig& config);

struct PriorityResult {
    std::string match_id;
    std::string player_id;
    std::string team_id;
    int tempo_partida = 0;
    double p_cum = 0.0;
    double baseline = 0.0;
    double modifier = 0.0;
    double p_final = 0.0;
    int rank = 0;       // within (match, slice)
    int team_rank = 0;  // within (match, slice, team)
    /// Crisp value fed to each fuzzy input variable, before universe clamping.
    std::map<std::string, double> inputs;
    fuzzy::ActivationTrace trace;
    /// Canonical names of fields changed by a what-if query.
    std::vector<std::string> overridden;
};

/// Fuzzy system + engine + priority settings. Immutable; safe to share
/// between threads.
class PriorityModel {
public:
    /// Throws ValidationError when a system input has no (known) state binding.
    explicit PriorityModel(SystemConfig system, PriorityConfig config = {},
                           const fuzzy::kernels::KernelTable& kernels = fuzzy::kernels::active());

    const SystemConfig& system() const noexcept { return system_; }
    const fuzzy::Engine& engine() const noexcept { return engine_; }
    const PriorityConfig& config() const noexcept { return config_; }

    /// Crisp input vector aligned with engine().variables().
    std::vector<double> crisp_inputs(const PlayerSliceState& state) const;

    /// Scores one state; rank fields are left 0. Throws DomainError naming
    /// the player when the state violates its type invariants.
    PriorityResult score(const PlayerSliceState& state) const;

private:
    SystemConfig system_;
    PriorityConfig config_;
    fuzzy::Engine engine_;
    std::vector<std::string> sources_;  // per engine variable; empty for the output
};

/// Value read from a state for a binding name (p_cum, momentum_rate,
/// minutes_played, cartao_amarelo, player_age, goals_scored, assists,
/// is_defender, is_midfielder, is_forward, is_goalkeeper).
std::optional<double> state_value(const PlayerSliceState& state, std::string_view source);

/// Scores and ranks one slice: descending p_final, ties by lower p_cum, then
/// player id. Goalkeepers are skipped.
std::vector<PriorityResult> audit_slice(std::span<const PlayerSliceState> states, const PriorityModel& model);

enum class LatencyStatus { Resolved, UnresolvedCritical, NotCritical };
std::string_view to_string(LatencyStatus status);

struct LatencyEntry {
    std::string player_id;
    std::string team_id;
    std::optional<int> first_critical_minute;
    std::optional<int> substitution_minute;
    std::optional<int> latency_minutes;
    LatencyStatus status = LatencyStatus::NotCritical;
};

/// A substitute's priority after entering.
struct PostEntryTrack {
    std::string player_id;
    std::string team_id;
    std::string replaced_player_id;
    int entry_minute = 0;
    std::vector<std::pair<int, double>> p_final;  // (slice label, p_final)
    /// At least two points and strictly decreasing.
    bool high_impact = false;
};

struct SliceRanking {
    int tempo_partida = 0;
    std::vector<PriorityResult> results;
};

struct MatchAudit {
    std::string match_id;
    std::vector<SliceRanking> slices;
    std::vector<Substitution> substitutions;
    std::vector<LatencyEntry> latency;
    std::vector<PostEntryTrack> post_entry;

    const PriorityResult* find(std::string_view player_id, int tempo_partida) const;
};

/// Sets rank/team_rank of `result` as if it replaced its own entry in `slice`.
void rank_against(PriorityResult& result, const SliceRanking& slice);

MatchAudit audit_match(std::span<const PlayerSliceState> states, const MatchRecord& match, const PriorityModel& model);

/// first critical = earliest slice label with p_final above the threshold;
/// latency = max(0, substitution minute - first critical) when both exist.
std::vector<LatencyEntry> decision_latency(const MatchAudit& audit, const PriorityConfig& config);

using OverrideValue = std::variant<double, std::string>;

/// Rejected what-if override; field() is the key as given by the caller.
class OverrideError : public DomainError {
public:
    OverrideError(std::string field, const std::string& what) : DomainError(what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Re-scores `state` with some fields replaced. Accepted keys are the
/// dataset column names or the short aliases p_cum, momentum, min_played,
/// card_y, age, goals, position. Throws DomainError naming the field and
/// its bounds (OverrideError) for out-of-range values or unknown fields.
PriorityResult what_if(const PlayerSliceState& state, const std::map<std::string, OverrideValue>& overrides,
                       const PriorityModel& model);

}  // namespace subaudit
