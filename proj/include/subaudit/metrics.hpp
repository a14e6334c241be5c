#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subaudit/ingest.hpp"
#include "subaudit/pass_network.hpp"

namespace subaudit {

/// Signed weight for events matching (event name, optional sub-event, optional tag).
/// An event's weight is the sum over every matching entry.
struct WeightRule {
    std::string event_name;      // "*" matches any event
    std::string sub_event_name;  // empty matches any
    std::optional<int> tag;
    double weight = 0.0;
};

enum class TechnicalNormalization { TeamVolume, None };

struct PipelineConfig {
    double alpha_net = 0.2;
    std::vector<WeightRule> technical_weights;
    TechnicalNormalization normalization = TechnicalNormalization::TeamVolume;
    CentralityOptions centrality;
    int default_age = 26;

    /// Throws DomainError for alpha_net outside [0,1] or non-finite weights.
    void validate() const;
};

/// The shipped weight table: rewards accurate passes, shots on target, won
/// duels, interceptions and clearances; penalizes inaccurate passes, lost
/// duels and fouls.
std::vector<WeightRule> default_technical_weights();
PipelineConfig default_pipeline_config();

double event_weight(const RawEvent& event, std::span<const WeightRule> weights);

/// Sum of |event_weight| over a team's events in one slice.
double team_volume(std::span<const RawEvent> team_events, const PipelineConfig& config);

/// Weighted action sum for one player in one slice, divided by the team
/// volume under TeamVolume normalization. Zero volume gives 0.
double technical_score(std::span<const RawEvent> player_events, double team_volume, const PipelineConfig& config);

/// (1 - alpha_net) * tech + alpha_net * net.
double raw_slice_score(double tech, double net, double alpha_net);

/// Fractional rank (average rank for ties) divided by group size.
std::vector<double> role_percentile(std::span<const double> values);

/// Element t is the mean of elements 0..t.
std::vector<double> cumulative_mean(std::span<const double> series);

/// First difference; the first element is 0.
std::vector<double> momentum(std::span<const double> series);

/// Whole years from birth to the given date.
int age_in_years(const Date& birth, const Date& on);

/// Stage-1 output: one row per player per slice, before harmonization.
struct SliceScore {
    std::string team_id;
    std::string player_id;
    std::size_t slice = 0;
    double technical = 0.0;
    double network = 0.0;
    double raw = 0.0;
};

/// Per-player, per-slice snapshot feeding inference.
struct PlayerSliceState {
    std::string match_id;
    std::string player_id;
    std::string team_id;
    int tempo_partida = 0;
    int minutes_played = 0;
    double score_tecnico_fatia = 0.0;
    double score_rede_fatia = 0.0;
    double playerank_fatia_raw = 0.0;
    double playerank_fatia_percentil = 0.0;
    double playerank_acumulativo_media_raw = 0.0;
    double playerank_acumulativo_media_percentil = 0.0;  // P_cum
    double momentum_rate = 0.0;
    int cartao_amarelo = 0;
    int player_age = 26;
    Role player_position = Role::Midfielder;
    int goals_scored = 0;
    int assists = 0;

    double p_cum() const noexcept { return playerank_acumulativo_media_percentil; }
};

/// Stage 1: technical, network and raw scores for every slice touched by a
/// player interval or by a player's events. `events` must be this match's
/// events in chronological order (shootout events are skipped).
std::vector<SliceScore> score_slices(std::span<const RawEvent> events, std::span<const OnFieldInterval> intervals,
                                     const PlayerDirectory& players, const PipelineConfig& config);

struct MatchDataset {
    std::vector<PlayerSliceState> states;
    std::vector<std::string> warnings;
};

/// Stages 2-3: off-field slices dropped (goalkeepers exempt), running
/// counters, role-aware percentiles, cumulative means and momentum.
MatchDataset enrich_and_harmonize(std::span<const SliceScore> scores, const MatchRecord& match,
                                  const PlayerDirectory& players, std::span<const RawEvent> events,
                                  std::span<const OnFieldInterval> intervals, const PipelineConfig& config);

/// Full pipeline for one match; `events` may contain other matches' events.
MatchDataset compute_match(const MatchRecord& match, std::span<const RawEvent> events,
                           const PlayerDirectory& players, const PipelineConfig& config);

/// Final dataset table with the column names of the reference pipeline.
void write_dataset_csv(std::ostream& out, std::span<const PlayerSliceState> states);
std::vector<PlayerSliceState> read_dataset_csv(std::istream& in);

}  // namespace subaudit
