#pragma once

#include <iosfwd>
#include <span>

#include <json.hpp>

#include "subaudit/priority.hpp"

namespace subaudit {

using ojson = nlohmann::ordered_json;

/// Field names follow schemas/priority_result.schema.json. Trace entries
/// carry the rule title and text when `system` knows them.
ojson to_json(const PriorityResult& result, const SystemConfig* system = nullptr);
ojson to_json(const LatencyEntry& entry);
ojson to_json(const PostEntryTrack& track);
ojson to_json(const Substitution& sub);

/// schemas/match_audit.schema.json
ojson to_json(const MatchAudit& audit, const PriorityConfig& config, const SystemConfig* system = nullptr);

/// schemas/timeline.schema.json: slices with ranked entries, no traces.
ojson timeline_json(const MatchAudit& audit, const PriorityConfig& config);

/// Full series for one player: every slice's result with trace.
ojson player_series_json(const MatchAudit& audit, std::string_view player_id, const SystemConfig* system = nullptr);

/// One row per (slice, player): matchId, Tempo_Partida, rank, team_rank,
/// playerId, teamId, p_cum, baseline, modifier, p_final, critical.
void write_timeline_csv(std::ostream& out, std::span<const MatchAudit> audits, const PriorityConfig& config);

/// matchId, playerId, teamId, first_critical_minute, substitution_minute,
/// latency_minutes, status. Missing values are empty cells.
void write_latency_csv(std::ostream& out, std::span<const MatchAudit> audits);

/// Long-format curve table for plotting: one row per (player, slice) with
/// the threshold and substitution markers (exit / entry minute).
void write_plot_csv(std::ostream& out, std::span<const MatchAudit> audits, const PriorityConfig& config);

}  // namespace subaudit
