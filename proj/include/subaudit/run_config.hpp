#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "subaudit/metrics.hpp"
#include "subaudit/priority.hpp"

namespace subaudit {

/// Every tunable parameter of a run. Written next to the outputs so a run
/// can be reproduced from its output directory alone.
struct RunConfig {
    PipelineConfig pipeline = default_pipeline_config();
    PriorityConfig priority;
    /// Rule-base files; both empty means the bundled system.
    std::string variables_path;
    std::string rules_path;
    /// "auto", "scalar" or "avx2".
    std::string kernels = "auto";

    void validate() const;
    SystemConfig load_system() const;
    const fuzzy::kernels::KernelTable& kernel_table() const;
};

/// Missing keys keep their defaults. Throws SchemaError for unknown keys or
/// wrong types, DomainError for invalid values.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::ordered_json to_json(const RunConfig& config);

}  // namespace subaudit
