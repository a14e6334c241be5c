#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "subaudit/fuzzy/rule.hpp"
#include "subaudit/fuzzy/variable.hpp"

namespace subaudit {

/// A complete fuzzy system plus the metadata the audit layer needs.
struct SystemConfig {
    std::vector<fuzzy::LinguisticVariable> variables;
    fuzzy::RuleBase rules;
    std::string output;
    /// variable name -> PlayerSliceState field feeding it (see priority.hpp)
    std::map<std::string, std::string> bindings;
    /// "Variable.Term" -> "published" | "decision"
    std::map<std::string, std::string> origins;
    std::map<std::string, std::string> rule_titles;
};

/// Builds a system from a variable document (JSON text) and a rule file.
/// Throws SchemaError / fuzzy::DslError.
SystemConfig load_system(std::string_view variables_json, std::string_view rules_text);
SystemConfig load_system_files(const std::string& variables_path, const std::string& rules_path);

/// The bundled substitution-priority system: ten inputs (four of them
/// pseudo-binary switches), the nine-term Modifier and 18 rules.
SystemConfig build_paper_system();

std::string_view bundled_variables_text();
std::string_view bundled_rules_text();

struct Violation {
    enum class Kind { CoverageGap, DanglingReference, ParameterOrder, OutputGap, OutsideUniverse, DuplicateName };
    Kind kind;
    std::string message;
};

std::string_view to_string(Violation::Kind kind);

/// Empty result means the system is valid. Checks input coverage (switch
/// variables exempt), rule references, MF parameter order, MF supports
/// inside their universe and output coverage of the whole universe.
std::vector<Violation> validate_system(const SystemConfig& config);

}  // namespace subaudit
