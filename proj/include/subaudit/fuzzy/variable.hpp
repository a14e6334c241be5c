#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subaudit/fuzzy/membership.hpp"

namespace subaudit::fuzzy {

struct Term {
    std::string name;
    MembershipFunction mf;
    bool operator==(const Term&) const = default;
};

/// Input variables partition their universe; switch variables are
/// pseudo-binary flags whose single term deliberately leaves gaps.
enum class VariableKind { Input, Switch, Output };

struct LinguisticVariable {
    std::string name;
    Universe universe;
    std::vector<Term> terms;
    VariableKind kind = VariableKind::Input;

    const Term* find(std::string_view term) const;
    std::optional<std::size_t> index_of(std::string_view term) const;
    bool operator==(const LinguisticVariable&) const = default;
};

std::string_view to_string(VariableKind kind);
std::optional<VariableKind> parse_variable_kind(std::string_view text);

}  // namespace subaudit::fuzzy
