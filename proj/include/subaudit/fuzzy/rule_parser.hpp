#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "subaudit/error.hpp"
#include "subaudit/fuzzy/rule.hpp"

namespace subaudit::fuzzy {

/// Syntax or resolution failure in a rule file; positions are 1-based.
class DslError : public Error {
public:
    DslError(std::size_t line, std::size_t column, const std::string& message);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Parses the rule language:
///
///   RULE <id>: IF <expr> THEN <var> IS <term> [WEIGHT <w>]
///   expr := expr OR expr | expr AND expr | ( expr ) | <var> IS <term>
///
/// AND binds tighter than OR, keywords are case-insensitive and `#` starts a
/// comment. Every variable and term must exist in `variables`.
RuleBase parse_rules(std::string_view text, std::span<const LinguisticVariable> variables);

}  // namespace subaudit::fuzzy
