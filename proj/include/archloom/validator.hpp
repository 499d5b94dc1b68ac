#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "archloom/model.hpp"

namespace archloom {

/// Severity overrides for the rule catalog. Error-class codes can only be
/// promoted (a no-op); demoting or suppressing them is rejected when the
/// config is parsed.
struct RuleConfig {
    std::set<std::string> promote;
    std::set<std::string> demote;
    std::set<std::string> suppress;

    bool empty() const {
        return promote.empty() && demote.empty() && suppress.empty();
    }
};

struct ConfigResult {
    std::optional<RuleConfig> config;
    std::vector<Diagnostic> diagnostics;  // E104 per bad line

    bool ok() const { return config.has_value(); }
};

/// Config file format: one directive per line, `promote CODE`,
/// `demote CODE` or `suppress CODE`; blank lines and # comments ignored.
ConfigResult parse_rule_config(std::string_view text,
                               std::string_view file = "<config>");

bool is_known_code(std::string_view code);

/// Runs the whole rule catalog (W101..W109, I201, I202, E110), applies the
/// config, and returns diagnostics sorted by (severity, code, element id).
/// Never fails; an empty list means a seamless model.
std::vector<Diagnostic> validate(const ArchitectureModel& model,
                                 const RuleConfig& config = {});

/// Re-severities diagnostics per config and drops suppressed codes.
std::vector<Diagnostic> apply_config(std::vector<Diagnostic> diagnostics,
                                     const RuleConfig& config);

/// 0 clean, 1 warnings only, 2 any error — after config is applied.
int exit_status(const std::vector<Diagnostic>& diagnostics,
                const RuleConfig& config = {});

}  // namespace archloom
