#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "archloom/model.hpp"

namespace archloom {

/// Canonical UTF-8 JSON: top-level keys meta, elements (sorted by id),
/// links (sorted by from, to, kind). Byte-stable for equal models.
std::string export_canonical(const ArchitectureModel& model);

struct ImportResult {
    std::optional<ArchitectureModel> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

/// Rebuilds a model from canonical JSON. Malformed input yields E102 with
/// the offending position, unknown kind names E103; structural violations
/// surface as the usual build_model codes.
ImportResult import_canonical(std::string_view text,
                              std::string_view stream_name = "<canonical>");

}  // namespace archloom
