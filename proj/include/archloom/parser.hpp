#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "archloom/model.hpp"

namespace archloom {

/// One input, either read from disk or supplied in memory. `name` is what
/// diagnostics and locate() report as the file.
struct SourceText {
    std::string name;
    std::string text;
};

struct ParseResult {
    std::optional<ArchitectureModel> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

/// Raw output of pass 1: declarations and links collected across all files,
/// before reference resolution. Useful for model surgery in tests and for
/// tools that post-process declarations.
struct Declarations {
    std::vector<ArchElement> elements;
    std::vector<Link> links;
    std::vector<Diagnostic> diagnostics;
};

Declarations parse_declarations(const std::vector<SourceText>& files);

/// Pass 1 collects declarations across all files (forward references across
/// files are fine in any order); pass 2 resolves them through build_model.
/// The model is present iff no error diagnostic was produced.
ParseResult parse(const std::vector<SourceText>& files);

/// Span of the element's declaring keyword. Throws ArchError E101 when the
/// id is unknown or no model was built.
SourceSpan locate(const ParseResult& result, std::string_view id);

}  // namespace archloom
