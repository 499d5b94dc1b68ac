#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "archloom/model.hpp"

namespace archloom {

enum class ReportKind {
    DialogReport,
    ViewfnModules,
    ModuleMethods,
    TraceMatrix,
    FullBook,
};

enum class DocFormat { Markdown, Html, Csv };

std::string_view to_string(ReportKind kind);
std::string_view to_string(DocFormat format);
std::optional<ReportKind> report_kind_from(std::string_view name);
std::optional<DocFormat> doc_format_from(std::string_view name);

/// dialog-report, viewfn-modules and module-methods need a subject of the
/// matching kind; trace-matrix and full-book take none. CSV is only valid
/// for the trace matrix.
struct ReportSpec {
    ReportKind kind = ReportKind::FullBook;
    std::string subject;
    DocFormat format = DocFormat::Markdown;
};

/// Renders one document. Throws ArchError: E101 unknown subject, E105
/// wrong subject kind, E106 format not valid for the report kind.
std::string render(const ArchitectureModel& model, const ReportSpec& spec);

/// Canonical DSL text for the model: two-space indent, declaration order
/// when known (id order otherwise), minimal quoting. Re-parsing the output
/// reproduces the model structurally.
std::string emit_dsl(const ArchitectureModel& model);

/// Canonical DSL for the subset of top-level declarations whose src.file
/// matches `file`; what `fmt` uses to rewrite one input among many.
std::string emit_dsl_for_file(const ArchitectureModel& model,
                              std::string_view file);

}  // namespace archloom
