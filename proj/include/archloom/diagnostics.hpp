#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace archloom {

enum class Severity { Error, Warning, Info };

std::string_view to_string(Severity severity);

/// Location of a token or declaration in a source file. Lines and columns
/// are 1-based. `length` is in bytes and never extends past the end of the
/// line the span starts on.
struct SourceSpan {
    std::string file;
    int line = 0;
    int column = 0;
    int length = 0;

    bool valid() const { return line >= 1 && column >= 1; }
    auto operator<=>(const SourceSpan&) const = default;
};

/// One coded finding. Codes are a letter class plus three digits; the letter
/// fixes the default severity: E and P are errors, W warnings, I infos.
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    std::string element;  // offending element id, empty when not element-bound
    std::optional<SourceSpan> span;
};

Severity severity_of_code(std::string_view code);

Diagnostic make_diagnostic(std::string code, std::string message,
                           std::string element = {},
                           std::optional<SourceSpan> span = {});

/// Renders `SEVERITY CODE file:line:col message` (the location segment is
/// omitted when no usable span is attached).
std::string render(const Diagnostic& diagnostic);

/// Orders by (severity, code, element id, span); used wherever diagnostic
/// output must be reproducible.
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Thrown by lookup-style operations (unknown element id, wrong subject
/// kind). Carries the diagnostic the caller should surface.
class ArchError : public std::runtime_error {
public:
    explicit ArchError(Diagnostic diagnostic);

    const Diagnostic& diagnostic() const { return diag_; }

private:
    Diagnostic diag_;
};

}  // namespace archloom
