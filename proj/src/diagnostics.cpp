#include "archloom/diagnostics.hpp"

#include <algorithm>
#include <tuple>

namespace archloom {

std::string_view to_string(Severity severity) {
    switch (severity) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Info: return "info";
    }
    return "error";
}

Severity severity_of_code(std::string_view code) {
    if (code.empty()) return Severity::Error;
    switch (code.front()) {
        case 'W': return Severity::Warning;
        case 'I': return Severity::Info;
        default: return Severity::Error;  // E and P classes
    }
}

Diagnostic make_diagnostic(std::string code, std::string message,
                           std::string element,
                           std::optional<SourceSpan> span) {
    Diagnostic diagnostic;
    diagnostic.severity = severity_of_code(code);
    diagnostic.code = std::move(code);
    diagnostic.message = std::move(message);
    diagnostic.element = std::move(element);
    diagnostic.span = std::move(span);
    return diagnostic;
}

std::string render(const Diagnostic& diagnostic) {
    std::string out;
    out += to_string(diagnostic.severity);
    out += ' ';
    out += diagnostic.code;
    if (diagnostic.span && diagnostic.span->valid()) {
        out += ' ';
        out += diagnostic.span->file;
        out += ':';
        out += std::to_string(diagnostic.span->line);
        out += ':';
        out += std::to_string(diagnostic.span->column);
    }
    out += ' ';
    out += diagnostic.message;
    return out;
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
    auto key = [](const Diagnostic& d) {
        return std::tuple<int, const std::string&, const std::string&, int, int>(
            static_cast<int>(d.severity), d.code, d.element,
            d.span ? d.span->line : 0, d.span ? d.span->column : 0);
    };
    std::stable_sort(diagnostics.begin(), diagnostics.end(),
                     [&](const Diagnostic& a, const Diagnostic& b) {
                         return key(a) < key(b);
                     });
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) {
                           return d.severity == Severity::Error;
                       });
}

ArchError::ArchError(Diagnostic diagnostic)
    : std::runtime_error(render(diagnostic)), diag_(std::move(diagnostic)) {}

}  // namespace archloom
