#include "archloom/validator.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace archloom {

namespace {

constexpr std::array<std::string_view, 27> kKnownCodes = {
    "E001", "E002", "E003", "E004", "E005",
    "E101", "E102", "E103", "E104", "E105", "E106", "E110",
    "P001", "P002", "P003",
    "W101", "W102", "W103", "W104", "W105", "W106", "W107", "W108", "W109",
    "I105", "I201", "I202"};

}  // namespace

bool is_known_code(std::string_view code) {
    return std::find(kKnownCodes.begin(), kKnownCodes.end(), code) !=
           kKnownCodes.end();
}

ConfigResult parse_rule_config(std::string_view text, std::string_view file) {
    RuleConfig config;
    std::vector<Diagnostic> diagnostics;
    int line_number = 0;
    std::istringstream stream{std::string(text)};
    std::string line;
    auto bad = [&](std::string message) {
        SourceSpan span;
        span.file = std::string(file);
        span.line = line_number;
        span.column = 1;
        span.length = static_cast<int>(line.size());
        diagnostics.push_back(
            make_diagnostic("E104", std::move(message), {}, span));
    };
    while (std::getline(stream, line)) {
        ++line_number;
        std::string stripped = line.substr(0, line.find('#'));
        std::istringstream fields(stripped);
        std::string directive, code, extra;
        if (!(fields >> directive)) continue;  // blank or comment-only
        if (!(fields >> code) || (fields >> extra)) {
            bad("expected 'promote|demote|suppress CODE'");
            continue;
        }
        if (!is_known_code(code)) {
            bad("unknown diagnostic code '" + code + "'");
            continue;
        }
        std::set<std::string>* target = nullptr;
        if (directive == "promote") {
            target = &config.promote;
        } else if (directive == "demote") {
            target = &config.demote;
        } else if (directive == "suppress") {
            target = &config.suppress;
        } else {
            bad("unknown directive '" + directive + "'");
            continue;
        }
        if (target != &config.promote &&
            severity_of_code(code) == Severity::Error) {
            bad("error code '" + code + "' cannot be " + directive + "d");
            continue;
        }
        bool elsewhere = (target != &config.promote && config.promote.count(code)) ||
                         (target != &config.demote && config.demote.count(code)) ||
                         (target != &config.suppress && config.suppress.count(code));
        if (elsewhere) {
            bad("code '" + code + "' already configured by another directive");
            continue;
        }
        target->insert(code);
    }
    if (!diagnostics.empty()) {
        return {std::nullopt, std::move(diagnostics)};
    }
    return {std::move(config), {}};
}

std::vector<Diagnostic> apply_config(std::vector<Diagnostic> diagnostics,
                                     const RuleConfig& config) {
    std::vector<Diagnostic> out;
    out.reserve(diagnostics.size());
    for (Diagnostic& diagnostic : diagnostics) {
        if (config.suppress.count(diagnostic.code)) continue;
        if (config.promote.count(diagnostic.code)) {
            diagnostic.severity = Severity::Error;
        } else if (config.demote.count(diagnostic.code)) {
            diagnostic.severity = Severity::Info;
        }
        out.push_back(std::move(diagnostic));
    }
    return out;
}

int exit_status(const std::vector<Diagnostic>& diagnostics,
                const RuleConfig& config) {
    int status = 0;
    for (const Diagnostic& d : apply_config(diagnostics, config)) {
        if (d.severity == Severity::Error) return 2;
        if (d.severity == Severity::Warning) status = std::max(status, 1);
    }
    return status;
}

namespace {

/// Link-derived indexes the rules share. All lookups are by element id.
struct RuleIndex {
    std::unordered_map<std::string_view, std::vector<const Link*>> covers_out;
    std::unordered_map<std::string_view, std::vector<const Link*>> covers_in;
    std::unordered_map<std::string_view, int> realized_by;   // Realizes in-degree
    std::unordered_map<std::string_view, int> realizes_out;  // Realizes out-degree
    std::unordered_map<std::string_view, int> implements_out;

    explicit RuleIndex(const ArchitectureModel& model) {
        for (const Link& link : model.links()) {
            switch (link.kind) {
                case LinkKind::Covers:
                    covers_out[link.from].push_back(&link);
                    covers_in[link.to].push_back(&link);
                    break;
                case LinkKind::Realizes:
                    ++realizes_out[link.from];
                    ++realized_by[link.to];
                    break;
                case LinkKind::Implements:
                    ++implements_out[link.from];
                    break;
                default:
                    break;
            }
        }
    }

    int count(const std::unordered_map<std::string_view, int>& map,
              std::string_view id) const {
        auto it = map.find(id);
        return it == map.end() ? 0 : it->second;
    }
};

const ArchElement* service_of_view_function(const ArchitectureModel& model,
                                            std::string_view viewfn_id) {
    return model.enclosing(viewfn_id, ElementKind::OperationalService);
}

}  // namespace

std::vector<Diagnostic> validate(const ArchitectureModel& model,
                                 const RuleConfig& config) {
    std::vector<Diagnostic> out;
    RuleIndex index(model);

    auto emit = [&](std::string code, std::string message,
                    const ArchElement& element,
                    std::optional<SourceSpan> span = {}) {
        out.push_back(make_diagnostic(std::move(code), std::move(message),
                                      element.id,
                                      span ? span : std::optional(element.src)));
    };

    for (const ArchElement& element : model.elements()) {
        switch (element.kind) {
            case ElementKind::AutomatedFunction: {
                const ArchElement* service = model.parent(element.id);
                bool covered_by_own_service = false;
                if (auto it = index.covers_in.find(element.id);
                    it != index.covers_in.end() && service) {
                    for (const Link* link : it->second) {
                        const ArchElement* vf_service =
                            service_of_view_function(model, link->from);
                        if (vf_service && vf_service->id == service->id) {
                            covered_by_own_service = true;
                            break;
                        }
                    }
                }
                if (!covered_by_own_service) {
                    emit("W101",
                         "automated function '" + element.id +
                             "' is not covered by any view function of its service",
                         element);
                }
                break;
            }
            case ElementKind::ViewFunction: {
                if (index.count(index.realized_by, element.id) == 0) {
                    emit("W102",
                         "view function '" + element.id +
                             "' is not realized by any module",
                         element);
                }
                bool has_covers = index.covers_out.count(element.id) > 0;
                if (!has_covers) {
                    const ArchElement* service =
                        service_of_view_function(model, element.id);
                    bool service_has_autofns = false;
                    if (service) {
                        for (const ArchElement* child : model.children(service->id)) {
                            if (child->kind == ElementKind::AutomatedFunction) {
                                service_has_autofns = true;
                                break;
                            }
                        }
                    }
                    if (service_has_autofns) {
                        emit("I202",
                             "view function '" + element.id +
                                 "' declares no covers links while service '" +
                                 service->id + "' defines automated functions",
                             element);
                    }
                }
                break;
            }
            case ElementKind::Module: {
                if (index.count(index.realized_by, element.id) == 0) {
                    emit("W103",
                         "module '" + element.id +
                             "' is not realized by any method",
                         element);
                }
                if (index.count(index.realizes_out, element.id) == 0) {
                    emit("W104",
                         "module '" + element.id + "' realizes no view function",
                         element);
                }
                break;
            }
            case ElementKind::Method: {
                if (index.count(index.realizes_out, element.id) == 0) {
                    emit("W105",
                         "method '" + element.id + "' realizes no module",
                         element);
                }
                break;
            }
            case ElementKind::Dialog: {
                if (model.children(element.id).empty()) {
                    emit("W106",
                         "dialog '" + element.id + "' contains no view functions",
                         element);
                }
                break;
            }
            case ElementKind::OperationalService: {
                bool has_dialog = false;
                for (const ArchElement* child : model.children(element.id)) {
                    if (child->kind == ElementKind::Dialog) {
                        has_dialog = true;
                        break;
                    }
                }
                if (!has_dialog) {
                    emit("W107",
                         "service '" + element.id + "' contains no dialogs",
                         element);
                }
                if (index.count(index.implements_out, element.id) == 0) {
                    emit("W108",
                         "service '" + element.id +
                             "' implements no business operation",
                         element);
                }
                break;
            }
            case ElementKind::Class: {
                if (model.children(element.id).empty()) {
                    emit("W109", "class '" + element.id + "' contains no methods",
                         element);
                }
                break;
            }
            case ElementKind::BusinessOperation: {
                bool has_service = false;
                for (const auto& [neighbor, kind] :
                     model.neighbors(element.id, Direction::Down,
                                     LinkKind::Implements)) {
                    (void)neighbor;
                    has_service = true;
                    break;
                }
                if (!has_service) {
                    emit("I201",
                         "business operation '" + element.id +
                             "' has no operational service",
                         element);
                }
                break;
            }
            default:
                break;
        }
    }

    // E110: a covers link may not cross service boundaries.
    for (const auto& [viewfn_id, links] : index.covers_out) {
        const ArchElement* vf_service = service_of_view_function(model, viewfn_id);
        if (!vf_service) continue;
        for (const Link* link : links) {
            const ArchElement* af_service = model.parent(link->to);
            if (!af_service) continue;
            if (af_service->id != vf_service->id) {
                out.push_back(make_diagnostic(
                    "E110",
                    "view function '" + link->from + "' covers '" + link->to +
                        "' from service '" + af_service->id +
                        "' but belongs to service '" + vf_service->id + "'",
                    link->from, link->src));
            }
        }
    }

    out = apply_config(std::move(out), config);
    sort_diagnostics(out);
    return out;
}

}  // namespace archloom
