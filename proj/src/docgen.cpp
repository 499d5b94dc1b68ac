#include "archloom/docgen.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <string>
#include <vector>

namespace archloom {

namespace {

constexpr std::array<std::string_view, 5> kReportKindNames = {
    "dialog-report", "viewfn-modules", "module-methods", "trace-matrix",
    "full-book"};

constexpr std::array<std::string_view, 3> kDocFormatNames = {"markdown", "html",
                                                             "csv"};

[[noreturn]] void report_error(std::string code, std::string message,
                               std::string element = {}) {
    throw ArchError(make_diagnostic(std::move(code), std::move(message),
                                    std::move(element)));
}

// ---------------------------------------------------------------------------
// Shared report shape: sections with an optional verbatim block and a table.

struct Section {
    int level = 2;  // heading level
    std::string heading;
    std::string verbatim;  // form text, printed before the table
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    bool has_table = false;
};

std::string markdown_cell(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    int newline_run = 0;
    for (char c : text) {
        if (c == '\n') {
            ++newline_run;
            continue;
        }
        if (newline_run > 0) {
            out += newline_run >= 2 ? "<br /><br />" : "<br />";
            newline_run = 0;
        }
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

std::string html_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string html_cell(const std::string& text) {
    // Blank-line separated paragraphs become <p>, inner newlines <br />.
    std::vector<std::string> paragraphs;
    std::string current;
    int newline_run = 0;
    for (char c : text) {
        if (c == '\n') {
            ++newline_run;
            continue;
        }
        if (newline_run >= 2) {
            paragraphs.push_back(current);
            current.clear();
        } else if (newline_run == 1) {
            current += '\n';
        }
        newline_run = 0;
        current += c;
    }
    paragraphs.push_back(current);

    std::string out;
    for (const std::string& paragraph : paragraphs) {
        std::string body;
        for (char c : paragraph) {
            if (c == '\n') {
                body += "<br />";
            } else {
                body += html_escape(std::string_view(&c, 1));
            }
        }
        if (paragraphs.size() > 1) {
            out += "<p>" + body + "</p>";
        } else {
            out += body;
        }
    }
    return out;
}

std::string render_markdown(const std::vector<Section>& sections) {
    std::string out;
    bool first = true;
    for (const Section& section : sections) {
        if (!first) out += "\n";
        first = false;
        out += std::string(section.level, '#') + " " + section.heading + "\n";
        if (!section.verbatim.empty()) {
            out += "\n" + section.verbatim + "\n";
        }
        if (section.has_table) {
            out += "\n|";
            for (const std::string& column : section.columns) {
                out += " " + column + " |";
            }
            out += "\n|";
            for (size_t i = 0; i < section.columns.size(); ++i) out += " --- |";
            out += "\n";
            for (const auto& row : section.rows) {
                out += "|";
                for (const std::string& cell : row) {
                    out += " " + markdown_cell(cell) + " |";
                }
                out += "\n";
            }
        }
    }
    return out;
}

std::string render_html(const std::vector<Section>& sections,
                        const std::string& title) {
    std::string out;
    out += "<!DOCTYPE html>\n<html>\n<head>\n";
    out += "<meta charset=\"utf-8\" />\n";
    out += "<title>" + html_escape(title) + "</title>\n";
    out += "<style>\n";
    out += "body { font-family: sans-serif; margin: 2em; }\n";
    out += "table { border-collapse: collapse; margin: 1em 0; }\n";
    out += "th, td { border: 1px solid #888; padding: 4px 8px; "
           "vertical-align: top; text-align: left; }\n";
    out += "pre.form { background: #f2f2f2; padding: 8px; }\n";
    out += "</style>\n</head>\n<body>\n";
    for (const Section& section : sections) {
        std::string tag = "h" + std::to_string(section.level);
        out += "<" + tag + ">" + html_escape(section.heading) + "</" + tag + ">\n";
        if (!section.verbatim.empty()) {
            out += "<pre class=\"form\">" + html_escape(section.verbatim) +
                   "</pre>\n";
        }
        if (section.has_table) {
            out += "<table>\n<tr>";
            for (const std::string& column : section.columns) {
                out += "<th>" + html_escape(column) + "</th>";
            }
            out += "</tr>\n";
            for (const auto& row : section.rows) {
                out += "<tr>";
                for (const std::string& cell : row) {
                    out += "<td>" + html_cell(cell) + "</td>";
                }
                out += "</tr>\n";
            }
            out += "</table>\n";
        }
    }
    out += "</body>\n</html>\n";
    return out;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// ---------------------------------------------------------------------------
// Row collection.

int declaration_rank(const ArchElement& element) {
    return element.seq >= 0 ? element.seq : INT_MAX;
}

std::vector<const ArchElement*> sorted_by_declaration(
    std::vector<const ArchElement*> elements) {
    std::sort(elements.begin(), elements.end(),
              [](const ArchElement* a, const ArchElement* b) {
                  int ra = declaration_rank(*a);
                  int rb = declaration_rank(*b);
                  if (ra != rb) return ra < rb;
                  return a->id < b->id;
              });
    return elements;
}

std::vector<const ArchElement*> realizers_of(const ArchitectureModel& model,
                                             std::string_view id) {
    std::vector<const ArchElement*> out;
    for (const auto& [element, kind] :
         model.neighbors(id, Direction::Down, LinkKind::Realizes)) {
        out.push_back(element);
    }
    return sorted_by_declaration(std::move(out));
}

std::string attr_or_empty(const ArchElement& element, std::string_view key) {
    const std::string* value = element.attr(key);
    return value ? *value : std::string();
}

Section dialog_section(const ArchitectureModel& model,
                       const ArchElement& dialog) {
    Section section;
    section.heading = "Dialog " + dialog.id + ". " + dialog.name;
    section.verbatim = attr_or_empty(dialog, kAttrForm);
    section.columns = {"View function", "Function definition"};
    section.has_table = true;
    for (const ArchElement* viewfn : model.children(dialog.id)) {
        section.rows.push_back({viewfn->id + ". " + viewfn->name,
                                attr_or_empty(*viewfn, kAttrDesc)});
    }
    return section;
}

Section viewfn_modules_section(const ArchitectureModel& model,
                               const ArchElement& viewfn) {
    Section section;
    section.heading = "Modules of the view function " + viewfn.id + ". " +
                      viewfn.name;
    section.columns = {"Module", "Parameters", "Component", "Comments"};
    section.has_table = true;
    for (const ArchElement* module : realizers_of(model, viewfn.id)) {
        const ArchElement* component =
            model.enclosing(module->id, ElementKind::Component);
        section.rows.push_back({module->id,
                                attr_or_empty(*module, kAttrParams),
                                component ? component->name : std::string(),
                                attr_or_empty(*module, kAttrDesc)});
    }
    return section;
}

Section module_methods_section(const ArchitectureModel& model,
                               const ArchElement& module) {
    Section section;
    section.heading = "Methods of the module " + module.id;
    section.columns = {"Method", "Parameters", "Class", "Comments"};
    section.has_table = true;
    for (const ArchElement* method : realizers_of(model, module.id)) {
        const ArchElement* klass = model.enclosing(method->id, ElementKind::Class);
        section.rows.push_back({method->id,
                                attr_or_empty(*method, kAttrParams),
                                klass ? klass->name : std::string(),
                                attr_or_empty(*method, kAttrDesc)});
    }
    return section;
}

/// One row per maximal derivation path rooted at a business operation;
/// missing levels stay empty. Rows sorted lexicographically.
std::vector<std::vector<std::string>> matrix_rows(
    const ArchitectureModel& model) {
    std::vector<std::vector<std::string>> rows;
    auto realizer_ids = [&](std::string_view id) {
        std::vector<std::string> out;
        for (const auto& [element, kind] :
             model.neighbors(id, Direction::Down, LinkKind::Realizes)) {
            out.push_back(element->id);
        }
        return out;
    };
    for (const ArchElement* operation :
         model.elements_of_kind(ElementKind::BusinessOperation)) {
        auto services =
            model.neighbors(operation->id, Direction::Down, LinkKind::Implements);
        if (services.empty()) {
            rows.push_back({operation->id, "", "", "", "", ""});
            continue;
        }
        for (const auto& [service, k1] : services) {
            std::vector<const ArchElement*> dialogs;
            for (const ArchElement* child : model.children(service->id)) {
                if (child->kind == ElementKind::Dialog) dialogs.push_back(child);
            }
            if (dialogs.empty()) {
                rows.push_back({operation->id, service->id, "", "", "", ""});
                continue;
            }
            for (const ArchElement* dialog : dialogs) {
                auto viewfns = model.children(dialog->id);
                if (viewfns.empty()) {
                    rows.push_back(
                        {operation->id, service->id, dialog->id, "", "", ""});
                    continue;
                }
                for (const ArchElement* viewfn : viewfns) {
                    auto modules = realizer_ids(viewfn->id);
                    if (modules.empty()) {
                        rows.push_back({operation->id, service->id, dialog->id,
                                        viewfn->id, "", ""});
                        continue;
                    }
                    for (const std::string& module : modules) {
                        auto methods = realizer_ids(module);
                        if (methods.empty()) {
                            rows.push_back({operation->id, service->id,
                                            dialog->id, viewfn->id, module, ""});
                            continue;
                        }
                        for (const std::string& method : methods) {
                            rows.push_back({operation->id, service->id,
                                            dialog->id, viewfn->id, module,
                                            method});
                        }
                    }
                }
            }
        }
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

const std::vector<std::string>& matrix_columns() {
    static const std::vector<std::string> columns = {
        "operation", "service", "dialog", "viewfn", "module", "method"};
    return columns;
}

std::string render_matrix_csv(const ArchitectureModel& model) {
    std::string out;
    out += "operation,service,dialog,viewfn,module,method\n";
    for (const auto& row : matrix_rows(model)) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ',';
            out += csv_field(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::vector<Section> full_book_sections(const ArchitectureModel& model) {
    std::vector<Section> sections;
    Section title;
    title.level = 1;
    title.heading = model.meta().name.empty()
                        ? std::string("Architecture documentation")
                        : model.meta().name + " architecture documentation";
    sections.push_back(std::move(title));
    for (const ArchElement* dialog :
         model.elements_of_kind(ElementKind::Dialog)) {
        sections.push_back(dialog_section(model, *dialog));
    }
    for (const ArchElement* viewfn :
         model.elements_of_kind(ElementKind::ViewFunction)) {
        sections.push_back(viewfn_modules_section(model, *viewfn));
    }
    for (const ArchElement* module :
         model.elements_of_kind(ElementKind::Module)) {
        sections.push_back(module_methods_section(model, *module));
    }
    return sections;
}

const ArchElement& resolve_subject(const ArchitectureModel& model,
                                   const ReportSpec& spec,
                                   ElementKind expected) {
    if (spec.subject.empty()) {
        report_error("E105",
                     std::string("report kind '") +
                         std::string(to_string(spec.kind)) +
                         "' requires a subject of kind " +
                         std::string(to_string(expected)));
    }
    const ArchElement& subject = model.at(spec.subject);
    if (subject.kind != expected) {
        report_error("E105",
                     "subject '" + subject.id + "' must be a " +
                         std::string(to_string(expected)) + ", got " +
                         std::string(to_string(subject.kind)),
                     subject.id);
    }
    return subject;
}

}  // namespace

std::string_view to_string(ReportKind kind) {
    return kReportKindNames[static_cast<int>(kind)];
}

std::string_view to_string(DocFormat format) {
    return kDocFormatNames[static_cast<int>(format)];
}

std::optional<ReportKind> report_kind_from(std::string_view name) {
    for (size_t i = 0; i < kReportKindNames.size(); ++i) {
        if (kReportKindNames[i] == name) return static_cast<ReportKind>(i);
    }
    return std::nullopt;
}

std::optional<DocFormat> doc_format_from(std::string_view name) {
    for (size_t i = 0; i < kDocFormatNames.size(); ++i) {
        if (kDocFormatNames[i] == name) return static_cast<DocFormat>(i);
    }
    return std::nullopt;
}

std::string render(const ArchitectureModel& model, const ReportSpec& spec) {
    if (spec.format == DocFormat::Csv && spec.kind != ReportKind::TraceMatrix) {
        report_error("E106", "csv output is only supported for trace-matrix");
    }
    if ((spec.kind == ReportKind::TraceMatrix ||
         spec.kind == ReportKind::FullBook) &&
        !spec.subject.empty()) {
        report_error("E105", std::string("report kind '") +
                                 std::string(to_string(spec.kind)) +
                                 "' takes no subject");
    }

    std::vector<Section> sections;
    std::string title;
    switch (spec.kind) {
        case ReportKind::DialogReport: {
            const ArchElement& dialog =
                resolve_subject(model, spec, ElementKind::Dialog);
            sections.push_back(dialog_section(model, dialog));
            title = sections.back().heading;
            break;
        }
        case ReportKind::ViewfnModules: {
            const ArchElement& viewfn =
                resolve_subject(model, spec, ElementKind::ViewFunction);
            sections.push_back(viewfn_modules_section(model, viewfn));
            title = sections.back().heading;
            break;
        }
        case ReportKind::ModuleMethods: {
            const ArchElement& module =
                resolve_subject(model, spec, ElementKind::Module);
            sections.push_back(module_methods_section(model, module));
            title = sections.back().heading;
            break;
        }
        case ReportKind::TraceMatrix: {
            if (spec.format == DocFormat::Csv) return render_matrix_csv(model);
            Section section;
            section.heading = "Traceability matrix";
            section.columns = matrix_columns();
            section.rows = matrix_rows(model);
            section.has_table = true;
            sections.push_back(std::move(section));
            title = "Traceability matrix";
            break;
        }
        case ReportKind::FullBook: {
            sections = full_book_sections(model);
            title = sections.front().heading;
            break;
        }
    }

    return spec.format == DocFormat::Html ? render_html(sections, title)
                                          : render_markdown(sections);
}

// ---------------------------------------------------------------------------
// Canonical DSL emission.

namespace {

std::string quote_single_line(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string quote_multi_line(const std::string& text) {
    std::string out = "\"\"\"\n";
    int quote_run = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '\\') {
            out += "\\\\";
            quote_run = 0;
        } else if (c == '"') {
            // Keep quotes raw unless a raw run of three would form, or the
            // text ends on a quote right before the closing delimiter.
            if (quote_run == 2 || i + 1 == text.size()) {
                out += "\\\"";
                quote_run = 0;
            } else {
                out += '"';
                ++quote_run;
            }
        } else {
            out += c;
            quote_run = 0;
        }
    }
    out += "\n\"\"\"";
    return out;
}

std::string quote(const std::string& text) {
    return text.find('\n') == std::string::npos ? quote_single_line(text)
                                                : quote_multi_line(text);
}

class DslEmitter {
public:
    explicit DslEmitter(const ArchitectureModel& model) : model_(model) {}

    std::string emit(std::string_view only_file) {
        std::vector<const ArchElement*> top;
        for (const ArchElement& element : model_.elements()) {
            switch (element.kind) {
                case ElementKind::BusinessProcess:
                case ElementKind::OperationalService:
                case ElementKind::Component:
                case ElementKind::Class:
                    if (only_file.empty() || element.src.file == only_file) {
                        top.push_back(&element);
                    }
                    break;
                default:
                    break;
            }
        }
        top = sorted_by_declaration(std::move(top));
        for (const ArchElement* element : top) {
            if (!out_.empty()) out_ += "\n";
            switch (element->kind) {
                case ElementKind::BusinessProcess: emit_process(*element); break;
                case ElementKind::OperationalService: emit_service(*element); break;
                case ElementKind::Component: emit_component(*element); break;
                case ElementKind::Class: emit_class(*element); break;
                default: break;
            }
        }
        return std::move(out_);
    }

private:
    void line(int indent, const std::string& text) {
        out_ += std::string(static_cast<size_t>(indent) * 2, ' ');
        out_ += text;
        out_ += '\n';
    }

    // `desc "..."` / `form "..."`; multi-line text is emitted flush-left.
    void attr_line(int indent, std::string_view keyword,
                   const std::string& text) {
        std::string quoted = quote(text);
        line(indent, std::string(keyword) + " " + quoted);
    }

    void desc_block(int indent, const ArchElement& element,
                    std::string& header) {
        const std::string* desc = element.attr(kAttrDesc);
        if (!desc) {
            line(indent, header);
            return;
        }
        line(indent, header + " {");
        attr_line(indent + 1, kAttrDesc, *desc);
        line(indent, "}");
    }

    std::vector<const ArchElement*> children_of_kind(const ArchElement& parent,
                                                     ElementKind kind) {
        std::vector<const ArchElement*> out;
        for (const ArchElement* child : model_.children(parent.id)) {
            if (child->kind == kind) out.push_back(child);
        }
        return out;
    }

    std::vector<std::string> up_targets(const ArchElement& element,
                                        LinkKind kind) {
        std::vector<std::string> out;
        for (const auto& [target, k] :
             model_.neighbors(element.id, Direction::Up, kind)) {
            out.push_back(target->id);
        }
        return out;
    }

    std::string join_refs(const std::vector<std::string>& refs) {
        std::string out;
        for (const std::string& ref : refs) {
            if (!out.empty()) out += ", ";
            out += ref;
        }
        return out;
    }

    void emit_process(const ArchElement& process) {
        line(0, "process " + process.id + " " + quote(process.name) + " {");
        for (const ArchElement* child : model_.children(process.id)) {
            emit_bfunc(*child, 1);
        }
        line(0, "}");
    }

    void emit_bfunc(const ArchElement& function, int indent) {
        line(indent, "function " + function.id + " " + quote(function.name) + " {");
        for (const ArchElement* child : model_.children(function.id)) {
            if (child->kind == ElementKind::BusinessFunction) {
                emit_bfunc(*child, indent + 1);
            } else {
                std::string header =
                    "operation " + child->id + " " + quote(child->name);
                desc_block(indent + 1, *child, header);
            }
        }
        line(indent, "}");
    }

    void emit_service(const ArchElement& service) {
        std::string header = "service " + service.id + " " + quote(service.name);
        auto implemented = up_targets(service, LinkKind::Implements);
        if (!implemented.empty()) header += " implements " + implemented.front();
        line(0, header + " {");
        for (const ArchElement* autofn :
             children_of_kind(service, ElementKind::AutomatedFunction)) {
            line(1, "autofn " + autofn->id + " " + quote(autofn->name));
        }
        for (const ArchElement* dialog :
             children_of_kind(service, ElementKind::Dialog)) {
            emit_dialog(*dialog);
        }
        line(0, "}");
    }

    void emit_dialog(const ArchElement& dialog) {
        line(1, "dialog " + dialog.id + " " + quote(dialog.name) + " {");
        const std::string* form = dialog.attr(kAttrForm);
        attr_line(2, kAttrForm, form ? *form : std::string());
        for (const ArchElement* viewfn : model_.children(dialog.id)) {
            emit_viewfn(*viewfn);
        }
        line(1, "}");
    }

    void emit_viewfn(const ArchElement& viewfn) {
        std::string header = "viewfn " + viewfn.id + " " + quote(viewfn.name);
        auto covers = up_targets(viewfn, LinkKind::Covers);
        if (!covers.empty()) header += " covers " + join_refs(covers);
        auto flows = model_.neighbors(viewfn.id, Direction::Down, LinkKind::FlowsTo);
        if (!flows.empty()) {
            header += " flows -> " + flows.front().first->id;
        } else if (const std::string* external = viewfn.attr(kAttrFlowsExternal)) {
            header += " flows -> external " + quote(*external);
        }
        desc_block(2, viewfn, header);
    }

    void emit_component(const ArchElement& component) {
        const std::string* tag = component.attr(kAttrKindTag);
        line(0, "component " + component.id + " " + quote(component.name) +
                    " kind " + (tag ? *tag : "subsystem") + " {");
        for (const ArchElement* module :
             children_of_kind(component, ElementKind::Module)) {
            emit_realizer("module", *module, 1);
        }
        line(0, "}");
    }

    void emit_class(const ArchElement& klass) {
        const ArchElement* component = model_.parent(klass.id);
        std::string header = "class " + klass.id + " " + quote(klass.name);
        if (component) header += " in " + component->id;
        line(0, header + " {");
        for (const ArchElement* method : model_.children(klass.id)) {
            emit_realizer("method", *method, 1);
        }
        line(0, "}");
    }

    void emit_realizer(std::string_view keyword, const ArchElement& element,
                       int indent) {
        std::string header = std::string(keyword) + " " + element.id;
        if (const std::string* params = element.attr(kAttrParams)) {
            header += " params(" + *params + ")";
        }
        auto targets = up_targets(element, LinkKind::Realizes);
        if (!targets.empty()) header += " realizes " + join_refs(targets);
        desc_block(indent, element, header);
    }

    const ArchitectureModel& model_;
    std::string out_;
};

}  // namespace

std::string emit_dsl(const ArchitectureModel& model) {
    return DslEmitter(model).emit({});
}

std::string emit_dsl_for_file(const ArchitectureModel& model,
                              std::string_view file) {
    return DslEmitter(model).emit(file);
}

}  // namespace archloom
