#include "archloom/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "archloom/canonical.hpp"
#include "archloom/docgen.hpp"
#include "archloom/model.hpp"
#include "archloom/parser.hpp"
#include "archloom/trace.hpp"
#include "archloom/validator.hpp"

namespace archloom::cli {

namespace {

constexpr int kExitClean = 0;
constexpr int kExitWarnings = 1;
constexpr int kExitErrors = 2;
constexpr int kExitUsage = 3;

void print_diagnostics(const std::vector<Diagnostic>& diagnostics,
                       std::ostream& err) {
    for (const Diagnostic& diagnostic : diagnostics) {
        err << render(diagnostic) << "\n";
    }
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) return std::nullopt;
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    if (stream.bad()) return std::nullopt;
    return buffer.str();
}

bool write_file(const std::string& path, std::string_view content) {
    std::ofstream stream(path, std::ios::binary | std::ios::trunc);
    if (!stream) return false;
    stream.write(content.data(),
                 static_cast<std::streamsize>(content.size()));
    return stream.good();
}

/// Reads every input up front; any unreadable path aborts the invocation.
std::optional<std::vector<SourceText>> load_sources(
    const std::vector<std::string>& paths, std::ostream& err) {
    std::vector<SourceText> sources;
    sources.reserve(paths.size());
    for (const std::string& path : paths) {
        auto text = read_file(path);
        if (!text) {
            err << "error: cannot read '" << path << "'\n";
            return std::nullopt;
        }
        sources.push_back({path, std::move(*text)});
    }
    return sources;
}

struct ParsedInput {
    ParseResult result;
    int failure_exit = kExitClean;  // nonzero when the caller should stop
};

ParsedInput parse_paths(const std::vector<std::string>& paths,
                        std::ostream& err) {
    ParsedInput input;
    auto sources = load_sources(paths, err);
    if (!sources) {
        input.failure_exit = kExitUsage;
        return input;
    }
    input.result = parse(*sources);
    if (!input.result.model) {
        print_diagnostics(input.result.diagnostics, err);
        input.failure_exit = kExitErrors;
    }
    return input;
}

int report_arch_error(const ArchError& error, std::ostream& err) {
    err << render(error.diagnostic()) << "\n";
    return kExitErrors;
}

int emit_payload(const std::string& payload, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
    if (out_path.empty()) {
        out << payload;
        return kExitClean;
    }
    if (!write_file(out_path, payload)) {
        err << "error: cannot write '" << out_path << "'\n";
        return kExitUsage;
    }
    return kExitClean;
}

// --------------------------------------------------------------------------
// check

struct CheckOptions {
    std::vector<std::string> files;
    std::string config_path;
    std::vector<std::string> deny;
};

int run_check(const CheckOptions& options, std::ostream& out,
              std::ostream& err) {
    (void)out;  // check writes no payload
    auto sources = load_sources(options.files, err);
    if (!sources) return kExitUsage;

    std::string config_path = options.config_path;
    if (config_path.empty()) {
        if (const char* env = std::getenv("ARCHLOOM_CONFIG")) config_path = env;
    }
    RuleConfig config;
    if (!config_path.empty()) {
        auto text = read_file(config_path);
        if (!text) {
            err << "error: cannot read '" << config_path << "'\n";
            return kExitUsage;
        }
        ConfigResult parsed = parse_rule_config(*text, config_path);
        if (!parsed.config) {
            print_diagnostics(parsed.diagnostics, err);
            return kExitErrors;
        }
        config = std::move(*parsed.config);
    }
    std::vector<Diagnostic> notes;
    for (const std::string& code : options.deny) {
        if (!is_known_code(code)) {
            print_diagnostics(
                {make_diagnostic("E104", "unknown diagnostic code '" + code +
                                             "' in --deny")},
                err);
            return kExitErrors;
        }
        if (config.demote.count(code) || config.suppress.count(code)) {
            // The config file wins; leave a trace of the dropped request.
            notes.push_back(make_diagnostic(
                "I105", "--deny " + code + " overridden by config file '" +
                            config_path + "'"));
            continue;
        }
        config.promote.insert(code);
    }

    ParseResult parsed = parse(*sources);
    std::vector<Diagnostic> all = parsed.diagnostics;
    if (parsed.model) {
        std::vector<Diagnostic> findings = validate(*parsed.model, config);
        all.insert(all.end(), findings.begin(), findings.end());
    }
    print_diagnostics(notes, err);
    print_diagnostics(all, err);
    return exit_status(all, config);
}

// --------------------------------------------------------------------------
// trace

struct TraceCliOptions {
    std::vector<std::string> files;
    std::string id;
    std::string direction = "down";
    int depth = -1;
    bool include_flows = false;
    bool json = false;
};

void print_trace_tree(const ArchitectureModel& model,
                      const TraceResult& result, std::ostream& out) {
    std::map<std::string, const TraceNode*> nodes;
    for (const TraceNode& node : result.nodes) nodes[node.id] = &node;

    // Reduce the closure DAG to a tree: each node hangs under its smallest
    // parent one level up.
    std::map<std::string, std::vector<std::pair<std::string, LinkKind>>> tree;
    for (const TraceEdge& edge : result.edges) {
        auto from = nodes.find(edge.from);
        auto to = nodes.find(edge.to);
        if (from == nodes.end() || to == nodes.end()) continue;
        const TraceNode* a = from->second;
        const TraceNode* b = to->second;
        const TraceNode* parent = a->depth < b->depth ? a : b;
        const TraceNode* child = a->depth < b->depth ? b : a;
        if (child->depth != parent->depth + 1) continue;
        tree[parent->id].push_back({child->id, edge.kind});
    }

    std::set<std::string> printed;
    auto describe = [&](const TraceNode& node) {
        const ArchElement& element = model.at(node.id);
        std::string text = node.id + " [" + std::string(to_string(element.kind)) + "]";
        if (element.name != element.id) text += " " + element.name;
        return text;
    };
    auto walk = [&](auto&& self, const std::string& id, int depth) -> void {
        if (!printed.insert(id).second) return;
        auto it = tree.find(id);
        if (it == tree.end()) return;
        std::sort(it->second.begin(), it->second.end());
        for (const auto& [child_id, kind] : it->second) {
            if (printed.count(child_id)) continue;
            out << std::string(static_cast<size_t>(depth + 1) * 2, ' ')
                << describe(*nodes.at(child_id)) << " (" << to_string(kind)
                << ")\n";
            self(self, child_id, depth + 1);
        }
    };
    out << describe(*nodes.at(result.root)) << "\n";
    walk(walk, result.root, 0);
    if (result.truncated) {
        out << "(depth limit reached; deeper elements omitted)\n";
    }
}

int run_trace(const TraceCliOptions& options, std::ostream& out,
              std::ostream& err) {
    ParsedInput input = parse_paths(options.files, err);
    if (input.failure_exit != kExitClean) return input.failure_exit;
    TraceOptions trace_options;
    if (options.depth >= 0) trace_options.max_depth = options.depth;
    trace_options.include_flows = options.include_flows;
    Direction direction =
        options.direction == "up" ? Direction::Up : Direction::Down;
    try {
        TraceResult result =
            trace(*input.result.model, options.id, direction, trace_options);
        if (options.json) {
            out << to_json(result);
        } else {
            print_trace_tree(*input.result.model, result, out);
        }
    } catch (const ArchError& error) {
        return report_arch_error(error, err);
    }
    return kExitClean;
}

// --------------------------------------------------------------------------
// impact

struct ImpactOptions {
    std::vector<std::string> files;
    std::vector<std::string> ids;
    bool json = false;
};

int run_impact(const ImpactOptions& options, std::ostream& out,
               std::ostream& err) {
    ParsedInput input = parse_paths(options.files, err);
    if (input.failure_exit != kExitClean) return input.failure_exit;
    try {
        std::set<std::string> seeds(options.ids.begin(), options.ids.end());
        std::set<std::string> result = impact(*input.result.model, seeds);
        if (options.json) {
            nlohmann::ordered_json array(result);
            out << array.dump(2) << "\n";
        } else {
            for (const std::string& id : result) out << id << "\n";
        }
    } catch (const ArchError& error) {
        return report_arch_error(error, err);
    }
    return kExitClean;
}

// --------------------------------------------------------------------------
// coverage

struct CoverageOptions {
    std::vector<std::string> files;
    bool json = false;
};

int run_coverage(const CoverageOptions& options, std::ostream& out,
                 std::ostream& err) {
    ParsedInput input = parse_paths(options.files, err);
    if (input.failure_exit != kExitClean) return input.failure_exit;
    CoverageReport report = coverage(*input.result.model);
    if (options.json) {
        out << to_json(report);
        return kExitClean;
    }
    out << std::left << std::setw(20) << "layer" << std::right << std::setw(7)
        << "total" << std::setw(9) << "orphans" << std::setw(6) << "gaps"
        << "\n";
    for (const auto& [layer, counts] : report.layers) {
        out << std::left << std::setw(20) << to_string(layer) << std::right
            << std::setw(7) << counts.total << std::setw(9) << counts.orphans
            << std::setw(6) << counts.gaps << "\n";
    }
    out << "chains complete: " << report.chains_complete << " / "
        << report.chains_total << "\n";
    return kExitClean;
}

// --------------------------------------------------------------------------
// diff

struct DiffOptions {
    std::vector<std::string> old_files;
    std::vector<std::string> new_files;
    bool json = false;
};

int run_diff(const DiffOptions& options, std::ostream& out, std::ostream& err) {
    ParsedInput old_input = parse_paths(options.old_files, err);
    if (old_input.failure_exit != kExitClean) return old_input.failure_exit;
    ParsedInput new_input = parse_paths(options.new_files, err);
    if (new_input.failure_exit != kExitClean) return new_input.failure_exit;
    ModelDiff result = diff(*old_input.result.model, *new_input.result.model);
    if (options.json) {
        out << to_json(result);
        return kExitClean;
    }
    auto section = [&](const char* label, const std::set<std::string>& ids) {
        out << label << " (" << ids.size() << "):\n";
        for (const std::string& id : ids) out << "  " << id << "\n";
    };
    section("added", result.added);
    section("removed", result.removed);
    section("modified", result.modified);
    section("impact", result.impact);
    return kExitClean;
}

// --------------------------------------------------------------------------
// docgen / export / fmt

struct DocgenOptions {
    std::vector<std::string> files;
    std::string kind;
    std::string subject;
    std::string format = "markdown";
    std::string out_path;
};

int run_docgen(const DocgenOptions& options, std::ostream& out,
               std::ostream& err) {
    ParsedInput input = parse_paths(options.files, err);
    if (input.failure_exit != kExitClean) return input.failure_exit;
    ReportSpec spec;
    spec.kind = *report_kind_from(options.kind);      // validated by CLI11
    spec.format = *doc_format_from(options.format);   // validated by CLI11
    spec.subject = options.subject;
    try {
        std::string payload = render(*input.result.model, spec);
        return emit_payload(payload, options.out_path, out, err);
    } catch (const ArchError& error) {
        return report_arch_error(error, err);
    }
}

struct ExportOptions {
    std::vector<std::string> files;
    std::string out_path;
};

int run_export(const ExportOptions& options, std::ostream& out,
               std::ostream& err) {
    ParsedInput input = parse_paths(options.files, err);
    if (input.failure_exit != kExitClean) return input.failure_exit;
    return emit_payload(export_canonical(*input.result.model), options.out_path,
                        out, err);
}

struct FmtOptions {
    std::vector<std::string> files;
    bool write = false;
};

int run_fmt(const FmtOptions& options, std::ostream& out, std::ostream& err) {
    auto sources = load_sources(options.files, err);
    if (!sources) return kExitUsage;
    ParseResult parsed = parse(*sources);
    if (!parsed.model) {
        print_diagnostics(parsed.diagnostics, err);
        return kExitErrors;
    }
    bool any_noncanonical = false;
    for (const SourceText& source : *sources) {
        std::string canonical = emit_dsl_for_file(*parsed.model, source.name);
        if (canonical == source.text) continue;
        any_noncanonical = true;
        if (options.write) {
            if (!write_file(source.name, canonical)) {
                err << "error: cannot write '" << source.name << "'\n";
                return kExitUsage;
            }
        }
    }
    if (!options.write) {
        for (const SourceText& source : *sources) {
            out << emit_dsl_for_file(*parsed.model, source.name);
        }
        return any_noncanonical ? kExitWarnings : kExitClean;
    }
    return kExitClean;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Layered architecture models: parsing, validation, tracing "
                 "and document generation"};
    app.name("archloom");
    app.require_subcommand(1);

    CheckOptions check_options;
    CLI::App* check = app.add_subcommand(
        "check", "Parse inputs and run the seamlessness rule catalog");
    check->add_option("files", check_options.files, "architecture source files")
        ->required();
    check->add_option("--config", check_options.config_path,
                      "rule config file (overrides ARCHLOOM_CONFIG)");
    check->add_option("--deny", check_options.deny,
                      "treat the given diagnostic code as an error");

    TraceCliOptions trace_options;
    CLI::App* trace_cmd =
        app.add_subcommand("trace", "Derivation closure of one element");
    trace_cmd->add_option("files", trace_options.files, "architecture source files")
        ->required();
    trace_cmd->add_option("--id", trace_options.id, "root element id")->required();
    trace_cmd->add_option("--dir", trace_options.direction, "up or down")
        ->check(CLI::IsMember({"up", "down"}));
    trace_cmd->add_option("--depth", trace_options.depth, "depth limit")
        ->check(CLI::NonNegativeNumber);
    trace_cmd->add_flag("--include-flows", trace_options.include_flows,
                        "follow dialog flow edges too");
    trace_cmd->add_flag("--json", trace_options.json, "machine-readable output");

    ImpactOptions impact_options;
    CLI::App* impact_cmd = app.add_subcommand(
        "impact", "Elements affected by a change to the given ids");
    impact_cmd->add_option("files", impact_options.files, "architecture source files")
        ->required();
    impact_cmd->add_option("--id", impact_options.ids, "seed element id")
        ->required();
    impact_cmd->add_flag("--json", impact_options.json, "machine-readable output");

    CoverageOptions coverage_options;
    CLI::App* coverage_cmd =
        app.add_subcommand("coverage", "Per-layer gap/orphan metrics");
    coverage_cmd
        ->add_option("files", coverage_options.files, "architecture source files")
        ->required();
    coverage_cmd->add_flag("--json", coverage_options.json,
                           "machine-readable output");

    DiffOptions diff_options;
    CLI::App* diff_cmd =
        app.add_subcommand("diff", "Compare two versions of a model");
    diff_cmd->add_option("files", diff_options.old_files, "old version files")
        ->required();
    diff_cmd->add_option("--against", diff_options.new_files, "new version files")
        ->required();
    diff_cmd->add_flag("--json", diff_options.json, "machine-readable output");

    DocgenOptions docgen_options;
    CLI::App* docgen_cmd =
        app.add_subcommand("docgen", "Generate operational documents");
    docgen_cmd->add_option("files", docgen_options.files, "architecture source files")
        ->required();
    docgen_cmd->add_option("--kind", docgen_options.kind, "report kind")
        ->required()
        ->check(CLI::IsMember({"dialog-report", "viewfn-modules",
                               "module-methods", "trace-matrix", "full-book"}));
    docgen_cmd->add_option("--subject", docgen_options.subject,
                           "subject element id");
    docgen_cmd->add_option("--format", docgen_options.format, "output format")
        ->check(CLI::IsMember({"markdown", "html", "csv"}));
    docgen_cmd->add_option("--out", docgen_options.out_path, "output path");

    ExportOptions export_options;
    CLI::App* export_cmd =
        app.add_subcommand("export", "Write the canonical JSON form");
    export_cmd->add_option("files", export_options.files, "architecture source files")
        ->required();
    export_cmd->add_option("--out", export_options.out_path, "output path");

    FmtOptions fmt_options;
    CLI::App* fmt_cmd =
        app.add_subcommand("fmt", "Canonical formatting of source files");
    fmt_cmd->add_option("files", fmt_options.files, "architecture source files")
        ->required();
    fmt_cmd->add_flag("--write", fmt_options.write, "rewrite files in place");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("archloom");
    for (const std::string& arg : args) argv.push_back(arg.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitClean;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << "run 'archloom --help' for usage\n";
        return kExitUsage;
    }

    if (check->parsed()) return run_check(check_options, out, err);
    if (trace_cmd->parsed()) return run_trace(trace_options, out, err);
    if (impact_cmd->parsed()) return run_impact(impact_options, out, err);
    if (coverage_cmd->parsed()) return run_coverage(coverage_options, out, err);
    if (diff_cmd->parsed()) return run_diff(diff_options, out, err);
    if (docgen_cmd->parsed()) return run_docgen(docgen_options, out, err);
    if (export_cmd->parsed()) return run_export(export_options, out, err);
    if (fmt_cmd->parsed()) return run_fmt(fmt_options, out, err);
    err << "error: no command given\n";
    return kExitUsage;
}

}  // namespace archloom::cli
