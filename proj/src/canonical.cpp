#include "archloom/canonical.hpp"

#include <nlohmann/json.hpp>

namespace archloom {

namespace {

using ordered_json = nlohmann::ordered_json;

SourceSpan span_at_offset(std::string_view text, std::string_view file,
                          size_t byte_offset) {
    SourceSpan span;
    span.file = std::string(file);
    span.line = 1;
    span.column = 1;
    span.length = 1;
    for (size_t i = 0; i < byte_offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++span.line;
            span.column = 1;
        } else {
            ++span.column;
        }
    }
    return span;
}

class ImportFailure {
public:
    explicit ImportFailure(Diagnostic diagnostic)
        : diagnostic_(std::move(diagnostic)) {}
    Diagnostic diagnostic_;
};

[[noreturn]] void fail(std::string code, std::string message,
                       std::optional<SourceSpan> span = {}) {
    throw ImportFailure(
        make_diagnostic(std::move(code), std::move(message), {}, std::move(span)));
}

const ordered_json& require(const ordered_json& object, const char* key,
                            const char* where) {
    auto it = object.find(key);
    if (it == object.end()) {
        fail("E102", std::string("missing key '") + key + "' in " + where);
    }
    return *it;
}

std::string require_string(const ordered_json& value, const char* what) {
    if (!value.is_string()) {
        fail("E102", std::string("expected string for ") + what);
    }
    return value.get<std::string>();
}

}  // namespace

std::string export_canonical(const ArchitectureModel& model) {
    ordered_json root;
    root["meta"] = {{"name", model.meta().name},
                    {"version", model.meta().version}};
    ordered_json elements = ordered_json::array();
    for (const ArchElement& element : model.elements()) {
        ordered_json entry;
        entry["id"] = element.id;
        entry["kind"] = to_string(element.kind);
        entry["name"] = element.name;
        if (!element.attrs.empty()) {
            ordered_json attrs;  // std::map iteration is already key-sorted
            for (const auto& [key, value] : element.attrs) attrs[key] = value;
            entry["attrs"] = std::move(attrs);
        }
        elements.push_back(std::move(entry));
    }
    root["elements"] = std::move(elements);
    ordered_json links = ordered_json::array();
    for (const Link& link : model.links()) {
        links.push_back({{"from", link.from},
                         {"to", link.to},
                         {"kind", to_string(link.kind)}});
    }
    root["links"] = std::move(links);
    return root.dump(2) + "\n";
}

ImportResult import_canonical(std::string_view text,
                              std::string_view stream_name) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        return {std::nullopt,
                {make_diagnostic("E102", e.what(), {},
                                 span_at_offset(text, stream_name, offset))}};
    }

    try {
        if (!root.is_object()) fail("E102", "top level must be an object");
        ModelMeta meta;
        const ordered_json& meta_json = require(root, "meta", "document");
        if (!meta_json.is_object()) fail("E102", "'meta' must be an object");
        if (auto it = meta_json.find("name"); it != meta_json.end()) {
            meta.name = require_string(*it, "meta.name");
        }
        if (auto it = meta_json.find("version"); it != meta_json.end()) {
            meta.version = require_string(*it, "meta.version");
        }

        const ordered_json& elements_json = require(root, "elements", "document");
        if (!elements_json.is_array()) fail("E102", "'elements' must be an array");
        std::vector<ArchElement> elements;
        elements.reserve(elements_json.size());
        for (const ordered_json& entry : elements_json) {
            if (!entry.is_object()) fail("E102", "element entries must be objects");
            ArchElement element;
            element.id = require_string(require(entry, "id", "element"), "element id");
            std::string kind_name =
                require_string(require(entry, "kind", "element"), "element kind");
            auto kind = element_kind_from(kind_name);
            if (!kind) {
                fail("E103", "unknown element kind '" + kind_name + "'");
            }
            element.kind = *kind;
            element.name =
                require_string(require(entry, "name", "element"), "element name");
            if (auto it = entry.find("attrs"); it != entry.end()) {
                if (!it->is_object()) fail("E102", "'attrs' must be an object");
                for (const auto& [key, value] : it->items()) {
                    element.attrs[key] = require_string(value, "attribute value");
                }
            }
            element.src.file = std::string(stream_name);
            elements.push_back(std::move(element));
        }

        const ordered_json& links_json = require(root, "links", "document");
        if (!links_json.is_array()) fail("E102", "'links' must be an array");
        std::vector<Link> links;
        links.reserve(links_json.size());
        for (const ordered_json& entry : links_json) {
            if (!entry.is_object()) fail("E102", "link entries must be objects");
            Link link;
            link.from = require_string(require(entry, "from", "link"), "link from");
            link.to = require_string(require(entry, "to", "link"), "link to");
            std::string kind_name =
                require_string(require(entry, "kind", "link"), "link kind");
            auto kind = link_kind_from(kind_name);
            if (!kind) {
                fail("E103", "unknown link kind '" + kind_name + "'");
            }
            link.kind = *kind;
            link.src.file = std::string(stream_name);
            links.push_back(std::move(link));
        }

        BuildResult built =
            build_model(std::move(elements), std::move(links), std::move(meta));
        return {std::move(built.model), std::move(built.diagnostics)};
    } catch (const ImportFailure& failure) {
        return {std::nullopt, {failure.diagnostic_}};
    }
}

}  // namespace archloom
