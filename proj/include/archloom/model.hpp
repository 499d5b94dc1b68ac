#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "archloom/diagnostics.hpp"

namespace archloom {

/// The five architectural representations, ordered from abstraction (1) to
/// detail (5).
enum class Layer {
    Business = 1,
    OperationalService = 2,
    Functional = 3,
    Component = 4,
    Data = 5,
};

enum class ElementKind {
    BusinessProcess,
    BusinessFunction,
    BusinessOperation,
    OperationalService,
    AutomatedFunction,
    Dialog,
    ViewFunction,
    Component,
    Module,
    Class,
    Method,
};

/// Stored link kinds. Contains points parent -> child, FlowsTo follows the
/// control transfer, and Implements/Covers/Realizes point from the more
/// detailed element to the less detailed one it justifies.
enum class LinkKind {
    Contains,
    Implements,
    Covers,
    Realizes,
    FlowsTo,
};

inline constexpr int kElementKindCount = 11;
inline constexpr int kLinkKindCount = 5;

Layer layer_of(ElementKind kind);

std::string_view to_string(Layer layer);
std::string_view to_string(ElementKind kind);
std::string_view to_string(LinkKind kind);

std::optional<ElementKind> element_kind_from(std::string_view name);
std::optional<LinkKind> link_kind_from(std::string_view name);

/// True when (from, to, kind) is one of the legal endpoint combinations.
bool link_allowed(ElementKind from, ElementKind to, LinkKind kind);

/// True for tokens matching [A-Za-z][A-Za-z0-9_.]*.
bool valid_id(std::string_view id);

// Recognized attribute keys. The attribute map is open; these are the keys
// the toolchain itself reads and the ones with placement rules.
inline constexpr std::string_view kAttrDesc = "desc";
inline constexpr std::string_view kAttrForm = "form";
inline constexpr std::string_view kAttrParams = "params";
inline constexpr std::string_view kAttrKindTag = "kind-tag";
inline constexpr std::string_view kAttrFlowsExternal = "flows-external";

struct ArchElement {
    std::string id;
    ElementKind kind = ElementKind::BusinessProcess;
    std::string name;
    std::map<std::string, std::string> attrs;
    SourceSpan src;
    int seq = -1;  // declaration order; -1 when unknown (imported models)

    const std::string* attr(std::string_view key) const;
};

struct Link {
    std::string from;
    std::string to;
    LinkKind kind = LinkKind::Contains;
    SourceSpan src;
};

struct ModelMeta {
    std::string name;
    std::string version;

    bool operator==(const ModelMeta&) const = default;
};

enum class Direction { Up, Down };

std::string_view to_string(Direction direction);

struct BuildResult;

/// Immutable resolved graph of elements and links. Instances are only
/// produced by build_model and are safe to read from any number of threads.
class ArchitectureModel {
public:
    ArchitectureModel() = default;

    const ModelMeta& meta() const { return meta_; }

    /// Elements sorted by id.
    const std::vector<ArchElement>& elements() const { return elements_; }

    /// Links deduplicated and sorted by (from, to, kind).
    const std::vector<Link>& links() const { return links_; }

    const ArchElement* find(std::string_view id) const;

    /// Like find, but throws ArchError with code E101 for unknown ids.
    const ArchElement& at(std::string_view id) const;

    struct Adjacent {
        const ArchElement* element = nullptr;
        const Link* link = nullptr;
    };

    /// One derivation step. Down is toward detail: Contains children, flow
    /// targets, and the Implements/Covers/Realizes sources that point at
    /// this element. Up is the exact inverse. Sorted by element id.
    std::vector<Adjacent> adjacent(std::string_view id, Direction direction) const;

    /// adjacent() narrowed to (element, kind) pairs, optionally filtered.
    std::vector<std::pair<const ArchElement*, LinkKind>> neighbors(
        std::string_view id, Direction direction,
        std::optional<LinkKind> filter = {}) const;

    /// Contains parent, or null for roots.
    const ArchElement* parent(std::string_view id) const;

    /// Contains children in declaration order (id order when unknown).
    std::vector<const ArchElement*> children(std::string_view id) const;

    /// Nearest enclosing Contains ancestor of the given kind, if any.
    const ArchElement* enclosing(std::string_view id, ElementKind kind) const;

    std::vector<const ArchElement*> elements_of_kind(ElementKind kind) const;

    /// Structural equality: element set (id, kind, name, attrs), link set
    /// (from, to, kind), and meta. Source spans and declaration order are
    /// not part of a model's identity.
    bool operator==(const ArchitectureModel& other) const;

private:
    friend BuildResult build_model(std::vector<ArchElement> elements,
                                   std::vector<Link> links, ModelMeta meta);

    struct Arc {
        size_t element_index;
        size_t link_index;
    };

    void build_indexes();
    std::vector<Adjacent> arcs_to_adjacent(const std::vector<Arc>& arcs) const;

    ModelMeta meta_;
    std::vector<ArchElement> elements_;  // sorted by id
    std::vector<Link> links_;            // sorted by (from, to, kind)
    std::unordered_map<std::string_view, size_t> index_;
    std::vector<std::vector<Arc>> down_;
    std::vector<std::vector<Arc>> up_;
};

struct BuildResult {
    std::optional<ArchitectureModel> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

/// Validates and seals a model. All violations are reported, not just the
/// first: E001 duplicate id, E002 unresolved link endpoint, E003 illegal
/// (from, to, kind) combination, E004 invalid element (empty name, bad id
/// token, misplaced attribute), E005 broken Contains forest (two parents or
/// a cycle). The model is present iff no diagnostic was produced.
BuildResult build_model(std::vector<ArchElement> elements,
                        std::vector<Link> links, ModelMeta meta = {});

}  // namespace archloom
