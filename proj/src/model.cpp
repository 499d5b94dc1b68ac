#include "archloom/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <tuple>

namespace archloom {

namespace {

constexpr std::array<std::string_view, 5> kLayerNames = {
    "Business", "OperationalService", "Functional", "Component", "Data"};

constexpr std::array<std::string_view, kElementKindCount> kElementKindNames = {
    "BusinessProcess", "BusinessFunction",  "BusinessOperation",
    "OperationalService", "AutomatedFunction", "Dialog",
    "ViewFunction",       "Component",         "Module",
    "Class",              "Method"};

constexpr std::array<std::string_view, kLinkKindCount> kLinkKindNames = {
    "Contains", "Implements", "Covers", "Realizes", "FlowsTo"};

constexpr std::array<std::string_view, kLinkKindCount> kLinkKindVerbs = {
    "Contain", "Implement", "Cover", "Realize", "FlowTo"};

std::tuple<const std::string&, const std::string&, int> link_key(const Link& l) {
    return {l.from, l.to, static_cast<int>(l.kind)};
}

}  // namespace

Layer layer_of(ElementKind kind) {
    switch (kind) {
        case ElementKind::BusinessProcess:
        case ElementKind::BusinessFunction:
        case ElementKind::BusinessOperation:
            return Layer::Business;
        case ElementKind::OperationalService:
        case ElementKind::AutomatedFunction:
            return Layer::OperationalService;
        case ElementKind::Dialog:
        case ElementKind::ViewFunction:
            return Layer::Functional;
        case ElementKind::Component:
        case ElementKind::Module:
            return Layer::Component;
        case ElementKind::Class:
        case ElementKind::Method:
            return Layer::Data;
    }
    return Layer::Business;
}

std::string_view to_string(Layer layer) {
    return kLayerNames[static_cast<int>(layer) - 1];
}

std::string_view to_string(ElementKind kind) {
    return kElementKindNames[static_cast<int>(kind)];
}

std::string_view to_string(LinkKind kind) {
    return kLinkKindNames[static_cast<int>(kind)];
}

std::string_view to_string(Direction direction) {
    return direction == Direction::Up ? "up" : "down";
}

std::optional<ElementKind> element_kind_from(std::string_view name) {
    for (int i = 0; i < kElementKindCount; ++i) {
        if (kElementKindNames[i] == name) return static_cast<ElementKind>(i);
    }
    return std::nullopt;
}

std::optional<LinkKind> link_kind_from(std::string_view name) {
    for (int i = 0; i < kLinkKindCount; ++i) {
        if (kLinkKindNames[i] == name) return static_cast<LinkKind>(i);
    }
    return std::nullopt;
}

bool link_allowed(ElementKind from, ElementKind to, LinkKind kind) {
    using K = ElementKind;
    switch (kind) {
        case LinkKind::Contains:
            switch (from) {
                case K::BusinessProcess: return to == K::BusinessFunction;
                case K::BusinessFunction:
                    return to == K::BusinessFunction || to == K::BusinessOperation;
                case K::OperationalService:
                    return to == K::AutomatedFunction || to == K::Dialog;
                case K::Dialog: return to == K::ViewFunction;
                case K::Component: return to == K::Module || to == K::Class;
                case K::Class: return to == K::Method;
                default: return false;
            }
        case LinkKind::Implements:
            return from == K::OperationalService && to == K::BusinessOperation;
        case LinkKind::Covers:
            return from == K::ViewFunction && to == K::AutomatedFunction;
        case LinkKind::Realizes:
            return (from == K::Module && to == K::ViewFunction) ||
                   (from == K::Method && to == K::Module);
        case LinkKind::FlowsTo:
            return from == K::ViewFunction && to == K::Dialog;
    }
    return false;
}

bool valid_id(std::string_view id) {
    if (id.empty()) return false;
    unsigned char first = static_cast<unsigned char>(id.front());
    if (!std::isalpha(first)) return false;
    return std::all_of(id.begin() + 1, id.end(), [](char c) {
        unsigned char u = static_cast<unsigned char>(c);
        return std::isalnum(u) || c == '_' || c == '.';
    });
}

const std::string* ArchElement::attr(std::string_view key) const {
    auto it = attrs.find(std::string(key));
    return it == attrs.end() ? nullptr : &it->second;
}

const ArchElement* ArchitectureModel::find(std::string_view id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &elements_[it->second];
}

const ArchElement& ArchitectureModel::at(std::string_view id) const {
    const ArchElement* element = find(id);
    if (!element) {
        throw ArchError(make_diagnostic(
            "E101", "unknown element '" + std::string(id) + "'",
            std::string(id)));
    }
    return *element;
}

std::vector<ArchitectureModel::Adjacent> ArchitectureModel::arcs_to_adjacent(
    const std::vector<Arc>& arcs) const {
    std::vector<Adjacent> out;
    out.reserve(arcs.size());
    for (const Arc& arc : arcs) {
        out.push_back({&elements_[arc.element_index], &links_[arc.link_index]});
    }
    return out;
}

std::vector<ArchitectureModel::Adjacent> ArchitectureModel::adjacent(
    std::string_view id, Direction direction) const {
    size_t index = index_.at(std::string_view(at(id).id));
    return arcs_to_adjacent(direction == Direction::Down ? down_[index]
                                                         : up_[index]);
}

std::vector<std::pair<const ArchElement*, LinkKind>>
ArchitectureModel::neighbors(std::string_view id, Direction direction,
                             std::optional<LinkKind> filter) const {
    std::vector<std::pair<const ArchElement*, LinkKind>> out;
    for (const Adjacent& a : adjacent(id, direction)) {
        if (filter && a.link->kind != *filter) continue;
        out.emplace_back(a.element, a.link->kind);
    }
    return out;
}

const ArchElement* ArchitectureModel::parent(std::string_view id) const {
    for (const Adjacent& a : adjacent(id, Direction::Up)) {
        if (a.link->kind == LinkKind::Contains) return a.element;
    }
    return nullptr;
}

std::vector<const ArchElement*> ArchitectureModel::children(
    std::string_view id) const {
    std::vector<const ArchElement*> out;
    for (const Adjacent& a : adjacent(id, Direction::Down)) {
        if (a.link->kind == LinkKind::Contains) out.push_back(a.element);
    }
    std::sort(out.begin(), out.end(),
              [](const ArchElement* a, const ArchElement* b) {
                  if (a->seq >= 0 && b->seq >= 0 && a->seq != b->seq) {
                      return a->seq < b->seq;
                  }
                  return a->id < b->id;
              });
    return out;
}

const ArchElement* ArchitectureModel::enclosing(std::string_view id,
                                                ElementKind kind) const {
    const ArchElement* current = parent(id);
    while (current && current->kind != kind) {
        current = parent(current->id);
    }
    return current;
}

std::vector<const ArchElement*> ArchitectureModel::elements_of_kind(
    ElementKind kind) const {
    std::vector<const ArchElement*> out;
    for (const ArchElement& element : elements_) {
        if (element.kind == kind) out.push_back(&element);
    }
    return out;
}

bool ArchitectureModel::operator==(const ArchitectureModel& other) const {
    if (meta_ != other.meta_) return false;
    if (elements_.size() != other.elements_.size()) return false;
    for (size_t i = 0; i < elements_.size(); ++i) {
        const ArchElement& a = elements_[i];
        const ArchElement& b = other.elements_[i];
        if (a.id != b.id || a.kind != b.kind || a.name != b.name ||
            a.attrs != b.attrs) {
            return false;
        }
    }
    if (links_.size() != other.links_.size()) return false;
    for (size_t i = 0; i < links_.size(); ++i) {
        if (link_key(links_[i]) != link_key(other.links_[i])) return false;
    }
    return true;
}

void ArchitectureModel::build_indexes() {
    index_.clear();
    index_.reserve(elements_.size());
    for (size_t i = 0; i < elements_.size(); ++i) {
        index_.emplace(std::string_view(elements_[i].id), i);
    }
    down_.assign(elements_.size(), {});
    up_.assign(elements_.size(), {});
    for (size_t li = 0; li < links_.size(); ++li) {
        const Link& link = links_[li];
        size_t from = index_.at(std::string_view(link.from));
        size_t to = index_.at(std::string_view(link.to));
        // Contains and FlowsTo descend along the stored direction; the
        // derivation kinds point detail -> abstraction, so they descend
        // against it.
        bool stored_is_down =
            link.kind == LinkKind::Contains || link.kind == LinkKind::FlowsTo;
        size_t down_side = stored_is_down ? from : to;
        size_t up_side = stored_is_down ? to : from;
        down_[down_side].push_back({up_side, li});
        up_[up_side].push_back({down_side, li});
    }
    auto by_id = [this](const Arc& a, const Arc& b) {
        const std::string& ida = elements_[a.element_index].id;
        const std::string& idb = elements_[b.element_index].id;
        if (ida != idb) return ida < idb;
        return a.link_index < b.link_index;
    };
    for (auto& arcs : down_) std::sort(arcs.begin(), arcs.end(), by_id);
    for (auto& arcs : up_) std::sort(arcs.begin(), arcs.end(), by_id);
}

namespace {

void check_element(const ArchElement& element, std::vector<Diagnostic>& out) {
    auto bad = [&](std::string message) {
        out.push_back(make_diagnostic("E004", std::move(message), element.id,
                                      element.src));
    };
    if (!valid_id(element.id)) {
        bad("invalid element id '" + element.id + "'");
    }
    if (element.name.empty()) {
        bad("element '" + element.id + "' has an empty name");
    }
    struct Placement {
        std::string_view key;
        bool (*allowed)(ElementKind);
    };
    static constexpr Placement placements[] = {
        {kAttrForm, [](ElementKind k) { return k == ElementKind::Dialog; }},
        {kAttrKindTag,
         [](ElementKind k) { return k == ElementKind::Component; }},
        {kAttrParams,
         [](ElementKind k) {
             return k == ElementKind::Module || k == ElementKind::Method;
         }},
        {kAttrFlowsExternal,
         [](ElementKind k) { return k == ElementKind::ViewFunction; }},
    };
    for (const Placement& p : placements) {
        if (element.attr(p.key) && !p.allowed(element.kind)) {
            bad("attribute '" + std::string(p.key) + "' is not allowed on " +
                std::string(to_string(element.kind)) + " '" + element.id + "'");
        }
    }
}

}  // namespace

BuildResult build_model(std::vector<ArchElement> elements,
                        std::vector<Link> links, ModelMeta meta) {
    std::vector<Diagnostic> diagnostics;

    std::sort(elements.begin(), elements.end(),
              [](const ArchElement& a, const ArchElement& b) {
                  if (a.id != b.id) return a.id < b.id;
                  return a.seq < b.seq;  // keep first declaration first
              });
    std::vector<ArchElement> unique_elements;
    unique_elements.reserve(elements.size());
    for (ArchElement& element : elements) {
        if (!unique_elements.empty() && unique_elements.back().id == element.id) {
            const ArchElement& first = unique_elements.back();
            std::string message = "duplicate id '" + element.id + "'";
            if (first.src.valid()) {
                message += " (first declared at " + first.src.file + ":" +
                           std::to_string(first.src.line) + ")";
            }
            diagnostics.push_back(make_diagnostic("E001", std::move(message),
                                                  element.id, element.src));
            continue;
        }
        unique_elements.push_back(std::move(element));
    }
    for (const ArchElement& element : unique_elements) {
        check_element(element, diagnostics);
    }

    std::unordered_map<std::string_view, const ArchElement*> by_id;
    by_id.reserve(unique_elements.size());
    for (const ArchElement& element : unique_elements) {
        by_id.emplace(std::string_view(element.id), &element);
    }

    std::vector<Link> resolved;
    resolved.reserve(links.size());
    for (Link& link : links) {
        auto from_it = by_id.find(std::string_view(link.from));
        auto to_it = by_id.find(std::string_view(link.to));
        bool ok = true;
        for (const auto* endpoint : {&link.from, &link.to}) {
            if (by_id.count(std::string_view(*endpoint)) == 0) {
                diagnostics.push_back(make_diagnostic(
                    "E002", "unresolved reference '" + *endpoint + "'",
                    *endpoint, link.src));
                ok = false;
            }
        }
        if (!ok) continue;
        ElementKind from_kind = from_it->second->kind;
        ElementKind to_kind = to_it->second->kind;
        if (!link_allowed(from_kind, to_kind, link.kind)) {
            diagnostics.push_back(make_diagnostic(
                "E003",
                std::string(to_string(from_kind)) + " may not " +
                    std::string(kLinkKindVerbs[static_cast<int>(link.kind)]) +
                    " " + std::string(to_string(to_kind)) + " ('" + link.from +
                    "' -> '" + link.to + "')",
                link.from, link.src));
            continue;
        }
        resolved.push_back(std::move(link));
    }
    std::sort(resolved.begin(), resolved.end(), [](const Link& a, const Link& b) {
        return link_key(a) < link_key(b);
    });
    resolved.erase(std::unique(resolved.begin(), resolved.end(),
                               [](const Link& a, const Link& b) {
                                   return link_key(a) == link_key(b);
                               }),
                   resolved.end());

    // Contains edges must form a forest: single parent, no cycles.
    std::unordered_map<std::string_view, const Link*> contains_parent;
    for (const Link& link : resolved) {
        if (link.kind != LinkKind::Contains) continue;
        auto [it, inserted] =
            contains_parent.emplace(std::string_view(link.to), &link);
        if (!inserted) {
            diagnostics.push_back(make_diagnostic(
                "E005",
                "element '" + link.to + "' has more than one Contains parent ('" +
                    it->second->from + "' and '" + link.from + "')",
                link.to, link.src));
        }
    }
    {
        // Walk parent chains; every node is visited once across all walks.
        std::unordered_map<std::string_view, int> state;  // 1 in-progress, 2 done
        for (const auto& [start, unused] : contains_parent) {
            if (state[start] != 0) continue;
            std::vector<std::string_view> path;
            std::string_view current = start;
            while (true) {
                int& mark = state[current];
                if (mark == 2) break;
                if (mark == 1) {
                    diagnostics.push_back(make_diagnostic(
                        "E005",
                        "Contains cycle involving '" + std::string(current) + "'",
                        std::string(current)));
                    break;
                }
                mark = 1;
                path.push_back(current);
                auto it = contains_parent.find(current);
                if (it == contains_parent.end()) break;
                current = std::string_view(it->second->from);
            }
            for (std::string_view visited : path) state[visited] = 2;
        }
    }

    if (!diagnostics.empty()) {
        sort_diagnostics(diagnostics);
        return {std::nullopt, std::move(diagnostics)};
    }

    ArchitectureModel model;
    model.meta_ = std::move(meta);
    model.elements_ = std::move(unique_elements);
    model.links_ = std::move(resolved);
    model.build_indexes();
    return {std::move(model), {}};
}

}  // namespace archloom
