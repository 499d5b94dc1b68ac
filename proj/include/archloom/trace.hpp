#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "archloom/model.hpp"

namespace archloom {

struct TraceNode {
    std::string id;
    int depth = 0;
    Layer layer = Layer::Business;

    auto operator<=>(const TraceNode&) const = default;
};

struct TraceEdge {
    std::string from;
    std::string to;
    LinkKind kind = LinkKind::Contains;

    auto operator<=>(const TraceEdge&) const = default;
};

/// Breadth-first derivation closure. Depths are minimal hop counts from the
/// root (depth 0); edges keep their stored orientation.
struct TraceResult {
    std::string root;
    Direction direction = Direction::Down;
    bool truncated = false;
    std::vector<TraceNode> nodes;  // sorted by id
    std::vector<TraceEdge> edges;  // sorted by (from, to, kind)

    bool contains(std::string_view id) const;
};

struct TraceOptions {
    std::optional<int> max_depth;  // nullopt = unlimited
    bool include_flows = false;    // FlowsTo is peer navigation, off by default
};

/// Throws ArchError E101 for unknown ids.
TraceResult trace(const ArchitectureModel& model, std::string_view id,
                  Direction direction, TraceOptions options = {});

/// Everything invalidated by a change to the seeds: the derivation closure
/// below them plus, for each element of that closure, the abstractions it
/// was derived to satisfy. Includes the seeds. E101 for unknown seeds.
std::set<std::string> impact(const ArchitectureModel& model,
                             const std::set<std::string>& seeds);

struct LayerCoverage {
    int total = 0;
    int orphans = 0;
    int gaps = 0;

    bool operator==(const LayerCoverage&) const = default;
};

/// Per-layer gap/orphan tallies (elements, counted once each; an element
/// that is both orphaned and gapped counts as an orphan) plus the
/// operation-to-method chain statistics.
struct CoverageReport {
    std::map<Layer, LayerCoverage> layers;
    int chains_complete = 0;  // BusinessOperations reaching >=1 Method
    int chains_total = 0;     // BusinessOperations with >=1 service
};

CoverageReport coverage(const ArchitectureModel& model);

/// Element-level difference between two model versions, keyed by id. An id
/// is modified when its kind, name, attrs or incident link set changed.
/// `impact` is computed on the new model for added/modified ids and on the
/// old model for removed ids.
struct ModelDiff {
    std::set<std::string> added;
    std::set<std::string> removed;
    std::set<std::string> modified;
    std::set<std::string> impact;
};

ModelDiff diff(const ArchitectureModel& old_model,
               const ArchitectureModel& new_model);

std::string to_json(const TraceResult& result);
std::string to_json(const CoverageReport& report);
std::string to_json(const ModelDiff& d);

}  // namespace archloom
