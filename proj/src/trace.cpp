#include "archloom/trace.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "archloom/validator.hpp"

namespace archloom {

namespace {

using ordered_json = nlohmann::ordered_json;

bool follow(const Link& link, bool include_flows) {
    return include_flows || link.kind != LinkKind::FlowsTo;
}

/// Multi-source BFS closure over adjacent(); returns ids with depths.
std::unordered_map<std::string, int> closure(
    const ArchitectureModel& model, const std::vector<std::string>& roots,
    Direction direction, bool include_flows) {
    std::unordered_map<std::string, int> depth;
    std::deque<std::string> frontier;
    for (const std::string& root : roots) {
        if (depth.emplace(root, 0).second) frontier.push_back(root);
    }
    while (!frontier.empty()) {
        std::string current = std::move(frontier.front());
        frontier.pop_front();
        int next_depth = depth.at(current) + 1;
        for (const auto& step : model.adjacent(current, direction)) {
            if (!follow(*step.link, include_flows)) continue;
            if (depth.emplace(step.element->id, next_depth).second) {
                frontier.push_back(step.element->id);
            }
        }
    }
    return depth;
}

}  // namespace

bool TraceResult::contains(std::string_view id) const {
    return std::any_of(nodes.begin(), nodes.end(),
                       [&](const TraceNode& n) { return n.id == id; });
}

TraceResult trace(const ArchitectureModel& model, std::string_view id,
                  Direction direction, TraceOptions options) {
    const ArchElement& root = model.at(id);

    TraceResult result;
    result.root = root.id;
    result.direction = direction;

    std::unordered_map<std::string_view, int> depth;
    std::deque<std::string_view> frontier;
    depth.emplace(std::string_view(root.id), 0);
    frontier.push_back(root.id);
    std::set<TraceEdge> edges;
    while (!frontier.empty()) {
        std::string_view current = frontier.front();
        frontier.pop_front();
        int current_depth = depth.at(current);
        bool at_limit = options.max_depth && current_depth >= *options.max_depth;
        for (const auto& step : model.adjacent(current, direction)) {
            if (!follow(*step.link, options.include_flows)) continue;
            auto it = depth.find(std::string_view(step.element->id));
            if (at_limit) {
                if (it == depth.end()) result.truncated = true;
                continue;
            }
            if (it == depth.end()) {
                depth.emplace(std::string_view(step.element->id),
                              current_depth + 1);
                frontier.push_back(step.element->id);
            }
            edges.insert(
                {step.link->from, step.link->to, step.link->kind});
        }
    }

    for (const auto& [node_id, node_depth] : depth) {
        result.nodes.push_back({std::string(node_id), node_depth,
                                layer_of(model.at(node_id).kind)});
    }
    std::sort(result.nodes.begin(), result.nodes.end(),
              [](const TraceNode& a, const TraceNode& b) { return a.id < b.id; });
    result.edges.assign(edges.begin(), edges.end());
    return result;
}

std::set<std::string> impact(const ArchitectureModel& model,
                             const std::set<std::string>& seeds) {
    std::vector<std::string> roots;
    roots.reserve(seeds.size());
    for (const std::string& seed : seeds) {
        roots.push_back(model.at(seed).id);
    }
    auto down = closure(model, roots, Direction::Down, false);
    std::vector<std::string> derived;
    derived.reserve(down.size());
    for (auto& [id, unused] : down) derived.push_back(id);
    auto up = closure(model, derived, Direction::Up, false);
    std::set<std::string> out;
    for (auto& [id, unused] : up) out.insert(id);
    return out;
}

CoverageReport coverage(const ArchitectureModel& model) {
    CoverageReport report;
    for (int ordinal = 1; ordinal <= 5; ++ordinal) {
        report.layers[static_cast<Layer>(ordinal)] = {};
    }
    for (const ArchElement& element : model.elements()) {
        ++report.layers[layer_of(element.kind)].total;
    }

    // Orphan/gap classification mirrors the validator's W rules so the two
    // reports always agree.
    static const std::set<std::string_view> kOrphanCodes = {"W104", "W105",
                                                            "W108"};
    static const std::set<std::string_view> kGapCodes = {
        "W101", "W102", "W103", "W106", "W107", "W109"};
    const std::vector<Diagnostic> diagnostics = validate(model);
    std::unordered_map<std::string_view, int> flags;  // 1 gap, 2 orphan
    for (const Diagnostic& diagnostic : diagnostics) {
        int& flag = flags[std::string_view(diagnostic.element)];
        if (kOrphanCodes.count(diagnostic.code)) flag |= 2;
        if (kGapCodes.count(diagnostic.code)) flag |= 1;
    }
    for (const auto& [id, flag] : flags) {
        if (flag == 0) continue;
        LayerCoverage& layer = report.layers[layer_of(model.at(id).kind)];
        if (flag & 2) {
            ++layer.orphans;
        } else {
            ++layer.gaps;
        }
    }

    for (const ArchElement* operation :
         model.elements_of_kind(ElementKind::BusinessOperation)) {
        bool has_service =
            !model.neighbors(operation->id, Direction::Down, LinkKind::Implements)
                 .empty();
        if (has_service) ++report.chains_total;
        auto reach = closure(model, {operation->id}, Direction::Down, false);
        for (const auto& [id, unused] : reach) {
            if (model.at(id).kind == ElementKind::Method) {
                ++report.chains_complete;
                break;
            }
        }
    }
    return report;
}

namespace {

struct ElementFacts {
    const ArchElement* element;
    std::vector<TraceEdge> incident;
};

std::unordered_map<std::string_view, ElementFacts> facts_of(
    const ArchitectureModel& model) {
    std::unordered_map<std::string_view, ElementFacts> facts;
    for (const ArchElement& element : model.elements()) {
        facts[std::string_view(element.id)].element = &element;
    }
    for (const Link& link : model.links()) {
        TraceEdge edge{link.from, link.to, link.kind};
        facts[std::string_view(link.from)].incident.push_back(edge);
        facts[std::string_view(link.to)].incident.push_back(edge);
    }
    for (auto& [id, entry] : facts) {
        std::sort(entry.incident.begin(), entry.incident.end());
    }
    return facts;
}

}  // namespace

ModelDiff diff(const ArchitectureModel& old_model,
               const ArchitectureModel& new_model) {
    ModelDiff result;
    auto old_facts = facts_of(old_model);
    auto new_facts = facts_of(new_model);

    for (const auto& [id, entry] : new_facts) {
        auto it = old_facts.find(id);
        if (it == old_facts.end()) {
            result.added.insert(std::string(id));
            continue;
        }
        const ArchElement& before = *it->second.element;
        const ArchElement& after = *entry.element;
        if (before.kind != after.kind || before.name != after.name ||
            before.attrs != after.attrs ||
            it->second.incident != entry.incident) {
            result.modified.insert(std::string(id));
        }
    }
    for (const auto& [id, entry] : old_facts) {
        if (!new_facts.count(id)) result.removed.insert(std::string(id));
    }

    std::set<std::string> new_seeds = result.added;
    new_seeds.insert(result.modified.begin(), result.modified.end());
    if (!new_seeds.empty()) {
        auto reached = impact(new_model, new_seeds);
        result.impact.insert(reached.begin(), reached.end());
    }
    if (!result.removed.empty()) {
        auto reached = impact(old_model, result.removed);
        result.impact.insert(reached.begin(), reached.end());
    }
    return result;
}

std::string to_json(const TraceResult& result) {
    ordered_json root;
    root["root"] = result.root;
    root["direction"] = to_string(result.direction);
    root["truncated"] = result.truncated;
    ordered_json nodes = ordered_json::array();
    for (const TraceNode& node : result.nodes) {
        nodes.push_back({{"id", node.id},
                         {"depth", node.depth},
                         {"layer", to_string(node.layer)}});
    }
    root["nodes"] = std::move(nodes);
    ordered_json edges = ordered_json::array();
    for (const TraceEdge& edge : result.edges) {
        edges.push_back({{"from", edge.from},
                         {"to", edge.to},
                         {"kind", to_string(edge.kind)}});
    }
    root["edges"] = std::move(edges);
    return root.dump(2) + "\n";
}

std::string to_json(const CoverageReport& report) {
    ordered_json layers;
    for (const auto& [layer, counts] : report.layers) {
        layers[std::string(to_string(layer))] = {{"total", counts.total},
                                                 {"orphans", counts.orphans},
                                                 {"gaps", counts.gaps}};
    }
    ordered_json root;
    root["layers"] = std::move(layers);
    root["chains_complete"] = report.chains_complete;
    root["chains_total"] = report.chains_total;
    return root.dump(2) + "\n";
}

std::string to_json(const ModelDiff& d) {
    auto array_of = [](const std::set<std::string>& ids) {
        return ordered_json(ids);
    };
    ordered_json root;
    root["added"] = array_of(d.added);
    root["removed"] = array_of(d.removed);
    root["modified"] = array_of(d.modified);
    root["impact"] = array_of(d.impact);
    return root.dump(2) + "\n";
}

}  // namespace archloom
