#include "support/generators.hpp"

#include <cstdlib>
#include <iostream>

namespace archloom::testing {

namespace {

int pick(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(std::mt19937& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

const char* kWords[] = {"order",   "vehicle", "payment", "status",  "check",
                        "message", "profile", "portal",  "booking", "invoice",
                        "session", "record",  "queue",   "form",    "log"};

template <typename T>
const T& pick_one(std::mt19937& rng, const std::vector<T>& items) {
    return items[static_cast<size_t>(pick(rng, 0, static_cast<int>(items.size()) - 1))];
}

ArchitectureModel build_or_die(std::vector<ArchElement> elements,
                               std::vector<Link> links, ModelMeta meta) {
    BuildResult built =
        build_model(std::move(elements), std::move(links), std::move(meta));
    if (!built.model) {
        std::cerr << "generator produced an invalid model:\n";
        for (const Diagnostic& d : built.diagnostics) {
            std::cerr << "  " << render(d) << "\n";
        }
        std::abort();
    }
    return std::move(*built.model);
}

/// Accumulates elements/links while respecting the element budget.
struct Builder {
    std::mt19937& rng;
    GenOptions options;
    std::vector<ArchElement> elements;
    std::vector<Link> links;
    int next_id = 0;

    std::vector<std::string> operations, services, autofn_by_service,
        dialogs, viewfns, components, modules, classes;
    // autofns per service id, parallel vectors
    std::vector<std::pair<std::string, std::string>> autofns;  // (service, af)

    bool budget_left() const {
        return static_cast<int>(elements.size()) < options.max_elements;
    }

    std::string add(ElementKind kind, std::string name,
                    std::map<std::string, std::string> attrs = {}) {
        ArchElement element;
        element.id = "E" + std::to_string(next_id++);
        element.kind = kind;
        element.name = std::move(name);
        element.attrs = std::move(attrs);
        element.seq = static_cast<int>(elements.size());
        element.src.file = "gen.arch";
        element.src.line = element.seq + 1;
        element.src.column = 1;
        element.src.length = 1;
        elements.push_back(element);
        return elements.back().id;
    }

    void link(const std::string& from, const std::string& to, LinkKind kind) {
        links.push_back({from, to, kind, {}});
    }

    void maybe_desc(std::map<std::string, std::string>& attrs) {
        if (!chance(rng, 0.4)) return;
        std::string text = random_name(rng);
        if (chance(rng, 0.3)) text += "\n\n" + random_name(rng);
        attrs[std::string(kAttrDesc)] = std::move(text);
    }

    std::string random_params() {
        std::string out;
        int n = pick(rng, 1, 3);
        for (int i = 0; i < n; ++i) {
            if (!out.empty()) out += ", ";
            out += "Arg" + std::to_string(pick(rng, 0, 9));
        }
        return out;
    }
};

}  // namespace

std::string random_name(std::mt19937& rng) {
    std::string out;
    int words = pick(rng, 1, 3);
    for (int i = 0; i < words; ++i) {
        if (!out.empty()) out += ' ';
        out += kWords[pick(rng, 0, static_cast<int>(std::size(kWords)) - 1)];
    }
    // Sprinkle characters that stress quoting and escaping.
    if (chance(rng, 0.15)) out += " \"q\"";
    if (chance(rng, 0.10)) out += " \\x";
    if (chance(rng, 0.10)) out += "\nsecond line";
    if (chance(rng, 0.03)) out += "\"\"\"";
    return out;
}

ArchitectureModel random_model(std::mt19937& rng, const GenOptions& options) {
    Builder b{rng, options, {}, {}, 0, {}, {}, {}, {}, {}, {}, {}, {}, {}};

    ModelMeta meta;
    if (!options.dsl_representable && chance(rng, 0.5)) {
        meta.name = random_name(rng);
        meta.version = std::to_string(pick(rng, 1, 9));
    }

    if (chance(rng, 0.05)) {
        return build_or_die({}, {}, meta);  // empty model case
    }

    int process_count = pick(rng, 1, 2);
    for (int p = 0; p < process_count && b.budget_left(); ++p) {
        std::string process = b.add(ElementKind::BusinessProcess, random_name(rng));
        int function_count = pick(rng, 1, 3);
        for (int f = 0; f < function_count && b.budget_left(); ++f) {
            std::string function =
                b.add(ElementKind::BusinessFunction, random_name(rng));
            b.link(process, function, LinkKind::Contains);
            if (chance(rng, 0.2) && b.budget_left()) {
                std::string nested =
                    b.add(ElementKind::BusinessFunction, random_name(rng));
                b.link(function, nested, LinkKind::Contains);
            }
            int operation_count = pick(rng, 0, 3);
            for (int o = 0; o < operation_count && b.budget_left(); ++o) {
                std::map<std::string, std::string> attrs;
                b.maybe_desc(attrs);
                std::string operation = b.add(ElementKind::BusinessOperation,
                                              random_name(rng), std::move(attrs));
                b.link(function, operation, LinkKind::Contains);
                b.operations.push_back(operation);
            }
        }
    }

    for (const std::string& operation : b.operations) {
        if (!b.budget_left()) break;
        int service_count = chance(rng, 0.75) ? 1 : (chance(rng, 0.2) ? 2 : 0);
        for (int s = 0; s < service_count && b.budget_left(); ++s) {
            std::string service =
                b.add(ElementKind::OperationalService, random_name(rng));
            b.link(service, operation, LinkKind::Implements);
            b.services.push_back(service);
            int autofn_count = pick(rng, 0, 3);
            for (int a = 0; a < autofn_count && b.budget_left(); ++a) {
                std::string autofn =
                    b.add(ElementKind::AutomatedFunction, random_name(rng));
                b.link(service, autofn, LinkKind::Contains);
                b.autofns.emplace_back(service, autofn);
            }
            int dialog_count = pick(rng, 0, 2);
            for (int d = 0; d < dialog_count && b.budget_left(); ++d) {
                std::map<std::string, std::string> attrs;
                if (options.dsl_representable || chance(rng, 0.8)) {
                    attrs[std::string(kAttrForm)] = random_name(rng);
                }
                std::string dialog = b.add(ElementKind::Dialog, random_name(rng),
                                           std::move(attrs));
                b.link(service, dialog, LinkKind::Contains);
                b.dialogs.push_back(dialog);
                int viewfn_count = pick(rng, 0, 3);
                for (int v = 0; v < viewfn_count && b.budget_left(); ++v) {
                    std::map<std::string, std::string> attrs2;
                    b.maybe_desc(attrs2);
                    bool external_flow = chance(rng, 0.15);
                    if (external_flow) {
                        attrs2[std::string(kAttrFlowsExternal)] = random_name(rng);
                    }
                    std::string viewfn = b.add(ElementKind::ViewFunction,
                                               random_name(rng), std::move(attrs2));
                    b.link(dialog, viewfn, LinkKind::Contains);
                    b.viewfns.push_back(viewfn);
                    if (chance(rng, 0.7)) {
                        // cover an automated function of the same service
                        std::vector<std::string> own;
                        for (const auto& [svc, af] : b.autofns) {
                            if (svc == service) own.push_back(af);
                        }
                        if (!own.empty()) {
                            b.link(viewfn, pick_one(rng, own), LinkKind::Covers);
                        }
                    }
                    if (!external_flow && chance(rng, 0.3) && !b.dialogs.empty()) {
                        b.link(viewfn, pick_one(rng, b.dialogs), LinkKind::FlowsTo);
                    }
                }
            }
        }
    }

    int component_count = pick(rng, 0, 3);
    for (int c = 0; c < component_count && b.budget_left(); ++c) {
        std::map<std::string, std::string> attrs;
        attrs[std::string(kAttrKindTag)] =
            chance(rng, 0.8) ? "subsystem" : "external";
        std::string component =
            b.add(ElementKind::Component, random_name(rng), std::move(attrs));
        b.components.push_back(component);
        int module_count = pick(rng, 0, 4);
        for (int m = 0; m < module_count && b.budget_left(); ++m) {
            std::map<std::string, std::string> attrs2;
            if (chance(rng, 0.5)) {
                attrs2[std::string(kAttrParams)] = b.random_params();
            }
            b.maybe_desc(attrs2);
            bool orphan = !options.dsl_representable && chance(rng, 0.15);
            if (b.viewfns.empty() && options.dsl_representable) break;
            std::string module = b.add(ElementKind::Module, "", std::move(attrs2));
            // modules have no display name of their own
            b.elements.back().name = b.elements.back().id;
            b.link(component, module, LinkKind::Contains);
            b.modules.push_back(module);
            if (!orphan && !b.viewfns.empty()) {
                int targets = pick(rng, 1, 2);
                for (int t = 0; t < targets; ++t) {
                    b.link(module, pick_one(rng, b.viewfns), LinkKind::Realizes);
                }
            }
        }
        int class_count = pick(rng, 0, 2);
        for (int k = 0; k < class_count && b.budget_left(); ++k) {
            std::string klass = b.add(ElementKind::Class, random_name(rng));
            b.link(component, klass, LinkKind::Contains);
            b.classes.push_back(klass);
            int method_count = pick(rng, 0, 3);
            for (int m = 0; m < method_count && b.budget_left(); ++m) {
                std::map<std::string, std::string> attrs2;
                if (chance(rng, 0.5)) {
                    attrs2[std::string(kAttrParams)] = b.random_params();
                }
                b.maybe_desc(attrs2);
                bool orphan = !options.dsl_representable && chance(rng, 0.15);
                if (b.modules.empty() && options.dsl_representable) break;
                std::string method = b.add(ElementKind::Method, "", std::move(attrs2));
                b.elements.back().name = b.elements.back().id;
                b.link(klass, method, LinkKind::Contains);
                if (!orphan && !b.modules.empty()) {
                    int targets = pick(rng, 1, 2);
                    for (int t = 0; t < targets; ++t) {
                        b.link(method, pick_one(rng, b.modules), LinkKind::Realizes);
                    }
                }
            }
        }
    }

    return build_or_die(std::move(b.elements), std::move(b.links),
                        std::move(meta));
}

ArchitectureModel mutate(const ArchitectureModel& model, std::mt19937& rng) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::vector<ArchElement> elements = model.elements();
        std::vector<Link> links = model.links();
        int edits = pick(rng, 1, 3);
        for (int e = 0; e < edits; ++e) {
            int op = pick(rng, 0, 4);
            switch (op) {
                case 0: {  // rename
                    if (elements.empty()) break;
                    ArchElement& victim = elements[static_cast<size_t>(
                        pick(rng, 0, static_cast<int>(elements.size()) - 1))];
                    victim.name += " v2";
                    break;
                }
                case 1: {  // attribute change
                    if (elements.empty()) break;
                    ArchElement& victim = elements[static_cast<size_t>(
                        pick(rng, 0, static_cast<int>(elements.size()) - 1))];
                    auto key = std::string(kAttrDesc);
                    if (victim.attrs.count(key)) {
                        victim.attrs.erase(key);
                    } else {
                        victim.attrs[key] = "changed";
                    }
                    break;
                }
                case 2: {  // remove an element and its incident links
                    if (elements.empty()) break;
                    size_t index = static_cast<size_t>(
                        pick(rng, 0, static_cast<int>(elements.size()) - 1));
                    std::string id = elements[index].id;
                    elements.erase(elements.begin() +
                                   static_cast<std::ptrdiff_t>(index));
                    std::erase_if(links, [&](const Link& l) {
                        return l.from == id || l.to == id;
                    });
                    break;
                }
                case 3: {  // add a fresh business process
                    ArchElement element;
                    element.id = "ADDED" + std::to_string(pick(rng, 0, 9999));
                    element.kind = ElementKind::BusinessProcess;
                    element.name = random_name(rng);
                    elements.push_back(std::move(element));
                    break;
                }
                case 4: {  // drop a random link
                    if (links.empty()) break;
                    size_t index = static_cast<size_t>(
                        pick(rng, 0, static_cast<int>(links.size()) - 1));
                    links.erase(links.begin() +
                                static_cast<std::ptrdiff_t>(index));
                    break;
                }
            }
        }
        BuildResult rebuilt =
            build_model(std::move(elements), std::move(links), model.meta());
        if (rebuilt.model) return std::move(*rebuilt.model);
    }
    return model;  // give up; identity is a legal mutation
}

}  // namespace archloom::testing
