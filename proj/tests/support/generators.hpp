#pragma once

#include <random>
#include <string>

#include "archloom/model.hpp"

namespace archloom::testing {

struct GenOptions {
    int max_elements = 50;
    /// When set, the model stays expressible in the DSL: dialogs carry a
    /// form, every module/method realizes at least one target, at most one
    /// flow per view function, and meta stays empty.
    bool dsl_representable = false;
};

/// Layer-structured random model; always builds successfully.
ArchitectureModel random_model(std::mt19937& rng, const GenOptions& options = {});

/// A structurally valid variation of `model`: renames, attribute changes,
/// element insertions/removals, link flips. May occasionally return an
/// equal model; callers comparing diffs must not assume inequality.
ArchitectureModel mutate(const ArchitectureModel& model, std::mt19937& rng);

std::string random_name(std::mt19937& rng);

}  // namespace archloom::testing
