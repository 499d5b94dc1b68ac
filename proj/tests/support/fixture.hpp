#pragma once

#include <string>
#include <vector>

#include "archloom/model.hpp"
#include "archloom/parser.hpp"

namespace archloom::testing {

std::string test_dir();
std::string read_file_or_die(const std::string& path);

/// The vehreg fixture sources with short file names (business.arch, ...),
/// so spans in diagnostics stay machine-independent.
std::vector<SourceText> vehreg_sources();
std::vector<std::string> vehreg_paths();

/// Parses the fixture; aborts the test run if it stopped building.
ParseResult parse_vehreg();
const ArchitectureModel& vehreg();

/// Raw declarations of the fixture for model-surgery tests.
Declarations vehreg_declarations();

std::string golden_path(const std::string& name);

}  // namespace archloom::testing
