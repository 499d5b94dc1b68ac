#include "support/fixture.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace archloom::testing {

namespace {

const char* kVehregFiles[] = {"business.arch", "functional.arch",
                              "components.arch", "data.arch"};

}  // namespace

std::string test_dir() { return ARCHLOOM_TEST_DIR; }

std::string read_file_or_die(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) {
        std::cerr << "cannot open " << path << "\n";
        std::abort();
    }
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return buffer.str();
}

std::vector<SourceText> vehreg_sources() {
    std::vector<SourceText> sources;
    for (const char* name : kVehregFiles) {
        sources.push_back(
            {name, read_file_or_die(test_dir() + "/fixtures/vehreg/" + name)});
    }
    return sources;
}

std::vector<std::string> vehreg_paths() {
    std::vector<std::string> paths;
    for (const char* name : kVehregFiles) {
        paths.push_back(test_dir() + "/fixtures/vehreg/" + name);
    }
    return paths;
}

ParseResult parse_vehreg() {
    ParseResult result = parse(vehreg_sources());
    if (!result.model) {
        std::cerr << "vehreg fixture failed to parse:\n";
        for (const Diagnostic& d : result.diagnostics) {
            std::cerr << "  " << render(d) << "\n";
        }
        std::abort();
    }
    return result;
}

const ArchitectureModel& vehreg() {
    static const ParseResult result = parse_vehreg();
    return *result.model;
}

Declarations vehreg_declarations() {
    return parse_declarations(vehreg_sources());
}

std::string golden_path(const std::string& name) {
    return test_dir() + "/goldens/" + name;
}

}  // namespace archloom::testing
