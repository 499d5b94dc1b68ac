#pragma once

#include <string>
#include <vector>

namespace archloom::testing {

struct SuiteResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string detail;  // first failure, for the report line

    bool ok() const { return failures == 0; }
    void fail(const std::string& message) {
        ++failures;
        if (detail.empty()) detail = message;
    }
};

// Randomized suites use the given seed; counts below are the defaults the
// acceptance run uses.
SuiteResult prop_neighbors_inversion(unsigned seed = 1001, int cases = 1000);
SuiteResult prop_link_table_closure();  // exhaustive 11 x 11 x 5
SuiteResult prop_canonical_roundtrip(unsigned seed = 1003, int cases = 1000);
SuiteResult prop_dsl_roundtrip(unsigned seed = 1004, int cases = 1000);
SuiteResult prop_trace_matches_oracle(unsigned seed = 1005, int cases = 1000);
SuiteResult prop_impact_monotone(unsigned seed = 1006, int cases = 1000);
SuiteResult prop_diff_laws(unsigned seed = 1007, int cases = 1000);
SuiteResult prop_parser_fuzz(unsigned seed = 1008, int cases = 1000);
SuiteResult prop_validator_deletion(unsigned seed = 1009, int cases = 500);
SuiteResult prop_docgen_laws(unsigned seed = 1010, int cases = 500);

std::vector<SuiteResult> run_all_property_suites();

}  // namespace archloom::testing
