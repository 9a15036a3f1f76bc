#pragma once

#include "qpdyn/basin.hpp"

#include <string>
#include <vector>

namespace qpdyn {

/// One (claim, parameter) instance of the reproduction catalog.
struct CatalogEntry {
    std::string claim_id;
    MapParams params;
};

/// The fixed instance catalog behind `reproduce`; suite is one of
/// "all", "section3", "section4", "section5".
std::vector<CatalogEntry> suite_catalog(const std::string& suite, int precision);

struct SuiteResult {
    std::string suite;
    std::vector<ClaimReport> reports;  // sorted by (claim_id, p, a)
    int failures = 0;
    int skipped = 0;
};

SuiteResult run_suite(const std::string& suite, const ScanConfig& config);

}  // namespace qpdyn
