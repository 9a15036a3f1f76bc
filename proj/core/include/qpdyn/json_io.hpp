#pragma once

#include "qpdyn/claims.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace qpdyn {

// All report serialization uses ordered_json with fully deterministic field
// and element order, so identical runs produce byte-identical output.
using Json = nlohmann::ordered_json;

Json to_json(const ExistenceVerdict& v);
Json to_json(const NormValue& n, std::int64_t p);
Json to_json(const FixedPointRecord& r, std::int64_t p);
Json to_json(const FixedPointSet& s, std::int64_t p);
Json to_json(const OrbitFate& f);
Json to_json(const HittingTimeRecord& r);
Json to_json(const SiegelReport& r, std::int64_t p);
Json to_json(const BasinScanResult& r);
Json to_json(const ClaimReport& r);
Json to_json(const SuiteResult& r);

std::string scan_csv(const BasinScanResult& r);
std::string suite_csv(const SuiteResult& r);

}  // namespace qpdyn
