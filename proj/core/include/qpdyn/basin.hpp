#pragma once

#include "qpdyn/dynamics.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qpdyn {

enum class TailPolicy { ZeroTail, SeededRandomTail };

std::string to_string(TailPolicy t);

/// A finite stand-in for a sphere: one point per unit residue class mod p^k
/// at the sphere's scale, with tails fixed by policy.
struct SampleSet {
    PAdicNumber center;
    std::int64_t log_radius;
    int depth;
    TailPolicy tail;
    std::uint64_t seed;
    std::vector<PAdicNumber> points;  // (p-1) p^{depth-1} of them
};

/// Points center + p^{-e} (u + p^k t) for every unit residue u mod p^k,
/// so that each lies exactly on the sphere of log-radius e.
SampleSet enumerate_sphere(const PAdicNumber& center, std::int64_t log_radius, int depth,
                           TailPolicy tail, std::uint64_t seed = 0x5EED,
                           int precision = PAdicNumber::kDefaultPrecision);

struct HittingTimeRecord {
    PAdicNumber point;
    std::optional<int> time;  // least k >= 0 with f^k(x) in the target
    int bound_used;
    bool undetermined;        // precision ran out before a decision
};

/// First entry time of the orbit into the target ball, searched up to kmax.
/// k = 0 means the point already lies in the target.
HittingTimeRecord hitting_time(const MapParams& params, const PAdicNumber& x, const Ball& target,
                               int kmax);

struct ScanConfig {
    OrbitConfig orbit;
    int depth = 0;  // 0: 3 for p <= 7, 2 for larger p
    int kmax = 100;
    TailPolicy tail = TailPolicy::ZeroTail;
    std::uint64_t seed = 0x5EED;
    int precision = PAdicNumber::kDefaultPrecision;
    int siegel_iters = 25;

    int depth_for(Prime p) const { return depth > 0 ? depth : (p.value() <= 7 ? 3 : 2); }
};

struct BasinScanResult {
    std::vector<std::pair<PAdicNumber, OrbitFate>> fates;
    std::map<std::string, int> counts;  // fate name -> occurrences
};

BasinScanResult basin_scan(const MapParams& params, const std::vector<Sphere>& region,
                           const ScanConfig& config);

enum class RadiusVerdict { InvariantOnSamples, CounterexampleFound, Undetermined };
enum class BoundaryKind { OpenBall, ClosedBall, Undetermined };

std::string to_string(RadiusVerdict v);
std::string to_string(BoundaryKind b);

struct SiegelRadiusResult {
    std::int64_t log_radius;
    RadiusVerdict verdict;
    std::optional<PAdicNumber> counterexample;
};

struct SiegelReport {
    FixedPointRecord fixed_point;
    std::vector<SiegelRadiusResult> per_radius;
    BoundaryKind boundary_conclusion;
};

/// Checks sphere invariance |f(x) - x*| = |x - x*| on samples for each
/// log-radius in [lo, hi]; the boundary verdict combines the boundary-sphere
/// scan with the escape-witness construction where that applies (|a| <= 1).
SiegelReport siegel_scan(const MapParams& params, const FixedPointRecord& fp, std::int64_t lo,
                         std::int64_t hi, const ScanConfig& config);

enum class WitnessStatus { Found, None, Undetermined };

struct EscapeWitness {
    WitnessStatus status;
    std::optional<PAdicNumber> point;  // on the boundary sphere, mapped strictly inside
    std::string note;
};

/// Constructs a point of the unit sphere around an indifferent fixed point
/// that the map sends strictly inside, by solving the boundary quadratic when
/// its discriminant has a square root; None when it provably has none.
EscapeWitness boundary_escape_witness(const MapParams& params, const FixedPointRecord& fp,
                                      int precision = PAdicNumber::kDefaultPrecision);

enum class ClaimStatus { Pass, Fail, Skipped };

std::string to_string(ClaimStatus s);

struct ClaimReport {
    std::string claim_id;
    std::int64_t p = 0;
    std::string a_compact;
    ClaimStatus status = ClaimStatus::Skipped;
    std::string reason;                  // populated for Skipped
    std::map<std::string, int> counts;   // per-fate / per-check tallies
    std::vector<std::pair<std::string, std::string>> witnesses;  // (point, observation)
};

/// Runs one registered claim at the given parameters. Hypothesis violations
/// come back as Skipped with the violated hypothesis named; failures always
/// carry at least one concrete witness.
ClaimReport verify_claim(const std::string& claim_id, const MapParams& params,
                         const ScanConfig& config);

std::vector<std::string> registered_claim_ids();

}  // namespace qpdyn
