#pragma once

#include "qpdyn/padic.hpp"
#include "qpdyn/roots.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qpdyn {

/// Parameters of the cubic family f(x) = x^3 + a x^2 over Q_p, the conjugate
/// of the logistic-type map G(x) = (ax)^2 (x + 1) under h(x) = ax.
struct MapParams {
    Prime p;
    PAdicNumber a;  // determinate (regular or exact zero)

    MapParams(Prime prime, PAdicNumber param);
    int working_precision() const;
    NormValue a_norm() const { return a.norm(); }
};

PAdicNumber apply_f(const MapParams& params, const PAdicNumber& x);
PAdicNumber apply_G(const MapParams& params, const PAdicNumber& x);

/// f'(x) = 3x^2 + 2ax, evaluated as x (3x + 2a).
PAdicNumber derivative(const MapParams& params, const PAdicNumber& x);

enum class PointKind { Attractive, Indifferent, Repelling };
enum class WhichFixed { X1, X2, X3 };

std::string to_string(PointKind k);
std::string to_string(WhichFixed w);

struct FixedPointRecord {
    WhichFixed which;
    PAdicNumber value;
    PAdicNumber multiplier;        // f'(x*)
    NormValue multiplier_norm;     // |f'(x*)|, or an upper bound (see flag)
    bool norm_is_upper_bound;      // multiplier vanished to precision
    PointKind kind;
};

struct FixedPointSet {
    std::vector<FixedPointRecord> records;  // X1 always; X2, X3 when they exist
    ExistenceVerdict verdict;               // for sqrt(a^2+4)
    bool existence_undecided;               // precision too low to decide
    std::string note;
};

/// X1 = 0 plus the quadratic pair when sqrt(a^2+4) exists; each classified by
/// its multiplier norm. X2 carries the +branch of the canonical square root.
FixedPointSet fixed_points(const MapParams& params);

/// The kinds of the quadratic fixed-point pair derived from the norm
/// identities |m2 m3| = |9+2a^2| and |m2+m3| = |6+a^2| alone, meaningful
/// even when the pair does not exist in Q_p. Unordered (attractive first).
std::optional<std::pair<PointKind, PointKind>> formal_pair_kinds(const MapParams& params);

/// Condition max(|3x*+a| p^r, p^{2r}) < 1 on the closed log-radius r: when it
/// holds, the closed ball of that radius around an attractive point sits in
/// its basin, and around an indifferent point inside its Siegel disc.
bool contraction_certificate(const MapParams& params, const FixedPointRecord& fp, std::int64_t log_r);

/// Largest closed log-radius the certificate accepts for this fixed point.
std::int64_t certified_log_radius(const MapParams& params, const FixedPointRecord& fp);

/// |f(x)| when forced by |x| alone: |x|^2 max(|x|, |a|) whenever |x| != |a|
/// (strict triangle); empty when |x| = |a| and the digits of x + a matter.
std::optional<NormValue> norm_step_law(const MapParams& params, const NormValue& x_norm);

struct OrbitConfig {
    int max_iter = 200;
    int min_precision = 16;
};

enum class FateKind { Converged, Escaped, SiegelTrapped, Cycle, Undecided };
enum class UndecidedReason { MaxIterations, PrecisionExhausted };

std::string to_string(FateKind k);

struct OrbitFate {
    FateKind kind;
    std::optional<WhichFixed> target;              // Converged / SiegelTrapped
    std::optional<std::int64_t> siegel_log_radius; // radius of the trapping sphere
    std::optional<int> cycle_period;
    std::optional<int> cycle_entry;
    std::optional<UndecidedReason> reason;
    int steps_used = 0;
    std::string certificate;
};

/// Certified orbit classification. Convergence is only declared on entering a
/// contraction-certified ball, escape only once the norm exceeds max(1, |a|)
/// (after which norms cube forever); Siegel trapping on entering a certified
/// ball of an indifferent point. Exact repetition of the truncated state is a
/// cycle of the truncated system.
///
/// The classifier solves for the fixed points once; reuse it when classifying
/// many seeds under the same parameters.
class OrbitClassifier {
public:
    OrbitClassifier(const MapParams& params, OrbitConfig config = {});
    OrbitFate classify(const PAdicNumber& x0) const;
    const FixedPointSet& fixed_point_set() const { return fps_; }

private:
    struct CertifiedBall {
        FixedPointRecord rec;
        Ball ball;
    };
    MapParams params_;
    OrbitConfig config_;
    FixedPointSet fps_;
    std::vector<CertifiedBall> attractive_;
    std::vector<CertifiedBall> indifferent_;
    NormValue threshold_;
};

OrbitFate orbit_fate(const MapParams& params, const PAdicNumber& x0, const OrbitConfig& config = {});

}  // namespace qpdyn
