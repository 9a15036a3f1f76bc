#include "qpdyn/basin.hpp"

#include <random>
#include <sstream>

namespace qpdyn {

std::string to_string(TailPolicy t) {
    return t == TailPolicy::ZeroTail ? "zero_tail" : "seeded_random_tail";
}

std::string to_string(RadiusVerdict v) {
    switch (v) {
        case RadiusVerdict::InvariantOnSamples: return "invariant_on_samples";
        case RadiusVerdict::CounterexampleFound: return "counterexample_found";
        case RadiusVerdict::Undetermined: return "undetermined";
    }
    return "?";
}

std::string to_string(BoundaryKind b) {
    switch (b) {
        case BoundaryKind::OpenBall: return "open_ball";
        case BoundaryKind::ClosedBall: return "closed_ball";
        case BoundaryKind::Undetermined: return "undetermined";
    }
    return "?";
}

std::string to_string(ClaimStatus s) {
    switch (s) {
        case ClaimStatus::Pass: return "pass";
        case ClaimStatus::Fail: return "fail";
        case ClaimStatus::Skipped: return "skipped";
    }
    return "?";
}

namespace {

constexpr int kTailDigits = 8;

BigInt random_tail(std::int64_t p, std::uint64_t seed, const BigInt& u) {
    // mt19937_64 is bit-for-bit specified by the standard, so tails are
    // reproducible across platforms; the slight modulo bias is irrelevant.
    std::uint64_t mix = seed ^ (static_cast<std::uint64_t>(u % 0x7fffffff) * 0x9E3779B97F4A7C15ULL);
    std::mt19937_64 gen(mix);
    BigInt t = 0;
    BigInt pk = 1;
    for (int i = 0; i < kTailDigits; ++i) {
        t += BigInt(gen() % static_cast<std::uint64_t>(p)) * pk;
        pk *= p;
    }
    return t;
}

}  // namespace

SampleSet enumerate_sphere(const PAdicNumber& center, std::int64_t log_radius, int depth,
                           TailPolicy tail, std::uint64_t seed, int precision) {
    if (depth < 1) throw std::invalid_argument("enumerate_sphere: depth must be >= 1");
    std::int64_t p = center.prime().value();
    SampleSet out{center, log_radius, depth, tail, seed, {}};
    BigInt pk = big_pow(p, depth);
    for (BigInt u = 1; u < pk; ++u) {
        if (u % p == 0) continue;
        BigInt scaled = u;
        if (tail == TailPolicy::SeededRandomTail) scaled += pk * random_tail(p, seed, u);
        PAdicNumber delta =
            log_radius <= 0
                ? PAdicNumber::from_rational(scaled * big_pow(p, -log_radius), 1, center.prime(),
                                             precision)
                : PAdicNumber::from_rational(scaled, big_pow(p, log_radius), center.prime(),
                                             precision);
        out.points.push_back(center + delta);
    }
    return out;
}

HittingTimeRecord hitting_time(const MapParams& params, const PAdicNumber& x, const Ball& target,
                               int kmax) {
    // Once the norm clears every scale in sight it grows monotonically and the
    // orbit can never re-enter the target.
    NormValue high_cut = NormValue::max(NormValue::one(), params.a_norm());
    high_cut = NormValue::max(high_cut, NormValue::pow(target.closed_log_radius));
    if (!target.center.is_exact_zero()) high_cut = NormValue::max(high_cut, target.center.norm());

    // Symmetrically, a norm strictly inside the contraction ball of 0 shrinks
    // forever; if the target center's own norm exceeds the target radius, the
    // distance is then pinned at |center| and the orbit can never enter.
    NormValue a_norm = params.a_norm();
    std::int64_t shrink_exp = a_norm > NormValue::one() ? -a_norm.exponent() - 1 : -1;
    NormValue shrink_cut = NormValue::pow(shrink_exp);
    bool center_excludes_small = !target.center.is_exact_zero() &&
                                 target.center.norm() > NormValue::pow(target.closed_log_radius);

    PAdicNumber cur = x;
    for (int k = 0; k <= kmax; ++k) {
        try {
            if (target.contains(cur)) return HittingTimeRecord{x, k, kmax, false};
        } catch (const IndeterminateError&) {
            return HittingTimeRecord{x, std::nullopt, kmax, true};
        }
        if (cur.is_indeterminate()) return HittingTimeRecord{x, std::nullopt, kmax, true};
        if (cur.is_regular() && cur.norm() > high_cut) break;
        if (center_excludes_small &&
            (cur.is_exact_zero() ||
             (cur.is_regular() && cur.norm() <= shrink_cut && cur.norm() < target.center.norm()))) {
            break;
        }
        cur = apply_f(params, cur);
    }
    return HittingTimeRecord{x, std::nullopt, kmax, false};
}

BasinScanResult basin_scan(const MapParams& params, const std::vector<Sphere>& region,
                           const ScanConfig& config) {
    BasinScanResult out;
    OrbitClassifier classifier(params, config.orbit);
    for (const Sphere& s : region) {
        SampleSet samples = enumerate_sphere(s.center, s.log_radius, config.depth_for(params.p),
                                             config.tail, config.seed, config.precision);
        for (const PAdicNumber& pt : samples.points) {
            OrbitFate fate = classifier.classify(pt);
            out.counts[to_string(fate.kind)]++;
            out.fates.emplace_back(pt, fate);
        }
    }
    return out;
}

namespace {

// One sphere's invariance under f, sampled: every iterate must stay at the
// same distance from the fixed point.
SiegelRadiusResult scan_radius(const MapParams& params, const FixedPointRecord& fp,
                               std::int64_t log_radius, const ScanConfig& config) {
    SampleSet samples = enumerate_sphere(fp.value, log_radius, config.depth_for(params.p),
                                         config.tail, config.seed, config.precision);
    for (const PAdicNumber& pt : samples.points) {
        PAdicNumber cur = pt;
        for (int i = 0; i < config.siegel_iters; ++i) {
            cur = apply_f(params, cur);
            PAdicNumber d = cur - fp.value;
            if (d.is_exact_zero()) return {log_radius, RadiusVerdict::CounterexampleFound, pt};
            if (d.is_indeterminate()) {
                if (-d.zero_bound() < log_radius) {
                    return {log_radius, RadiusVerdict::CounterexampleFound, pt};
                }
                return {log_radius, RadiusVerdict::Undetermined, pt};
            }
            if (-d.valuation() != log_radius) {
                return {log_radius, RadiusVerdict::CounterexampleFound, pt};
            }
        }
    }
    return {log_radius, RadiusVerdict::InvariantOnSamples, std::nullopt};
}

}  // namespace

SiegelReport siegel_scan(const MapParams& params, const FixedPointRecord& fp, std::int64_t lo,
                         std::int64_t hi, const ScanConfig& config) {
    SiegelReport report{fp, {}, BoundaryKind::Undetermined};
    for (std::int64_t e = lo; e <= hi; ++e) {
        report.per_radius.push_back(scan_radius(params, fp, e, config));
    }

    NormValue na = params.a_norm();
    std::int64_t boundary = na > NormValue::one() ? -na.exponent() : 0;
    std::optional<RadiusVerdict> at_boundary;
    for (const auto& r : report.per_radius) {
        if (r.log_radius == boundary) at_boundary = r.verdict;
    }
    if (at_boundary && *at_boundary == RadiusVerdict::CounterexampleFound) {
        report.boundary_conclusion = BoundaryKind::OpenBall;
        return report;
    }
    if (fp.kind == PointKind::Indifferent && !(na > NormValue::one())) {
        EscapeWitness w = boundary_escape_witness(params, fp, config.precision);
        switch (w.status) {
            case WitnessStatus::Found: report.boundary_conclusion = BoundaryKind::OpenBall; break;
            case WitnessStatus::None: report.boundary_conclusion = BoundaryKind::ClosedBall; break;
            case WitnessStatus::Undetermined: report.boundary_conclusion = BoundaryKind::Undetermined; break;
        }
    }
    return report;
}

EscapeWitness boundary_escape_witness(const MapParams& params, const FixedPointRecord& fp,
                                      int precision) {
    if (fp.kind != PointKind::Indifferent) {
        throw std::invalid_argument("boundary_escape_witness: fixed point must be indifferent");
    }
    NormValue na = params.a_norm();
    if (na > NormValue::one()) {
        throw std::invalid_argument("boundary_escape_witness: requires |a| <= 1");
    }

    // Points x = x* + z of the unit sphere move strictly inward exactly when
    // |Q(z)| < 1 for Q(z) = z^2 + (3x* + a) z + (3 - a x*), since
    // |f(x) - x*| = |z| |Q(z)|. For a unit discriminant this needs a root of
    // Q mod p (then a Hensel root of Q itself certifies the escape); when the
    // discriminant is small, Q has a double root mod p and z = -(3x*+a)/2
    // already gives |Q(z)| = |disc/4| < 1 whether or not Q has a root in Q_p.
    int n = precision;
    PAdicNumber three = PAdicNumber::from_integer(3, params.p, n);
    PAdicNumber b = three * fp.value + params.a;
    PAdicNumber c = three - params.a * fp.value;
    PAdicNumber disc = b * b - PAdicNumber::from_integer(4, params.p, n) * c;

    auto verified = [&](const PAdicNumber& z, const char* how) -> std::optional<EscapeWitness> {
        if (!z.is_regular() || z.valuation() != 0) return std::nullopt;
        PAdicNumber x = fp.value + z;
        PAdicNumber d = apply_f(params, x) - fp.value;
        bool inside = d.is_exact_zero() || (d.is_regular() && d.valuation() >= 1) ||
                      (d.is_indeterminate() && d.zero_bound() >= 1);
        if (!inside) return std::nullopt;
        return EscapeWitness{WitnessStatus::Found, x, how};
    };

    if (params.p.value() != 2) {
        bool disc_small = disc.is_exact_zero() || disc.is_indeterminate() ||
                          (disc.is_regular() && disc.valuation() >= 1);
        if (disc_small) {
            PAdicNumber half = PAdicNumber::from_rational(-1, 2, params.p, n);
            if (auto w = verified(b * half, "double root of the boundary quadratic mod p")) return *w;
            return {WitnessStatus::Undetermined, std::nullopt,
                    "small discriminant but the inward step could not be verified"};
        }
    }

    bool exists;
    try {
        exists = sqrt_exists(disc);
    } catch (const IndeterminateError&) {
        return {WitnessStatus::Undetermined, std::nullopt,
                "discriminant of the boundary quadratic vanishes to precision"};
    } catch (const PrecisionError& e) {
        return {WitnessStatus::Undetermined, std::nullopt, e.what()};
    }
    if (!exists) {
        return {WitnessStatus::None, std::nullopt,
                "the boundary quadratic has no simple root mod p; the closed unit sphere is invariant"};
    }

    auto [z1, z2] = solve_monic_quadratic(b, c, n);
    for (const PAdicNumber& z : {z1, z2}) {
        if (auto w = verified(z, "maps onto the fixed point to working precision")) return *w;
    }
    return {WitnessStatus::Undetermined, std::nullopt,
            "root found but the escape could not be verified at this precision"};
}

}  // namespace qpdyn
