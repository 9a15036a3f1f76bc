#include "qpdyn/dynamics.hpp"

#include <map>
#include <sstream>

namespace qpdyn {

namespace {

// Sound upper bound on |x| usable in strict-inequality certificates.
std::optional<NormValue> norm_upper_bound(const PAdicNumber& x) {
    if (x.is_exact_zero()) return NormValue::zero();
    if (x.is_regular()) return x.norm();
    return NormValue::pow(-x.zero_bound());
}

// Tri-state closed-ball membership: decides when precision allows.
std::optional<bool> contains_or_unknown(const Ball& ball, const PAdicNumber& x) {
    try {
        return ball.contains(x);
    } catch (const IndeterminateError&) {
        return std::nullopt;
    }
}

}  // namespace

MapParams::MapParams(Prime prime, PAdicNumber param) : p(prime), a(std::move(param)) {
    if (a.is_indeterminate()) throw std::invalid_argument("MapParams: |a| must be determinate");
    if (a.prime() != p) throw std::invalid_argument("MapParams: a not a p-adic number for this p");
}

int MapParams::working_precision() const {
    return a.is_regular() ? a.precision() : PAdicNumber::kDefaultPrecision;
}

PAdicNumber apply_f(const MapParams& params, const PAdicNumber& x) {
    return x * x * (x + params.a);
}

PAdicNumber apply_G(const MapParams& params, const PAdicNumber& x) {
    PAdicNumber ax = params.a * x;
    return ax * ax * (x + PAdicNumber::from_integer(1, params.p, params.working_precision()));
}

PAdicNumber derivative(const MapParams& params, const PAdicNumber& x) {
    int n = params.working_precision();
    PAdicNumber three = PAdicNumber::from_integer(3, params.p, n);
    PAdicNumber two = PAdicNumber::from_integer(2, params.p, n);
    return x * (three * x + two * params.a);
}

std::string to_string(PointKind k) {
    switch (k) {
        case PointKind::Attractive: return "attractive";
        case PointKind::Indifferent: return "indifferent";
        case PointKind::Repelling: return "repelling";
    }
    return "?";
}

std::string to_string(WhichFixed w) {
    switch (w) {
        case WhichFixed::X1: return "x1";
        case WhichFixed::X2: return "x2";
        case WhichFixed::X3: return "x3";
    }
    return "?";
}

std::string to_string(FateKind k) {
    switch (k) {
        case FateKind::Converged: return "converged";
        case FateKind::Escaped: return "escaped";
        case FateKind::SiegelTrapped: return "siegel_trapped";
        case FateKind::Cycle: return "cycle";
        case FateKind::Undecided: return "undecided";
    }
    return "?";
}

namespace {

FixedPointRecord classify(WhichFixed which, PAdicNumber value, PAdicNumber multiplier) {
    FixedPointRecord rec{which, std::move(value), std::move(multiplier), NormValue::zero(), false,
                         PointKind::Attractive};
    if (rec.multiplier.is_exact_zero()) {
        rec.multiplier_norm = NormValue::zero();
    } else if (rec.multiplier.is_regular()) {
        rec.multiplier_norm = rec.multiplier.norm();
    } else {
        // Vanishes to precision: |m| <= p^{-bound} < 1 still classifies.
        rec.multiplier_norm = NormValue::pow(-rec.multiplier.zero_bound());
        rec.norm_is_upper_bound = true;
    }
    if (rec.multiplier_norm < NormValue::one()) {
        rec.kind = PointKind::Attractive;
    } else if (rec.multiplier_norm == NormValue::one()) {
        rec.kind = PointKind::Indifferent;
    } else {
        rec.kind = PointKind::Repelling;
    }
    return rec;
}

}  // namespace

FixedPointSet fixed_points(const MapParams& params) {
    FixedPointSet out{{}, ExistenceVerdict{false, SqrtCase::PGe3SmallA, std::nullopt}, false, ""};
    PAdicNumber zero = PAdicNumber::zero(params.p);
    out.records.push_back(classify(WhichFixed::X1, zero, zero));

    try {
        out.verdict = sqrt_a2p4_verdict(params.a);
    } catch (const PrecisionError& e) {
        out.existence_undecided = true;
        out.note = std::string("existence undecided at this precision: ") + e.what();
        return out;
    }
    if (!out.verdict.exists) return out;

    auto [x2, x3] = solve_fixed_quadratic(params.a, params.working_precision());
    out.records.push_back(classify(WhichFixed::X2, x2, derivative(params, x2)));
    out.records.push_back(classify(WhichFixed::X3, x3, derivative(params, x3)));
    return out;
}

std::optional<std::pair<PointKind, PointKind>> formal_pair_kinds(const MapParams& params) {
    NormValue na = params.a_norm();
    if (na > NormValue::one()) return std::make_pair(PointKind::Repelling, PointKind::Indifferent);

    int n = params.working_precision();
    PAdicNumber two = PAdicNumber::from_integer(2, params.p, n);
    PAdicNumber asq = params.a * params.a;
    PAdicNumber prod = PAdicNumber::from_integer(9, params.p, n) + two * asq;   // m2 m3
    PAdicNumber sum = PAdicNumber::from_integer(6, params.p, n) + asq;          // m2 + m3

    auto lt_one = [](const PAdicNumber& x) -> std::optional<bool> {
        auto ub = norm_upper_bound(x);
        if (*ub < NormValue::one()) return true;
        if (x.is_regular()) return x.norm() < NormValue::one();
        return std::nullopt;
    };
    auto p_small = lt_one(prod);
    if (!p_small) return std::nullopt;
    if (!*p_small) return std::make_pair(PointKind::Indifferent, PointKind::Indifferent);
    auto s_small = lt_one(sum);
    if (!s_small) return std::nullopt;
    if (!*s_small) return std::make_pair(PointKind::Attractive, PointKind::Indifferent);
    return std::make_pair(PointKind::Attractive, PointKind::Attractive);
}

bool contraction_certificate(const MapParams& params, const FixedPointRecord& fp, std::int64_t log_r) {
    int n = params.working_precision();
    PAdicNumber t = PAdicNumber::from_integer(3, params.p, n) * fp.value + params.a;
    auto ub = norm_upper_bound(t);
    bool linear_ok = ub->is_zero() || ub->exponent() + log_r <= -1;
    bool quadratic_ok = log_r <= -1;
    return linear_ok && quadratic_ok;
}

std::int64_t certified_log_radius(const MapParams& params, const FixedPointRecord& fp) {
    int n = params.working_precision();
    PAdicNumber t = PAdicNumber::from_integer(3, params.p, n) * fp.value + params.a;
    auto ub = norm_upper_bound(t);
    if (ub->is_zero()) return -1;
    return std::min<std::int64_t>(-ub->exponent() - 1, -1);
}

std::optional<NormValue> norm_step_law(const MapParams& params, const NormValue& x_norm) {
    if (x_norm.is_zero()) return NormValue::zero();
    NormValue na = params.a_norm();
    if (x_norm == na) return std::nullopt;
    return x_norm.pow_int(2) * NormValue::max(x_norm, na);
}

OrbitClassifier::OrbitClassifier(const MapParams& params, OrbitConfig config)
    : params_(params),
      config_(config),
      fps_(fixed_points(params)),
      threshold_(NormValue::max(NormValue::one(), params.a_norm())) {
    for (const auto& rec : fps_.records) {
        std::int64_t e = certified_log_radius(params_, rec);
        if (rec.kind == PointKind::Attractive) {
            attractive_.push_back({rec, Ball::closed(rec.value, e)});
        } else if (rec.kind == PointKind::Indifferent) {
            indifferent_.push_back({rec, Ball::closed(rec.value, e)});
        }
    }
}

OrbitFate OrbitClassifier::classify(const PAdicNumber& x0) const {
    const auto& attractive = attractive_;
    const auto& indifferent = indifferent_;
    const NormValue& threshold = threshold_;
    const OrbitConfig& config = config_;
    const MapParams& params = params_;

    auto ostr = [&](auto&&... parts) {
        std::ostringstream os;
        (os << ... << parts);
        return os.str();
    };

    PAdicNumber x = x0;
    std::map<std::pair<std::int64_t, std::vector<std::int64_t>>, int> seen;
    for (int step = 0;; ++step) {
        for (const auto& t : attractive) {
            auto in = contains_or_unknown(t.ball, x);
            if (in && *in) {
                return OrbitFate{FateKind::Converged, t.rec.which, std::nullopt, std::nullopt,
                                 std::nullopt, std::nullopt, step,
                                 ostr("entered certified contraction ball B(", to_string(t.rec.which),
                                      ", <=p^", t.ball.closed_log_radius, ") at step ", step)};
            }
        }
        for (const auto& t : indifferent) {
            auto in = contains_or_unknown(t.ball, x);
            if (in && *in) {
                PAdicNumber d = x - t.rec.value;
                std::optional<std::int64_t> radius;
                std::string extra;
                if (d.is_regular()) {
                    radius = -d.valuation();
                    extra = ostr("; trapped on the invariant sphere S(p^", *radius, ")");
                } else if (d.is_indeterminate()) {
                    radius = -d.zero_bound();
                    extra = ostr("; within p^", *radius, " of the fixed point");
                } else {
                    extra = "; equals the fixed point";
                }
                return OrbitFate{FateKind::SiegelTrapped, t.rec.which, radius, std::nullopt,
                                 std::nullopt, std::nullopt, step,
                                 ostr("entered certified Siegel ball B(", to_string(t.rec.which),
                                      ", <=p^", t.ball.closed_log_radius, ") at step ", step, extra)};
            }
        }
        if (x.is_regular() && x.norm() > threshold) {
            return OrbitFate{FateKind::Escaped, std::nullopt, std::nullopt, std::nullopt,
                             std::nullopt, std::nullopt, step,
                             ostr("norm p^", x.norm().exponent(), " exceeds max(1,|a|) at step ", step,
                                  "; norms cube from here on")};
        }
        if (x.is_indeterminate() || (x.is_regular() && x.precision() < config.min_precision)) {
            return OrbitFate{FateKind::Undecided, std::nullopt, std::nullopt, std::nullopt,
                             std::nullopt, UndecidedReason::PrecisionExhausted, step,
                             "guaranteed digits fell below the configured minimum"};
        }
        if (x.is_regular()) {
            int head = std::min(32, x.precision());
            auto key = std::make_pair(x.valuation(), x.canonical_digits(head));
            auto [it, fresh] = seen.emplace(std::move(key), step);
            if (!fresh) {
                return OrbitFate{FateKind::Cycle, std::nullopt, std::nullopt, step - it->second,
                                 it->second, std::nullopt, step,
                                 ostr("state truncated to ", head, " digits repeated step ",
                                      it->second, " at step ", step)};
            }
        }
        if (step >= config.max_iter) {
            return OrbitFate{FateKind::Undecided, std::nullopt, std::nullopt, std::nullopt,
                             std::nullopt, UndecidedReason::MaxIterations, step,
                             "no certificate fired within the iteration budget"};
        }
        x = apply_f(params, x);
    }
}

OrbitFate orbit_fate(const MapParams& params, const PAdicNumber& x0, const OrbitConfig& config) {
    return OrbitClassifier(params, config).classify(x0);
}

}  // namespace qpdyn
