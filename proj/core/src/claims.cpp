#include "qpdyn/claims.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

namespace qpdyn {

namespace {

struct Ctx {
    const MapParams& params;
    const ScanConfig& cfg;
    ClaimReport& report;

    Prime p() const { return params.p; }
    int depth() const { return cfg.depth_for(params.p); }

    void tally(const std::string& key, int n = 1) { report.counts[key] += n; }
    void fail(const std::string& point, const std::string& observation) {
        report.witnesses.emplace_back(point, observation);
    }
    void expect(bool ok, const std::string& point, const std::string& observation) {
        if (!ok) fail(point, observation);
    }
};

std::string ostr_impl(std::ostringstream& os) { return os.str(); }
template <typename T, typename... Rest>
std::string ostr_impl(std::ostringstream& os, T&& v, Rest&&... rest) {
    os << v;
    return ostr_impl(os, std::forward<Rest>(rest)...);
}
template <typename... Ts>
std::string ostr(Ts&&... vs) {
    std::ostringstream os;
    return ostr_impl(os, std::forward<Ts>(vs)...);
}

constexpr TailPolicy kTails[] = {TailPolicy::ZeroTail, TailPolicy::SeededRandomTail};

PAdicNumber int_p(std::int64_t n, Ctx& c) {
    return PAdicNumber::from_integer(n, c.p(), c.cfg.precision);
}

// Spheres filling the closed ball of the given log-radius, top `levels` down.
std::vector<std::int64_t> ball_radii(std::int64_t closed_log_radius, int levels = 3) {
    std::vector<std::int64_t> out;
    for (int i = 0; i < levels; ++i) out.push_back(closed_log_radius - i);
    return out;
}

SampleSet sphere_samples(Ctx& c, const PAdicNumber& center, std::int64_t e, TailPolicy tail) {
    return enumerate_sphere(center, e, c.depth(), tail, c.cfg.seed, c.cfg.precision);
}

void expect_all_fate(Ctx& c, const PAdicNumber& center, const std::vector<std::int64_t>& radii,
                     FateKind kind, std::optional<WhichFixed> target, const std::string& label) {
    OrbitClassifier classifier(c.params, c.cfg.orbit);
    for (TailPolicy tail : kTails) {
        for (std::int64_t e : radii) {
            SampleSet set = sphere_samples(c, center, e, tail);
            for (const PAdicNumber& pt : set.points) {
                OrbitFate fate = classifier.classify(pt);
                bool ok = fate.kind == kind && (!target || fate.target == target);
                c.tally(label + ":" + to_string(fate.kind));
                c.expect(ok, pt.compact(),
                         ostr(label, ": expected ", to_string(kind), " got ", to_string(fate.kind),
                              " (", fate.certificate, ")"));
            }
        }
    }
}

// Every sample of the sphere keeps |f^n(x) - center| == p^e for `iters` steps.
void expect_sphere_invariant(Ctx& c, const PAdicNumber& center, std::int64_t e, int iters,
                             const std::string& label) {
    for (TailPolicy tail : kTails) {
        SampleSet set = sphere_samples(c, center, e, tail);
        for (const PAdicNumber& pt : set.points) {
            PAdicNumber cur = pt;
            for (int i = 0; i < iters; ++i) {
                cur = apply_f(c.params, cur);
                PAdicNumber d = cur - center;
                bool on = d.is_regular() && -d.valuation() == e;
                if (!on) {
                    c.fail(pt.compact(), ostr(label, ": left the sphere p^", e, " at step ", i + 1));
                    break;
                }
            }
            c.tally(label + ":checked");
        }
    }
}

// Deterministic pseudo-random unit with `digits` base-p digits.
PAdicNumber random_unit(Prime p, int digits, std::uint64_t seed, int precision) {
    std::mt19937_64 gen(seed);
    std::vector<std::int64_t> ds(static_cast<std::size_t>(digits));
    auto digit = [&](std::int64_t lo) {
        return lo + static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(p.value() - lo));
    };
    ds[0] = digit(1);
    for (std::size_t i = 1; i < ds.size(); ++i) ds[i] = digit(0);
    return PAdicNumber::from_digits(p, 0, std::move(ds), precision, DigitTail::Zeros);
}

NormValue norm_of(const PAdicNumber& x) { return x.norm(); }

bool norm_is_one(const PAdicNumber& x) { return x.is_regular() && x.valuation() == 0; }
bool norm_lt_one(const PAdicNumber& x) {
    if (x.is_exact_zero()) return true;
    if (x.is_regular()) return x.valuation() >= 1;
    return x.zero_bound() >= 1;
}

const FixedPointRecord* find_record(const FixedPointSet& fps, WhichFixed w) {
    for (const auto& r : fps.records) {
        if (r.which == w) return &r;
    }
    return nullptr;
}

// ---- hypothesis helpers -------------------------------------------------

std::optional<std::string> hyp_none(const MapParams&) { return std::nullopt; }

std::optional<std::string> hyp_small_a(const MapParams& m) {
    if (!(m.a_norm() < NormValue::one())) return "requires |a| < 1";
    return std::nullopt;
}

std::optional<std::string> hyp_large_a(const MapParams& m) {
    if (!(m.a_norm() > NormValue::one())) return "requires |a| > 1";
    return std::nullopt;
}

std::optional<std::string> hyp_large_a_odd(const MapParams& m) {
    if (!(m.a_norm() > NormValue::one())) return "requires |a| > 1";
    if (m.a_norm().exponent() % 2 == 0) return "requires sqrt(|a|) not a power of p (odd valuation)";
    return std::nullopt;
}

std::optional<std::string> hyp_unit_a(const MapParams& m) {
    if (!(m.a_norm() == NormValue::one())) return "requires |a| = 1";
    return std::nullopt;
}

std::optional<std::string> hyp_unit_a_p5(const MapParams& m) {
    if (auto v = hyp_unit_a(m)) return v;
    if (m.p.value() < 5) return "requires p >= 5";
    return std::nullopt;
}

// ---- claim runners ------------------------------------------------------

void run_prop_3_1(Ctx& c) {
    ExistenceVerdict v = sqrt_a2p4_verdict(c.params.a);
    std::int64_t k = c.params.a.is_exact_zero() ? 1000 : c.params.a.valuation();
    bool expected = c.p().value() >= 3 || k >= 3;
    c.expect(v.exists == expected, c.params.a.compact(),
             ostr("verdict exists=", v.exists, " but the small-|a| table says ", expected));
    PAdicNumber w = c.params.a * c.params.a + int_p(4, c);
    c.expect(sqrt_exists(w) == v.exists, w.compact(), "verdict disagrees with the direct digit criterion");
    c.tally("case:" + to_string(v.case_tag));
}

void run_prop_3_1_p2_table(Ctx& c) {
    for (std::int64_t k = 1; k <= 5; ++k) {
        for (int i = 0; i < 20; ++i) {
            PAdicNumber unit = random_unit(c.p(), 12, c.cfg.seed ^ (static_cast<std::uint64_t>(k) << 8) ^
                                                         static_cast<std::uint64_t>(i),
                                           c.cfg.precision);
            PAdicNumber a = unit * PAdicNumber::from_rational(big_pow(2, k), 1, c.p(), c.cfg.precision);
            ExistenceVerdict v = sqrt_a2p4_verdict(a);
            bool expected = k >= 3;
            c.expect(v.exists == expected, a.compact(),
                     ostr("2-adic table: v(a)=", k, " expects exists=", expected));
            PAdicNumber w = a * a + int_p(4, c);
            c.expect(sqrt_exists(w) == v.exists, w.compact(), "verdict vs direct criterion");
            c.tally(ostr("v(a)=", k));
        }
    }
}

void run_prop_3_2(Ctx& c) {
    ExistenceVerdict v = sqrt_a2p4_verdict(c.params.a);
    c.expect(v.exists, c.params.a.compact(), "sqrt(a^2+4) must exist for |a| > 1");
    auto [x2, x3] = solve_fixed_quadratic(c.params.a, c.cfg.precision);
    c.expect(agree_to_precision(x2 * x3, int_p(-1, c)), (x2 * x3).compact(), "x2 x3 != -1");
    c.expect(agree_to_precision(x2 + x3, -c.params.a), (x2 + x3).compact(), "x2 + x3 != -a");
}

void run_prop_3_3(Ctx& c) {
    ExistenceVerdict v = sqrt_a2p4_verdict(c.params.a);
    std::int64_t p = c.p().value();
    if (p == 2 || p == 3) {
        c.expect(!v.exists, c.params.a.compact(), "no sqrt(a^2+4) for unit a at p=2,3");
        c.tally("nonexistence");
        return;
    }
    PAdicNumber w = c.params.a * c.params.a + int_p(4, c);
    c.expect(v.exists == sqrt_exists(w), w.compact(), "verdict vs direct criterion");
    if (w.is_regular() && w.valuation() == 0) {
        bool residue = is_quadratic_residue(w.digit(0), c.p());
        c.expect(v.exists == residue, w.compact(), "unit a^2+4: existence must match the residue test");
        c.tally("unit-stratum");
    } else {
        c.expect(v.case_tag == SqrtCase::UnitADegenerate || v.case_tag == SqrtCase::UnitAUndetermined,
                 c.params.a.compact(), "expected a degenerate-stratum tag");
        c.tally("degenerate-stratum");
    }
    if (v.exists && v.witness) {
        std::int64_t x = *v.witness;
        std::int64_t target = w.digit(0);
        c.expect(x * x % p == target, ostr(x), "witness residue fails to square to the unit digit");
    }
}

void run_ex_4_1(Ctx& c) {
    FixedPointSet fps = fixed_points(c.params);
    c.expect(fps.records.size() == 3, c.params.a.compact(), "fixed points x2, x3 must exist");
    if (fps.records.size() != 3) return;
    for (WhichFixed w : {WhichFixed::X2, WhichFixed::X3}) {
        const auto* r = find_record(fps, w);
        c.expect(r->kind == PointKind::Indifferent, r->value.compact(),
                 to_string(w) + " expected indifferent, got " + to_string(r->kind));
    }
    PAdicNumber asq = c.params.a * c.params.a;
    c.expect(norm_is_one(int_p(9, c) + int_p(2, c) * asq), c.params.a.compact(), "|9+2a^2| != 1");
    c.expect(norm_is_one(int_p(6, c) + asq), c.params.a.compact(), "|6+a^2| != 1");
}

void run_ex_4_2(Ctx& c) {
    FixedPointSet fps = fixed_points(c.params);
    c.expect(fps.records.size() == 3, c.params.a.compact(), "fixed points x2, x3 must exist");
    if (fps.records.size() != 3) return;
    for (WhichFixed w : {WhichFixed::X2, WhichFixed::X3}) {
        const auto* r = find_record(fps, w);
        c.expect(r->kind == PointKind::Indifferent, r->value.compact(),
                 to_string(w) + " expected indifferent, got " + to_string(r->kind));
    }
    PAdicNumber asq = c.params.a * c.params.a;
    c.expect(norm_is_one(int_p(9, c) + int_p(2, c) * asq), c.params.a.compact(), "|9+2a^2| != 1");
    c.expect(norm_lt_one(int_p(6, c) + asq), c.params.a.compact(), "|6+a^2| not < 1");
    c.expect(norm_is_one(asq + int_p(4, c)), c.params.a.compact(), "|a^2+4| != 1");
}

void run_ex_4_3(Ctx& c) {
    FixedPointSet fps = fixed_points(c.params);
    c.expect(fps.records.size() == 3, c.params.a.compact(), "fixed points x2, x3 must exist");
    if (fps.records.size() != 3) return;
    const auto* r2 = find_record(fps, WhichFixed::X2);
    const auto* r3 = find_record(fps, WhichFixed::X3);
    bool one_each = (r2->kind == PointKind::Attractive && r3->kind == PointKind::Indifferent) ||
                    (r2->kind == PointKind::Indifferent && r3->kind == PointKind::Attractive);
    c.expect(one_each, c.params.a.compact(),
             ostr("expected one attractive + one indifferent, got ", to_string(r2->kind), "/",
                  to_string(r3->kind)));
    PAdicNumber asq = c.params.a * c.params.a;
    c.expect(norm_lt_one(int_p(9, c) + int_p(2, c) * asq), c.params.a.compact(), "|9+2a^2| not < 1");
    c.expect(norm_is_one(int_p(6, c) + asq), c.params.a.compact(), "|6+a^2| != 1");
    c.expect(norm_is_one(asq + int_p(4, c)), c.params.a.compact(), "|a^2+4| != 1");
}

void run_lem_4_1(Ctx& c) {
    FixedPointSet fps = fixed_points(c.params);
    const auto* r1 = find_record(fps, WhichFixed::X1);
    c.expect(r1 && r1->kind == PointKind::Attractive, "x1", "x1 must be attractive");
    c.expect(fps.records.size() == 3, c.params.a.compact(), "x2, x3 must exist for |a| < 1, p != 2 small");
    if (fps.records.size() != 3) return;
    PointKind expected = c.p().value() == 3 ? PointKind::Attractive : PointKind::Indifferent;
    for (WhichFixed w : {WhichFixed::X2, WhichFixed::X3}) {
        const auto* r = find_record(fps, w);
        c.expect(r->kind == expected, r->value.compact(),
                 to_string(w) + " expected " + to_string(expected) + ", got " + to_string(r->kind));
    }
}

void run_lem_4_2(Ctx& c) {
    for (int i = 0; i < 200; ++i) {
        PAdicNumber a = random_unit(c.p(), 12, c.cfg.seed ^ 0xa42ULL ^ (static_cast<std::uint64_t>(i) << 1),
                                    c.cfg.precision);
        PAdicNumber asq = a * a;
        PAdicNumber prod = PAdicNumber::from_integer(9, c.p(), c.cfg.precision) +
                           PAdicNumber::from_integer(2, c.p(), c.cfg.precision) * asq;
        PAdicNumber sum = PAdicNumber::from_integer(6, c.p(), c.cfg.precision) + asq;
        bool both_small = norm_lt_one(prod) && norm_lt_one(sum);
        c.expect(!both_small, a.compact(), "|9+2a^2| and |6+a^2| both < 1 for a unit a");
        c.tally("units-checked");
    }
}

void run_lem_4_4(Ctx& c) {
    FixedPointSet fps = fixed_points(c.params);
    c.expect(fps.records.size() == 3, c.params.a.compact(), "x2, x3 must exist for |a| > 1");
    if (fps.records.size() != 3) return;
    const auto* r2 = find_record(fps, WhichFixed::X2);
    const auto* r3 = find_record(fps, WhichFixed::X3);
    const auto* rep = r2->kind == PointKind::Repelling ? r2 : r3;
    const auto* ind = rep == r2 ? r3 : r2;
    c.expect(rep->kind == PointKind::Repelling && ind->kind == PointKind::Indifferent,
             c.params.a.compact(),
             ostr("expected one repelling + one indifferent, got ", to_string(r2->kind), "/",
                  to_string(r3->kind)));
    NormValue na = c.params.a_norm();
    c.expect(rep->multiplier_norm == na.pow_int(2), rep->multiplier.compact(),
             "repelling multiplier norm must be |a|^2");
    c.expect(ind->multiplier_norm == NormValue::one(), ind->multiplier.compact(),
             "indifferent multiplier norm must be 1");
    NormValue n2 = norm_of(rep->value), n3 = norm_of(ind->value);
    c.expect((n2 == na && n3 == na.pow_int(-1)) || (n3 == na && n2 == na.pow_int(-1)),
             c.params.a.compact(), "fixed-point norms must be |a| and 1/|a|");
}

void run_ex_5_1(Ctx& c) {
    const std::pair<std::int64_t, bool> table[] = {{2, false}, {5, false}, {7, true}, {11, false}, {13, true}};
    for (auto [p, expected] : table) {
        PAdicNumber m3 = PAdicNumber::from_integer(-3, Prime(p), c.cfg.precision);
        c.expect(sqrt_exists(m3) == expected, ostr("p=", p),
                 ostr("sqrt(-3) existence at p=", p, " must be ", expected));
        c.tally("primes-checked");
    }
}

void run_thm_5_2_i(Ctx& c) {
    expect_all_fate(c, PAdicNumber::zero(c.p()), ball_radii(-1), FateKind::Converged, WhichFixed::X1,
                    "B1(0)");
    // The unit sphere is a norm-1 trap: no escape and no convergence to 0.
    for (TailPolicy tail : kTails) {
        SampleSet set = sphere_samples(c, PAdicNumber::zero(c.p()), 0, tail);
        for (const PAdicNumber& pt : set.points) {
            PAdicNumber cur = pt;
            for (int i = 0; i < c.cfg.orbit.max_iter; ++i) {
                cur = apply_f(c.params, cur);
                if (!norm_is_one(cur)) {
                    c.fail(pt.compact(), ostr("norm left 1 at step ", i + 1));
                    break;
                }
            }
            c.tally("S1(0):norm-pinned");
        }
    }
}

void run_thm_5_2_ii(Ctx& c) {
    FixedPointSet fps = fixed_points(c.params);
    c.expect(fps.records.size() == 3, c.params.a.compact(), "x2, x3 must exist");
    if (fps.records.size() != 3) return;
    bool sqrt_m3 = sqrt_exists(PAdicNumber::from_integer(-3, c.p(), c.cfg.precision));
    BoundaryKind expected = sqrt_m3 ? BoundaryKind::OpenBall : BoundaryKind::ClosedBall;
    for (WhichFixed w : {WhichFixed::X2, WhichFixed::X3}) {
        const auto* fp = find_record(fps, w);
        SiegelReport rep = siegel_scan(c.params, *fp, -2, 0, c.cfg);
        for (const auto& r : rep.per_radius) {
            if (r.log_radius < 0) {
                c.expect(r.verdict == RadiusVerdict::InvariantOnSamples, fp->value.compact(),
                         ostr("interior sphere p^", r.log_radius, " not invariant"));
            }
        }
        c.expect(rep.boundary_conclusion == expected, fp->value.compact(),
                 ostr("Siegel boundary for ", to_string(w), ": expected ", to_string(expected),
                      " got ", to_string(rep.boundary_conclusion)));
        EscapeWitness wit = boundary_escape_witness(c.params, *fp, c.cfg.precision);
        c.expect((wit.status == WitnessStatus::Found) == sqrt_m3, fp->value.compact(),
                 "escape witness must exist exactly when sqrt(-3) does");
        if (wit.status == WitnessStatus::Found) {
            PAdicNumber d = apply_f(c.params, *wit.point) - fp->value;
            c.expect(norm_lt_one(d), wit.point->compact(), "witness image must fall inside the sphere");
        }
        c.tally("fixed-points-scanned");
    }
}

void run_thm_5_2_iii(Ctx& c) {
    FixedPointSet fps = fixed_points(c.params);
    c.expect(fps.records.size() == 3, c.params.a.compact(), "x2, x3 must exist");
    if (fps.records.size() != 3) return;
    const auto* r2 = find_record(fps, WhichFixed::X2);
    const auto* r3 = find_record(fps, WhichFixed::X3);
    NormValue d = distance(r2->value, r3->value);
    NormValue expected = c.p().value() == 2 ? NormValue::pow(-1) : NormValue::one();
    c.expect(d == expected, ostr("|x2-x3|=", d.str(c.p().value())),
             "distance between the quadratic fixed points");
    Ball b2 = Ball::closed(r2->value, -1);
    Ball b3 = Ball::closed(r3->value, -1);
    for (TailPolicy tail : kTails) {
        SampleSet set = sphere_samples(c, r2->value, -1, tail);
        for (const PAdicNumber& pt : set.points) {
            bool in3 = b3.contains(pt);
            if (c.p().value() == 2) {
                c.expect(in3, pt.compact(), "at p=2 the open unit balls around x2 and x3 coincide");
            } else {
                c.expect(!in3, pt.compact(), "open unit balls around x2 and x3 must be disjoint");
            }
            c.tally("ball-samples");
        }
    }
    c.expect(b2.contains(r2->value), r2->value.compact(), "x2 lies in its own ball");
    bool x3_in_b2 = b2.contains(r3->value);
    c.expect(x3_in_b2 == (c.p().value() == 2), r3->value.compact(),
             "x3 in B1(x2) exactly at p = 2");
}

void run_thm_5_2_iv(Ctx& c) {
    FixedPointSet fps = fixed_points(c.params);
    c.expect(fps.records.size() == 3, c.params.a.compact(), "x2, x3 must exist");
    if (fps.records.size() != 3) return;
    for (WhichFixed w : {WhichFixed::X2, WhichFixed::X3}) {
        const auto* fp = find_record(fps, w);
        c.expect(fp->kind == PointKind::Attractive, fp->value.compact(), "p=3 pair must be attractive");
        expect_all_fate(c, fp->value, ball_radii(-1), FateKind::Converged, w,
                        "B1(" + to_string(w) + ")");
    }
}

void run_thm_5_1(Ctx& c) {
    std::int64_t m = c.params.a_norm().exponent();
    PAdicNumber zero = PAdicNumber::zero(c.p());
    // Open ball B_{r1}(0) inside the basin of 0.
    expect_all_fate(c, zero, ball_radii(-m - 1, 2), FateKind::Converged, WhichFixed::X1, "Br1(0)");

    // Sampled two-way check of the hitting-time description on the spheres
    // S_{r0}(0) and S_{|a|}(0): finite entry into B_{r3}(-a) iff convergence.
    Ball target = Ball::open_of_log_radius(-c.params.a, -3 * m);
    OrbitClassifier classifier(c.params, c.cfg.orbit);
    for (TailPolicy tail : kTails) {
        for (std::int64_t e : {std::int64_t{0}, m}) {
            SampleSet set = sphere_samples(c, zero, e, tail);
            for (const PAdicNumber& pt : set.points) {
                HittingTimeRecord hit = hitting_time(c.params, pt, target, c.cfg.kmax);
                OrbitFate fate = classifier.classify(pt);
                if (hit.time) {
                    c.expect(fate.kind == FateKind::Converged && fate.target == WhichFixed::X1,
                             pt.compact(), "orbit enters B_{r3}(-a) but does not converge to 0");
                    c.tally("hits");
                } else if (!hit.undetermined && fate.kind == FateKind::Converged &&
                           fate.target == WhichFixed::X1) {
                    c.fail(pt.compact(), "converges to 0 without entering B_{r3}(-a) within kmax");
                } else {
                    c.tally("non-hits");
                }
            }
        }
    }

    // SI(x3) = B_{r1}(x3): invariant spheres strictly inside, not at r1.
    FixedPointSet fps = fixed_points(c.params);
    const auto* r3rec = find_record(fps, WhichFixed::X3);
    const auto* indiff = r3rec && r3rec->kind == PointKind::Indifferent
                             ? r3rec
                             : find_record(fps, WhichFixed::X2);
    c.expect(indiff && indiff->kind == PointKind::Indifferent, c.params.a.compact(),
             "one quadratic fixed point must be indifferent");
    if (!indiff || indiff->kind != PointKind::Indifferent) return;
    expect_sphere_invariant(c, indiff->value, -m - 1, c.cfg.siegel_iters, "SI-interior");
    expect_sphere_invariant(c, indiff->value, -m - 2, c.cfg.siegel_iters, "SI-interior");
    SiegelReport rep = siegel_scan(c.params, *indiff, -m, -m, c.cfg);
    c.expect(rep.per_radius.front().verdict == RadiusVerdict::CounterexampleFound,
             indiff->value.compact(), "the sphere S_{r1}(x3) must not be invariant");

    // Some sample of S_{r1}(x3) with |x| = r1 stays on S_{r1}(0) forever.
    SampleSet set = sphere_samples(c, indiff->value, -m, TailPolicy::ZeroTail);
    bool found = false;
    for (const PAdicNumber& pt : set.points) {
        if (!(pt.is_regular() && pt.valuation() == m)) continue;
        found = true;
        PAdicNumber cur = pt;
        bool stays = true;
        for (int i = 0; i < c.cfg.siegel_iters; ++i) {
            cur = apply_f(c.params, cur);
            if (!(cur.is_regular() && cur.valuation() == m)) {
                stays = false;
                break;
            }
        }
        c.expect(stays, pt.compact(), "sample of S_{r1}(x3) left S_{r1}(0)");
        break;
    }
    c.expect(found, indiff->value.compact(), "no sample of S_{r1}(x3) with |x| = r1 found");
}

void run_step_i(Ctx& c) {
    std::int64_t m = c.params.a_norm().exponent();
    expect_sphere_invariant(c, PAdicNumber::zero(c.p()), -m, c.cfg.siegel_iters, "S_r1(0)");
}

void run_step_ii(Ctx& c) {
    std::int64_t m = c.params.a_norm().exponent();
    expect_all_fate(c, PAdicNumber::zero(c.p()), {m + 1, m + 2}, FateKind::Escaped, std::nullopt,
                    "beyond |a|");
}

void run_step_iii(Ctx& c) {
    std::int64_t m = c.params.a_norm().exponent();
    // Exponent chain e -> 2e + m from any radius strictly between r1 and |a|
    // (r0 excluded) must never return to 1 and must eventually beat |a|.
    for (std::int64_t e = -m + 1; e <= m - 1; ++e) {
        if (e == 0) continue;
        std::int64_t cur = e;
        int guard = 0;
        while (cur <= m && guard < 200) {
            c.expect(cur != 0, ostr("e0=", e), "norm chain hit the unit sphere");
            cur = 2 * cur + m;
            ++guard;
        }
        c.expect(cur > m, ostr("e0=", e), "norm chain failed to escape");
        c.tally("chain-radii");
    }
    // Sampled consequence: those spheres drain to escape.
    std::vector<std::int64_t> radii;
    for (std::int64_t e = -m + 1; e <= m - 1; ++e) {
        if (e != 0) radii.push_back(e);
    }
    if (!radii.empty()) {
        expect_all_fate(c, PAdicNumber::zero(c.p()), radii, FateKind::Escaped, std::nullopt,
                        "between r1 and |a|");
    }
}

void run_step_vi(Ctx& c) {
    std::int64_t m = c.params.a_norm().exponent();
    Ball target = Ball::open_of_log_radius(PAdicNumber::zero(c.p()), -m);
    for (TailPolicy tail : kTails) {
        for (std::int64_t e : ball_radii(-3 * m - 1, 2)) {
            SampleSet set = sphere_samples(c, -c.params.a, e, tail);
            for (const PAdicNumber& pt : set.points) {
                HittingTimeRecord hit = hitting_time(c.params, pt, target, c.cfg.kmax);
                c.expect(hit.time && *hit.time == 1, pt.compact(),
                         "points of B_{r3}(-a) must reach B_{r1}(0) in one step");
                c.tally("T=1");
            }
        }
    }
    // The bounding sphere S_{r3}(-a) lands exactly on S_{r1}(0).
    for (TailPolicy tail : kTails) {
        SampleSet set = sphere_samples(c, -c.params.a, -3 * m, tail);
        for (const PAdicNumber& pt : set.points) {
            PAdicNumber img = apply_f(c.params, pt);
            c.expect(img.is_regular() && img.valuation() == m, pt.compact(),
                     "f(S_{r3}(-a)) must land on S_{r1}(0)");
            c.tally("sphere-image");
        }
    }
}

void run_step_ix(Ctx& c) {
    std::int64_t m = c.params.a_norm().exponent();
    std::vector<std::int64_t> radii;
    for (std::int64_t e = -3 * m + 1; e <= m; ++e) {
        if (e == -2 * m || e == -m) continue;  // the two recursing spheres
        radii.push_back(e);
    }
    OrbitClassifier classifier(c.params, c.cfg.orbit);
    for (TailPolicy tail : kTails) {
        for (std::int64_t e : radii) {
            SampleSet set = sphere_samples(c, -c.params.a, e, tail);
            for (const PAdicNumber& pt : set.points) {
                if (e == m && !(pt.is_regular() && pt.valuation() == -m)) {
                    c.tally("filtered");  // outside the decomposition of S_{|a|}(0)
                    continue;
                }
                OrbitFate fate = classifier.classify(pt);
                c.expect(fate.kind == FateKind::Escaped, pt.compact(),
                         ostr("S_r(-a) with log r=", e, " expected escape, got ",
                              to_string(fate.kind)));
                c.tally("escaped-radius:" + ostr(e));
            }
        }
    }
}

void run_thm_5_3(Ctx& c) {
    PAdicNumber zero = PAdicNumber::zero(c.p());
    expect_all_fate(c, zero, ball_radii(-1), FateKind::Converged, WhichFixed::X1, "B1(0)");

    OrbitFate direct = orbit_fate(c.params, -c.params.a, c.cfg.orbit);
    c.expect(direct.kind == FateKind::Converged && direct.target == WhichFixed::X1 &&
                 direct.steps_used == 1,
             (-c.params.a).compact(), "x = -a must map to 0 in one step");

    expect_all_fate(c, zero, {1, 2}, FateKind::Escaped, std::nullopt, "outside unit ball");

    Ball target = Ball::open_of_log_radius(-c.params.a, 0);
    OrbitClassifier classifier(c.params, c.cfg.orbit);
    int finite_hits = 0;
    for (TailPolicy tail : kTails) {
        SampleSet set = sphere_samples(c, zero, 0, tail);
        for (const PAdicNumber& pt : set.points) {
            HittingTimeRecord hit = hitting_time(c.params, pt, target, c.cfg.kmax);
            if (hit.time) {
                ++finite_hits;
                c.expect(*hit.time <= c.cfg.kmax, pt.compact(), "hitting time within bound");
                OrbitFate fate = classifier.classify(pt);
                c.expect(fate.kind == FateKind::Converged && fate.target == WhichFixed::X1,
                         pt.compact(), "entry into B1(-a) must force convergence to 0");
                c.tally(ostr("T=", *hit.time));
            }
        }
    }
    c.expect(finite_hits > 0, c.params.a.compact(), "D[S1(0), B1(-a)] must be nonempty on samples");
}

void run_thm_5_4(Ctx& c) {
    FixedPointSet fps = fixed_points(c.params);
    c.expect(fps.records.size() == 3, c.params.a.compact(), "x2, x3 must exist");
    if (fps.records.size() != 3) return;
    const auto* r2 = find_record(fps, WhichFixed::X2);
    const auto* r3 = find_record(fps, WhichFixed::X3);
    if (r2->kind != PointKind::Indifferent || r3->kind != PointKind::Indifferent) {
        c.report.status = ClaimStatus::Skipped;
        c.report.reason = "requires both quadratic fixed points indifferent";
        return;
    }
    PAdicNumber w = c.params.a * c.params.a + int_p(4, c);
    bool w_small = norm_lt_one(w);

    std::vector<BoundaryKind> conclusions;
    for (const auto* fp : {r2, r3}) {
        EscapeWitness wit = boundary_escape_witness(c.params, *fp, c.cfg.precision);
        SiegelReport rep = siegel_scan(c.params, *fp, -2, 0, c.cfg);
        BoundaryKind expected =
            wit.status == WitnessStatus::Found ? BoundaryKind::OpenBall : BoundaryKind::ClosedBall;
        c.expect(wit.status != WitnessStatus::Undetermined, fp->value.compact(),
                 "escape witness undetermined");
        c.expect(rep.boundary_conclusion == expected, fp->value.compact(),
                 "scan conclusion must match the witness dichotomy");
        conclusions.push_back(rep.boundary_conclusion);
        c.tally("scanned");
    }

    if (w_small) {
        bool sqrt_m5 = sqrt_exists(PAdicNumber::from_integer(-5, c.p(), c.cfg.precision));
        BoundaryKind expected = (c.p().value() > 5 && sqrt_m5) ? BoundaryKind::OpenBall
                                                               : BoundaryKind::ClosedBall;
        for (BoundaryKind b : conclusions) {
            c.expect(b == expected, c.params.a.compact(),
                     "|a^2+4| < 1: boundary must follow the sqrt(-5) dichotomy");
        }
        // SI(x2) = SI(x3): the centers are within distance < 1 of each other.
        c.expect(norm_lt_one(r2->value - r3->value), c.params.a.compact(),
                 "|x2 - x3| < 1 must merge the two unit balls");
        c.expect(conclusions[0] == conclusions[1], c.params.a.compact(),
                 "SI(x2) and SI(x3) conclusions must coincide");
    }
}

void run_cor_5_2(Ctx& c) {
    FixedPointSet fps = fixed_points(c.params);
    c.expect(fps.records.size() == 3, c.params.a.compact(), "x2, x3 must exist");
    if (fps.records.size() != 3) return;
    PAdicNumber asq = c.params.a * c.params.a;
    c.expect(norm_is_one(asq + int_p(6, c)), c.params.a.compact(), "|a^2+6| must be 1 here");
    bool sqrt_m5 = sqrt_exists(PAdicNumber::from_integer(-5, c.p(), c.cfg.precision));
    BoundaryKind expected = sqrt_m5 ? BoundaryKind::OpenBall : BoundaryKind::ClosedBall;
    for (WhichFixed w : {WhichFixed::X2, WhichFixed::X3}) {
        const auto* fp = find_record(fps, w);
        if (fp->kind != PointKind::Indifferent) continue;
        SiegelReport rep = siegel_scan(c.params, *fp, -1, 0, c.cfg);
        c.expect(rep.boundary_conclusion == expected, fp->value.compact(),
                 ostr("expected ", to_string(expected), " by the sqrt(-5) criterion"));
        c.tally("scanned");
    }
}

void run_rem_5_1(Ctx& c) {
    FixedPointSet fps = fixed_points(c.params);
    c.expect(fps.records.size() == 3, c.params.a.compact(), "x2, x3 must exist");
    if (fps.records.size() != 3) return;
    for (WhichFixed w : {WhichFixed::X2, WhichFixed::X3}) {
        const auto* fp = find_record(fps, w);
        if (fp->kind != PointKind::Indifferent) continue;
        SiegelReport rep = siegel_scan(c.params, *fp, -1, 0, c.cfg);
        c.expect(rep.boundary_conclusion == BoundaryKind::ClosedBall, fp->value.compact(),
                 "p=5 with |a^2+4| < 1 must close the Siegel ball");
        c.tally("scanned");
    }
}

void run_cor_5_3(Ctx& c) {
    FixedPointSet fps = fixed_points(c.params);
    c.expect(fps.records.size() == 3, c.params.a.compact(), "x2, x3 must exist");
    if (fps.records.size() != 3) return;
    PAdicNumber asq = c.params.a * c.params.a;
    c.expect(norm_is_one(asq + int_p(4, c)), c.params.a.compact(), "requires |a^2+4| = 1");
    PAdicNumber cond = int_p(3, c) * asq - c.params.a + int_p(20, c);
    c.expect(norm_lt_one(cond), c.params.a.compact(), "requires |3a^2 - a + 20| < 1");
    bool found_indifferent = false;
    for (WhichFixed w : {WhichFixed::X2, WhichFixed::X3}) {
        const auto* fp = find_record(fps, w);
        if (fp->kind != PointKind::Indifferent) continue;
        found_indifferent = true;
        SiegelReport rep = siegel_scan(c.params, *fp, -1, 0, c.cfg);
        c.expect(rep.boundary_conclusion == BoundaryKind::OpenBall, fp->value.compact(),
                 "the digit condition must open the Siegel ball");
    }
    c.expect(found_indifferent, c.params.a.compact(), "needs an indifferent quadratic fixed point");
}

void run_thm_5_5(Ctx& c) {
    FixedPointSet fps = fixed_points(c.params);
    c.expect(fps.records.size() == 3, c.params.a.compact(), "x2, x3 must exist");
    if (fps.records.size() != 3) return;
    const auto* r2 = find_record(fps, WhichFixed::X2);
    const auto* r3 = find_record(fps, WhichFixed::X3);
    const auto* attr = r2->kind == PointKind::Attractive ? r2
                       : r3->kind == PointKind::Attractive ? r3
                                                           : nullptr;
    if (!attr) {
        c.report.status = ClaimStatus::Skipped;
        c.report.reason = "requires an attractive quadratic fixed point";
        return;
    }
    expect_all_fate(c, attr->value, ball_radii(-1), FateKind::Converged, attr->which,
                    "B1(" + to_string(attr->which) + ")");

    PAdicNumber center = -(int_p(2, c) * attr->value + c.params.a);
    Ball target = Ball::open_of_log_radius(center, 0);
    OrbitClassifier classifier(c.params, c.cfg.orbit);
    int finite_hits = 0;
    for (TailPolicy tail : kTails) {
        SampleSet set = sphere_samples(c, attr->value, 0, tail);
        for (const PAdicNumber& pt : set.points) {
            HittingTimeRecord hit = hitting_time(c.params, pt, target, c.cfg.kmax);
            if (hit.time) {
                ++finite_hits;
                OrbitFate fate = classifier.classify(pt);
                c.expect(fate.kind == FateKind::Converged && fate.target == attr->which, pt.compact(),
                         "entry into B1(-2x*-a) must force convergence to the attractive point");
            }
        }
    }
    c.expect(finite_hits > 0, c.params.a.compact(), "hitting-time set must be nonempty on samples");
}

using Hypothesis = std::optional<std::string> (*)(const MapParams&);
using Runner = void (*)(Ctx&);

struct ClaimDef {
    Hypothesis hypothesis;
    Runner run;
};

const std::map<std::string, ClaimDef>& registry() {
    static const std::map<std::string, ClaimDef> defs = {
        {"prop-3.1", {hyp_small_a, run_prop_3_1}},
        {"prop-3.1-p2-table",
         {[](const MapParams& m) -> std::optional<std::string> {
              if (m.p.value() != 2) return "the exhaustive table is 2-adic";
              return std::nullopt;
          },
          run_prop_3_1_p2_table}},
        {"prop-3.2", {hyp_large_a, run_prop_3_2}},
        {"prop-3.3", {hyp_unit_a, run_prop_3_3}},
        {"ex-4.1", {hyp_unit_a_p5, run_ex_4_1}},
        {"ex-4.2", {hyp_unit_a_p5, run_ex_4_2}},
        {"ex-4.3", {hyp_unit_a_p5, run_ex_4_3}},
        {"lem-4.1", {hyp_small_a, run_lem_4_1}},
        {"lem-4.2",
         {[](const MapParams& m) -> std::optional<std::string> {
              if (m.p.value() < 5) return "requires p >= 5";
              return std::nullopt;
          },
          run_lem_4_2}},
        {"lem-4.4", {hyp_large_a, run_lem_4_4}},
        {"ex-5.1", {hyp_none, run_ex_5_1}},
        {"thm-5.1", {hyp_large_a_odd, run_thm_5_1}},
        {"step-I", {hyp_large_a, run_step_i}},
        {"step-II", {hyp_large_a, run_step_ii}},
        {"step-III", {hyp_large_a_odd, run_step_iii}},
        {"step-VI", {hyp_large_a, run_step_vi}},
        {"step-IX", {hyp_large_a, run_step_ix}},
        {"thm-5.2-i", {hyp_small_a, run_thm_5_2_i}},
        {"thm-5.2-ii",
         {[](const MapParams& m) -> std::optional<std::string> {
              if (auto v = hyp_small_a(m)) return v;
              if (m.p.value() == 3) return "requires p != 3";
              return std::nullopt;
          },
          run_thm_5_2_ii}},
        {"thm-5.2-iii", {hyp_small_a, run_thm_5_2_iii}},
        {"thm-5.2-iv",
         {[](const MapParams& m) -> std::optional<std::string> {
              if (auto v = hyp_small_a(m)) return v;
              if (m.p.value() != 3) return "requires p = 3";
              return std::nullopt;
          },
          run_thm_5_2_iv}},
        {"thm-5.3", {hyp_unit_a, run_thm_5_3}},
        {"thm-5.4", {hyp_unit_a_p5, run_thm_5_4}},
        {"cor-5.2",
         {[](const MapParams& m) -> std::optional<std::string> {
              if (auto v = hyp_unit_a_p5(m)) return v;
              if (m.p.value() == 5) return "requires p > 5";
              return std::nullopt;
          },
          run_cor_5_2}},
        {"rem-5.1",
         {[](const MapParams& m) -> std::optional<std::string> {
              if (auto v = hyp_unit_a(m)) return v;
              if (m.p.value() != 5) return "requires p = 5";
              return std::nullopt;
          },
          run_rem_5_1}},
        {"cor-5.3", {hyp_unit_a_p5, run_cor_5_3}},
        {"thm-5.5", {hyp_unit_a_p5, run_thm_5_5}},
    };
    return defs;
}

}  // namespace

std::vector<std::string> registered_claim_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, _] : registry()) ids.push_back(id);
    return ids;
}

ClaimReport verify_claim(const std::string& claim_id, const MapParams& params,
                         const ScanConfig& config) {
    auto it = registry().find(claim_id);
    if (it == registry().end()) throw std::invalid_argument("unknown claim id: " + claim_id);
    ClaimReport report;
    report.claim_id = claim_id;
    report.p = params.p.value();
    report.a_compact = params.a.compact();
    if (auto violation = it->second.hypothesis(params)) {
        report.status = ClaimStatus::Skipped;
        report.reason = *violation;
        return report;
    }
    report.status = ClaimStatus::Pass;
    Ctx ctx{params, config, report};
    try {
        it->second.run(ctx);
    } catch (const std::exception& e) {
        ctx.fail("exception", e.what());
    }
    if (report.status != ClaimStatus::Skipped && !report.witnesses.empty()) {
        report.status = ClaimStatus::Fail;
    }
    return report;
}

namespace {

MapParams mk(std::int64_t p, std::int64_t num, std::int64_t den, int precision) {
    Prime prime(p);
    return MapParams(prime, PAdicNumber::from_rational(num, den, prime, precision));
}

MapParams mk_digits(std::int64_t p, std::vector<std::int64_t> digits, int precision) {
    Prime prime(p);
    return MapParams(prime,
                     PAdicNumber::from_digits(prime, 0, std::move(digits), precision, DigitTail::RepeatLast));
}

MapParams mk_sqrt(std::int64_t p, std::int64_t radicand, int precision) {
    Prime prime(p);
    PAdicNumber r = PAdicNumber::from_integer(radicand, prime, precision);
    return MapParams(prime, padic_sqrt(r, precision).root);
}

}  // namespace

std::vector<CatalogEntry> suite_catalog(const std::string& suite, int precision) {
    std::vector<CatalogEntry> out;
    auto add = [&](const std::string& id, MapParams params) {
        out.push_back(CatalogEntry{id, std::move(params)});
    };
    bool all = suite == "all";
    if (all || suite == "section3") {
        add("prop-3.1", mk(3, 3, 1, precision));
        add("prop-3.1", mk(5, 5, 1, precision));
        add("prop-3.1", mk(7, 7, 1, precision));
        add("prop-3.1", mk(2, 2, 1, precision));
        add("prop-3.1", mk(2, 4, 1, precision));
        add("prop-3.1", mk(2, 8, 1, precision));
        add("prop-3.1", mk(2, 16, 1, precision));
        add("prop-3.1-p2-table", mk(2, 8, 1, precision));
        add("prop-3.2", mk(2, 1, 2, precision));
        add("prop-3.2", mk(3, 1, 3, precision));
        add("prop-3.2", mk(5, 1, 5, precision));
        add("prop-3.3", mk(2, 1, 1, precision));
        add("prop-3.3", mk(3, 2, 1, precision));
        add("prop-3.3", mk(5, -3, 2, precision));
        add("prop-3.3", mk(11, 4, 1, precision));
        add("prop-3.3", mk(11, 1, 1, precision));
        add("prop-3.3", mk(13, 2, 1, precision));
    }
    if (all || suite == "section4") {
        add("ex-4.1", mk_digits(5, {1, 2, 2}, precision));
        add("ex-4.2", mk(11, 4, 1, precision));
        add("ex-4.3", mk(11, 1, 1, precision));
        add("lem-4.1", mk(3, 3, 1, precision));
        add("lem-4.1", mk(7, 7, 1, precision));
        add("lem-4.1", mk(2, 8, 1, precision));
        add("lem-4.2", mk(5, 1, 1, precision));
        add("lem-4.2", mk(7, 1, 1, precision));
        add("lem-4.2", mk(11, 1, 1, precision));
        add("lem-4.2", mk(13, 1, 1, precision));
        add("lem-4.4", mk(5, 1, 5, precision));
        add("lem-4.4", mk(3, 1, 3, precision));
    }
    if (all || suite == "section5") {
        for (auto [p, num] : {std::pair<std::int64_t, std::int64_t>{2, 8}, {3, 3}, {5, 5}, {7, 7}}) {
            add("thm-5.2-i", mk(p, num, 1, precision));
        }
        add("thm-5.2-ii", mk(2, 8, 1, precision));
        add("thm-5.2-ii", mk(5, 5, 1, precision));
        add("thm-5.2-ii", mk(7, 7, 1, precision));
        add("thm-5.2-ii", mk(11, 11, 1, precision));
        add("thm-5.2-iii", mk(2, 8, 1, precision));
        add("thm-5.2-iii", mk(5, 5, 1, precision));
        add("thm-5.2-iii", mk(7, 7, 1, precision));
        add("thm-5.2-iii", mk(11, 11, 1, precision));
        add("thm-5.2-iv", mk(3, 3, 1, precision));
        add("thm-5.1", mk(5, 1, 5, precision));
        add("thm-5.1", mk(3, 1, 3, precision));
        for (const char* id : {"step-I", "step-II", "step-VI", "step-IX"}) {
            add(id, mk(5, 1, 5, precision));
            add(id, mk(3, 1, 3, precision));
        }
        add("step-III", mk(5, 1, 5, precision));
        add("step-III", mk(5, 1, 125, precision));
        add("thm-5.3", mk(5, 1, 1, precision));
        add("thm-5.3", mk(7, 3, 1, precision));
        add("thm-5.4", mk_digits(5, {1, 2, 2}, precision));
        add("thm-5.4", mk_sqrt(13, 165, precision));
        add("thm-5.4", mk_sqrt(29, 837, precision));
        add("cor-5.2", mk_sqrt(13, 165, precision));
        add("cor-5.2", mk_sqrt(29, 837, precision));
        add("rem-5.1", mk_sqrt(5, 21, precision));
        add("cor-5.3", mk(11, 1, 1, precision));
        add("thm-5.5", mk(11, 1, 1, precision));
        add("ex-5.1", mk(7, 7, 1, precision));
    }
    if (out.empty() && !all) {
        throw std::invalid_argument("unknown suite: " + suite +
                                    " (expected all|section3|section4|section5)");
    }
    return out;
}

SuiteResult run_suite(const std::string& suite, const ScanConfig& config) {
    SuiteResult result;
    result.suite = suite;
    for (const CatalogEntry& entry : suite_catalog(suite, config.precision)) {
        result.reports.push_back(verify_claim(entry.claim_id, entry.params, config));
    }
    std::stable_sort(result.reports.begin(), result.reports.end(),
                     [](const ClaimReport& a, const ClaimReport& b) {
                         return std::tie(a.claim_id, a.p, a.a_compact) <
                                std::tie(b.claim_id, b.p, b.a_compact);
                     });
    for (const ClaimReport& r : result.reports) {
        if (r.status == ClaimStatus::Fail) ++result.failures;
        if (r.status == ClaimStatus::Skipped) ++result.skipped;
    }
    return result;
}

}  // namespace qpdyn
