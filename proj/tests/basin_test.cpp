#include "qpdyn/basin.hpp"

#include "doctest.h"

#include <algorithm>
#include <set>

using namespace qpdyn;

namespace {

PAdicNumber rat(std::int64_t num, std::int64_t den, std::int64_t p, int n = 64) {
    return PAdicNumber::from_rational(num, den, Prime(p), n);
}

MapParams params(std::int64_t p, std::int64_t num, std::int64_t den = 1) {
    return MapParams(Prime(p), rat(num, den, p));
}

const FixedPointRecord& record(const FixedPointSet& fps, WhichFixed w) {
    for (const auto& r : fps.records) {
        if (r.which == w) return r;
    }
    throw std::runtime_error("record not found");
}

}  // namespace

TEST_CASE("sphere enumeration") {
    SUBCASE("p=3, unit sphere at depth 1 is {1, 2}") {
        SampleSet s = enumerate_sphere(PAdicNumber::zero(Prime(3)), 0, 1, TailPolicy::ZeroTail);
        REQUIRE(s.points.size() == 2);
        CHECK(s.points[0].canonical_digits(1) == std::vector<std::int64_t>{1});
        CHECK(s.points[1].canonical_digits(1) == std::vector<std::int64_t>{2});
    }
    SUBCASE("p=5, depth 2: 20 points, all of norm 1") {
        SampleSet s = enumerate_sphere(PAdicNumber::zero(Prime(5)), 0, 2, TailPolicy::ZeroTail);
        CHECK(s.points.size() == 20);
        for (const auto& pt : s.points) CHECK(pt.norm() == NormValue::one());
    }
    SUBCASE("p=2, log radius -1, depth 3: the four odd multiples of 2") {
        SampleSet s = enumerate_sphere(PAdicNumber::zero(Prime(2)), -1, 3, TailPolicy::ZeroTail);
        REQUIRE(s.points.size() == 4);
        for (const auto& pt : s.points) CHECK(pt.norm() == NormValue::pow(-1));
    }
    SUBCASE("every point lies on the declared sphere, residue classes covered once") {
        for (TailPolicy tail : {TailPolicy::ZeroTail, TailPolicy::SeededRandomTail}) {
            PAdicNumber center = rat(3, 7, 5);
            SampleSet s = enumerate_sphere(center, 2, 2, tail);
            Sphere sphere{center, 2};
            CHECK(s.points.size() == 20);
            std::set<std::pair<std::int64_t, std::int64_t>> classes;
            for (const auto& pt : s.points) {
                CHECK(sphere.contains(pt));
                PAdicNumber d = pt - center;
                classes.insert({d.digit(0), d.digit(1)});
            }
            CHECK(classes.size() == 20);
        }
    }
    SUBCASE("seeded tails are deterministic") {
        SampleSet a = enumerate_sphere(PAdicNumber::zero(Prime(7)), 0, 2, TailPolicy::SeededRandomTail, 42);
        SampleSet b = enumerate_sphere(PAdicNumber::zero(Prime(7)), 0, 2, TailPolicy::SeededRandomTail, 42);
        SampleSet c = enumerate_sphere(PAdicNumber::zero(Prime(7)), 0, 2, TailPolicy::SeededRandomTail, 43);
        REQUIRE(a.points.size() == b.points.size());
        bool all_equal = true, any_diff_seed = false;
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            if (!agree_to_precision(a.points[i], b.points[i])) all_equal = false;
            if (!agree_to_precision(a.points[i], c.points[i])) any_diff_seed = true;
        }
        CHECK(all_equal);
        CHECK(any_diff_seed);
    }
}

TEST_CASE("hitting times") {
    SUBCASE("x = -a enters the open unit ball at exactly T=1") {
        MapParams m = params(5, 1);
        Ball target = Ball::open_of_log_radius(PAdicNumber::zero(Prime(5)), 0);
        HittingTimeRecord hit = hitting_time(m, -m.a, target, 50);
        REQUIRE(hit.time.has_value());
        CHECK(*hit.time == 1);
        CHECK_FALSE(hit.undetermined);
    }
    SUBCASE("membership at the start is T=0") {
        MapParams m = params(5, 1);
        Ball target = Ball::closed(PAdicNumber::zero(Prime(5)), 0);
        HittingTimeRecord hit = hitting_time(m, rat(2, 1, 5), target, 50);
        REQUIRE(hit.time.has_value());
        CHECK(*hit.time == 0);
    }
    SUBCASE("points of B_{r3}(-a) reach B_{r1}(0) in one step") {
        MapParams m = params(5, 1, 5);
        Ball target = Ball::open_of_log_radius(PAdicNumber::zero(Prime(5)), -1);
        SampleSet s = enumerate_sphere(-m.a, -4, 2, TailPolicy::ZeroTail);
        for (const auto& pt : s.points) {
            HittingTimeRecord hit = hitting_time(m, pt, target, 20);
            REQUIRE(hit.time.has_value());
            CHECK(*hit.time == 1);
        }
    }
    SUBCASE("escaping points never hit a bounded target") {
        MapParams m = params(5, 1, 5);
        Ball target = Ball::closed(PAdicNumber::zero(Prime(5)), 0);
        HittingTimeRecord hit = hitting_time(m, rat(1, 25, 5), target, 30);
        CHECK_FALSE(hit.time.has_value());
        CHECK_FALSE(hit.undetermined);
        CHECK(hit.bound_used == 30);
    }
    SUBCASE("minimality: re-iteration confirms first entry") {
        MapParams m = params(7, 3);
        Ball target = Ball::open_of_log_radius(-m.a, 0);
        SampleSet s = enumerate_sphere(PAdicNumber::zero(Prime(7)), 0, 2, TailPolicy::ZeroTail);
        int verified = 0;
        for (const auto& pt : s.points) {
            HittingTimeRecord hit = hitting_time(m, pt, target, 40);
            if (!hit.time) continue;
            PAdicNumber cur = pt;
            for (int k = 0; k < *hit.time; ++k) {
                CHECK_FALSE(target.contains(cur));
                cur = apply_f(m, cur);
            }
            CHECK(target.contains(cur));
            ++verified;
        }
        CHECK(verified > 0);
    }
}

TEST_CASE("basin scan aggregates deterministic fates") {
    MapParams m = params(7, 7);
    std::vector<Sphere> region{{PAdicNumber::zero(Prime(7)), -1}, {PAdicNumber::zero(Prime(7)), -2}};
    ScanConfig cfg;
    cfg.depth = 2;
    BasinScanResult r1 = basin_scan(m, region, cfg);
    BasinScanResult r2 = basin_scan(m, region, cfg);
    CHECK(r1.counts == r2.counts);
    CHECK(r1.counts.at("converged") == static_cast<int>(r1.fates.size()));
    for (std::size_t i = 0; i < r1.fates.size(); ++i) {
        CHECK(r1.fates[i].second.kind == r2.fates[i].second.kind);
    }
}

TEST_CASE("siegel scans and boundary escape witnesses, |a| < 1") {
    ScanConfig cfg;
    SUBCASE("p=7: sqrt(-3) exists, the unit sphere leaks, the ball is open") {
        MapParams m = params(7, 7);
        FixedPointSet fps = fixed_points(m);
        const auto& x2 = record(fps, WhichFixed::X2);
        EscapeWitness w = boundary_escape_witness(m, x2);
        REQUIRE(w.status == WitnessStatus::Found);
        // the witness is a root of the boundary quadratic, i.e. a unit-sphere
        // preimage of the fixed point: its image is x2 to full precision
        PAdicNumber d = apply_f(m, *w.point) - x2.value;
        bool inside = d.is_exact_zero() || (d.is_regular() && d.valuation() >= 1) ||
                      (d.is_indeterminate() && d.zero_bound() >= 1);
        CHECK(inside);
        CHECK(distance(*w.point, x2.value) == NormValue::one());

        SiegelReport rep = siegel_scan(m, x2, -2, 0, cfg);
        CHECK(rep.boundary_conclusion == BoundaryKind::OpenBall);
        REQUIRE(rep.per_radius.size() == 3);
        CHECK(rep.per_radius[0].verdict == RadiusVerdict::InvariantOnSamples);
        CHECK(rep.per_radius[1].verdict == RadiusVerdict::InvariantOnSamples);
        CHECK(rep.per_radius[2].verdict == RadiusVerdict::CounterexampleFound);
    }
    SUBCASE("p=5 and p=11: no witness, closed ball") {
        for (auto [p, num] : {std::pair<std::int64_t, std::int64_t>{5, 5}, {11, 11}}) {
            MapParams m = params(p, num);
            FixedPointSet fps = fixed_points(m);
            const auto& x2 = record(fps, WhichFixed::X2);
            EscapeWitness w = boundary_escape_witness(m, x2);
            CHECK(w.status == WitnessStatus::None);
            SiegelReport rep = siegel_scan(m, x2, -1, 0, cfg);
            CHECK(rep.boundary_conclusion == BoundaryKind::ClosedBall);
            for (const auto& rr : rep.per_radius) {
                CHECK(rr.verdict == RadiusVerdict::InvariantOnSamples);
            }
        }
    }
    SUBCASE("p=2, a=8: closed ball as well") {
        MapParams m = params(2, 8);
        FixedPointSet fps = fixed_points(m);
        const auto& x2 = record(fps, WhichFixed::X2);
        EscapeWitness w = boundary_escape_witness(m, x2);
        CHECK(w.status == WitnessStatus::None);
    }
    SUBCASE("attractive points are rejected") {
        MapParams m = params(3, 3);
        FixedPointSet fps = fixed_points(m);
        const auto& x2 = record(fps, WhichFixed::X2);
        CHECK_THROWS_AS(boundary_escape_witness(m, x2), std::invalid_argument);
    }
}

TEST_CASE("siegel scan for the indifferent point at |a| > 1") {
    MapParams m = params(5, 1, 5);
    FixedPointSet fps = fixed_points(m);
    const auto& r2 = record(fps, WhichFixed::X2);
    const auto& r3 = record(fps, WhichFixed::X3);
    const auto& ind = r2.kind == PointKind::Indifferent ? r2 : r3;
    ScanConfig cfg;
    SiegelReport rep = siegel_scan(m, ind, -3, -1, cfg);
    REQUIRE(rep.per_radius.size() == 3);
    CHECK(rep.per_radius[0].verdict == RadiusVerdict::InvariantOnSamples);  // p^-3
    CHECK(rep.per_radius[1].verdict == RadiusVerdict::InvariantOnSamples);  // p^-2
    CHECK(rep.per_radius[2].verdict == RadiusVerdict::CounterexampleFound); // p^-1 = r1
    CHECK(rep.boundary_conclusion == BoundaryKind::OpenBall);
}

TEST_CASE("verify_claim surface") {
    ScanConfig cfg;
    SUBCASE("hypothesis violations are skipped with the reason named") {
        ClaimReport r = verify_claim("thm-5.2-i", params(5, 1), cfg);  // |a| = 1
        CHECK(r.status == ClaimStatus::Skipped);
        CHECK(r.reason == "requires |a| < 1");
    }
    SUBCASE("unknown claims throw") {
        CHECK_THROWS_AS(verify_claim("thm-9.9", params(5, 1), cfg), std::invalid_argument);
    }
    SUBCASE("a passing sampled claim") {
        ClaimReport r = verify_claim("step-I", params(5, 1, 5), cfg);
        CHECK(r.status == ClaimStatus::Pass);
        CHECK(r.witnesses.empty());
        CHECK(r.counts.at("S_r1(0):checked") > 0);
    }
    SUBCASE("registry lists the catalog ids") {
        auto ids = registered_claim_ids();
        for (const char* id : {"thm-5.1", "thm-5.2-i", "thm-5.2-ii", "thm-5.2-iii", "thm-5.2-iv",
                               "thm-5.3", "thm-5.4", "thm-5.5", "step-I", "step-II", "step-III",
                               "step-VI", "step-IX", "cor-5.2", "cor-5.3", "rem-5.1", "prop-3.1",
                               "prop-3.2", "prop-3.3", "ex-4.1", "ex-4.2", "ex-4.3", "ex-5.1",
                               "lem-4.1", "lem-4.2", "lem-4.4"}) {
            CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());
        }
    }
}
