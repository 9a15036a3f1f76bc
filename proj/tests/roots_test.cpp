#include "qpdyn/roots.hpp"

#include "doctest.h"

#include <random>
#include <vector>

using namespace qpdyn;

namespace {

PAdicNumber rat(std::int64_t num, std::int64_t den, std::int64_t p, int n = 64) {
    return PAdicNumber::from_rational(num, den, Prime(p), n);
}

// Independent oracle: the set of squares mod p^k by full enumeration.
std::vector<bool> squares_mod(std::int64_t p, int k) {
    std::int64_t m = 1;
    for (int i = 0; i < k; ++i) m *= p;
    std::vector<bool> sq(static_cast<std::size_t>(m), false);
    for (std::int64_t y = 0; y < m; ++y) {
        sq[static_cast<std::size_t>(y * y % m)] = true;
    }
    return sq;
}

}  // namespace

TEST_CASE("quadratic residues by enumeration") {
    CHECK(is_quadratic_residue(9, Prime(11)));
    CHECK(is_quadratic_residue(5, Prime(11)));  // 4^2 = 16 ≡ 5
    CHECK_FALSE(is_quadratic_residue(2, Prime(5)));
    CHECK(residue_sqrt(5, Prime(11)) == 4);
    CHECK_THROWS_AS(is_quadratic_residue(10, Prime(5)), std::invalid_argument);
}

TEST_CASE("sqrt existence: named instances") {
    CHECK(sqrt_exists(rat(-3, 1, 7)));
    CHECK(sqrt_exists(rat(-3, 1, 13)));
    CHECK_FALSE(sqrt_exists(rat(-3, 1, 2)));
    CHECK_FALSE(sqrt_exists(rat(-3, 1, 5)));
    CHECK_FALSE(sqrt_exists(rat(-3, 1, 11)));
    CHECK_FALSE(sqrt_exists(rat(2, 1, 2)));  // odd valuation
    CHECK_THROWS_AS(sqrt_exists(rat(7, 1, 2, 8).truncated(2)), PrecisionError);
}

TEST_CASE("sqrt existence agrees with the square-enumeration oracle") {
    // u ranges over units mod p^4, the value is u p^v for v in {0, 1, 2};
    // solvability of y^2 ≡ u p^v (mod p^6) is the ground truth.
    for (std::int64_t p : {2, 3, 5, 7}) {
        std::vector<bool> sq = squares_mod(p, 6);
        std::int64_t p4 = p * p * p * p;
        std::int64_t p6 = p4 * p * p;
        for (std::int64_t u = 1; u < p4; ++u) {
            if (u % p == 0) continue;
            std::int64_t value = u;
            for (int v = 0; v <= 2; ++v) {
                bool oracle = sq[static_cast<std::size_t>(value % p6)];
                CHECK(sqrt_exists(rat(value, 1, p)) == oracle);
                value *= p;
            }
        }
    }
}

TEST_CASE("p=2 small-|a| table, exhaustively over random units") {
    std::mt19937_64 gen(0x5EED);
    Prime two(2);
    for (int k = 1; k <= 5; ++k) {
        for (int i = 0; i < 30; ++i) {
            std::vector<std::int64_t> ds{1};
            for (int d = 1; d < 16; ++d) ds.push_back(static_cast<std::int64_t>(gen() % 2));
            PAdicNumber a = PAdicNumber::from_digits(two, k, ds, 64, DigitTail::Zeros);
            ExistenceVerdict v = sqrt_a2p4_verdict(a);
            CHECK(v.exists == (k >= 3));
            PAdicNumber w = a * a + PAdicNumber::from_integer(4, two);
            CHECK(sqrt_exists(w) == v.exists);
        }
    }
}

TEST_CASE("hensel lifting of square roots") {
    SUBCASE("sqrt(4) in Q_2 is exactly ±2") {
        SqrtPair s = padic_sqrt(rat(4, 1, 2), 64);
        REQUIRE(s.root.has_exact_value());
        CHECK(s.root.exact_value().num == 2);
        CHECK(s.neg_root.exact_value().num == -2);
    }
    SUBCASE("sqrt(-3) in Q_7, branch seeded at 2, is 37 mod 49") {
        SqrtPair s = padic_sqrt(rat(-3, 1, 7), 64);
        CHECK(s.root.digit(0) == 2);
        CHECK(s.root.digit(0) + 7 * s.root.digit(1) == 37);
        PAdicNumber sq = s.root * s.root;
        CHECK(agree_to_precision(sq, rat(-3, 1, 7)));
    }
    SUBCASE("roots square back to the radicand on all guaranteed digits") {
        std::mt19937_64 gen(0xABCD);
        for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
            for (int i = 0; i < 25; ++i) {
                std::int64_t base = static_cast<std::int64_t>(gen() % 9000) + 2;
                if (base % p == 0) ++base;
                std::int64_t scale = gen() % 2 == 0 ? 1 : p * p;
                PAdicNumber x = rat(base * base * scale, 1, p, 65);
                REQUIRE(sqrt_exists(x));
                SqrtPair s = padic_sqrt(x, 64);
                PAdicNumber sq = s.root * s.root;
                CHECK(agree_to_precision(sq, x));
                CHECK(s.root.precision() >= 63);
                CHECK(agree_to_precision(s.neg_root * s.neg_root, x));
                CHECK((s.root + s.neg_root).is_exact_zero());
            }
        }
    }
    SUBCASE("the canonical branch seed is the smaller residue") {
        SqrtPair s = padic_sqrt(rat(5, 1, 11), 64);
        CHECK(s.root.digit(0) == 4);  // 4^2 = 16 ≡ 5, the other branch starts at 7
    }
    CHECK_THROWS_AS(padic_sqrt(rat(2, 1, 5), 64), std::invalid_argument);
}

TEST_CASE("verdict for sqrt(a^2+4) across the |a| strata") {
    SUBCASE("|a|_2 = 2^-2 does not exist") {
        ExistenceVerdict v = sqrt_a2p4_verdict(rat(4, 1, 2));
        CHECK_FALSE(v.exists);
        CHECK(v.case_tag == SqrtCase::P2KEq2);
    }
    SUBCASE("p=11, a=4 exists as a unit residue") {
        ExistenceVerdict v = sqrt_a2p4_verdict(rat(4, 1, 11));
        CHECK(v.exists);
        CHECK(v.case_tag == SqrtCase::UnitAResidue);
        REQUIRE(v.witness.has_value());
        CHECK(*v.witness * *v.witness % 11 == 20 % 11);
    }
    SUBCASE("p=5, a = 1 + 2*5 + 2*5^2 + ... exists via the degenerate condition") {
        PAdicNumber a = PAdicNumber::from_digits(Prime(5), 0, {1, 2, 2}, 64, DigitTail::RepeatLast);
        ExistenceVerdict v = sqrt_a2p4_verdict(a);
        CHECK(v.exists);
        CHECK(v.case_tag == SqrtCase::UnitADegenerate);
    }
    SUBCASE("the degenerate digit condition alone does not guarantee existence") {
        // a = 1 + 2*5 + 1*5^2 + ... satisfies the three-digit condition but
        // a^2+4 = 25 * (2 + ...) and 2 is not a residue mod 5.
        PAdicNumber a = PAdicNumber::from_digits(Prime(5), 0, {1, 2, 1}, 64, DigitTail::RepeatLast);
        ExistenceVerdict v = sqrt_a2p4_verdict(a);
        CHECK(v.case_tag == SqrtCase::UnitADegenerate);
        CHECK_FALSE(v.exists);
        PAdicNumber w = a * a + PAdicNumber::from_integer(4, Prime(5));
        CHECK(sqrt_exists(w) == v.exists);
    }
    SUBCASE("unit-a strata at p=2 and p=3 never exist") {
        CHECK_FALSE(sqrt_a2p4_verdict(rat(1, 1, 2)).exists);
        CHECK(sqrt_a2p4_verdict(rat(1, 1, 2)).case_tag == SqrtCase::UnitAP2);
        CHECK_FALSE(sqrt_a2p4_verdict(rat(2, 1, 3)).exists);
        CHECK(sqrt_a2p4_verdict(rat(2, 1, 3)).case_tag == SqrtCase::UnitAP3);
    }
    SUBCASE("|a| > 1 always exists") {
        for (auto [p, num, den] : {std::tuple<std::int64_t, std::int64_t, std::int64_t>{2, 1, 2},
                                   {3, 1, 3},
                                   {5, 7, 25}}) {
            ExistenceVerdict v = sqrt_a2p4_verdict(rat(num, den, p));
            CHECK(v.exists);
            CHECK(v.case_tag == SqrtCase::ALarge);
        }
    }
    SUBCASE("witness residues verify when attached") {
        for (auto [p, num] : {std::pair<std::int64_t, std::int64_t>{3, 3}, {5, 5}, {7, 7}, {11, 4}}) {
            ExistenceVerdict v = sqrt_a2p4_verdict(rat(num, 1, p));
            REQUIRE(v.exists);
            REQUIRE(v.witness.has_value());
            PAdicNumber w = rat(num, 1, p) * rat(num, 1, p) + rat(4, 1, p);
            CHECK(*v.witness * *v.witness % p == w.digit(0));
        }
    }
}

TEST_CASE("fixed-point quadratic") {
    SUBCASE("a = 0 gives roots 1 and -1 (p >= 5)") {
        auto [x2, x3] = solve_fixed_quadratic(PAdicNumber::zero(Prime(5)), 64);
        REQUIRE(x2.has_exact_value());
        CHECK(x2.exact_value().num == 1);
        CHECK(x3.exact_value().num == -1);
    }
    SUBCASE("p=11, a=4: unit roots satisfying both Vieta identities") {
        PAdicNumber a = rat(4, 1, 11);
        auto [x2, x3] = solve_fixed_quadratic(a, 64);
        CHECK(x2.norm() == NormValue::one());
        CHECK(x3.norm() == NormValue::one());
        CHECK(agree_to_precision(x2 + x3, -a));
        CHECK(agree_to_precision(x2 * x3, rat(-1, 1, 11)));
    }
    SUBCASE("p=3, a=3: both roots have norm 1") {
        auto [x2, x3] = solve_fixed_quadratic(rat(3, 1, 3), 64);
        CHECK(x2.norm() == NormValue::one());
        CHECK(x3.norm() == NormValue::one());
    }
    SUBCASE("p=2, |a|>1: root norms are |a| and 1/|a|") {
        auto [x2, x3] = solve_fixed_quadratic(rat(1, 2, 2), 64);
        NormValue n2 = x2.norm(), n3 = x3.norm();
        CHECK(((n2 == NormValue::pow(1) && n3 == NormValue::pow(-1)) ||
               (n3 == NormValue::pow(1) && n2 == NormValue::pow(-1))));
        CHECK(agree_to_precision(x2 * x3, rat(-1, 1, 2)));
    }
    CHECK_THROWS_AS(solve_fixed_quadratic(rat(1, 1, 5), 64), std::domain_error);
}
