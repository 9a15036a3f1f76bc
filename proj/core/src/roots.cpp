#include "qpdyn/roots.hpp"

#include <algorithm>

namespace qpdyn {

std::string to_string(SqrtCase c) {
    switch (c) {
        case SqrtCase::PGe3SmallA: return "P_GE_3_SMALL_A";
        case SqrtCase::P2KGe3: return "P2_K_GE_3";
        case SqrtCase::P2KEq2: return "P2_K_EQ_2";
        case SqrtCase::P2KEq1: return "P2_K_EQ_1";
        case SqrtCase::ALarge: return "A_LARGE";
        case SqrtCase::UnitAP2: return "UNIT_A_P2";
        case SqrtCase::UnitAP3: return "UNIT_A_P3";
        case SqrtCase::UnitAResidue: return "UNIT_A_RESIDUE";
        case SqrtCase::UnitADegenerate: return "UNIT_A_DEGENERATE";
        case SqrtCase::UnitAUndetermined: return "UNIT_A_UNDETERMINED";
    }
    return "?";
}

bool is_quadratic_residue(std::int64_t a0, Prime p) {
    std::int64_t m = p.value();
    std::int64_t r = ((a0 % m) + m) % m;
    if (r == 0) throw std::invalid_argument("is_quadratic_residue: residue divisible by p");
    for (std::int64_t x = 1; x < m; ++x) {
        if (x * x % m == r) return true;
    }
    return false;
}

std::optional<std::int64_t> residue_sqrt(std::int64_t a0, Prime p) {
    std::int64_t m = p.value();
    std::int64_t r = ((a0 % m) + m) % m;
    if (r == 0) throw std::invalid_argument("residue_sqrt: residue divisible by p");
    for (std::int64_t x = 1; x < m; ++x) {
        if (x * x % m == r) return x;
    }
    return std::nullopt;
}

bool sqrt_exists(const PAdicNumber& x) {
    if (x.is_exact_zero()) throw std::invalid_argument("sqrt_exists: exact zero");
    if (x.is_indeterminate()) throw IndeterminateError("sqrt_exists: indeterminate zero");
    if (x.valuation() % 2 != 0) return false;
    std::int64_t p = x.prime().value();
    if (p == 2) {
        if (x.precision() < 3) {
            throw PrecisionError("sqrt_exists: p=2 needs 3 guaranteed digits to read d1, d2");
        }
        return x.digit(1) == 0 && x.digit(2) == 0;
    }
    return is_quadratic_residue(x.digit(0), x.prime());
}

namespace {

// Lift r with r^2 ≡ u (mod p) to r^2 ≡ u (mod p^n), p odd.
BigInt lift_odd(const BigInt& u, std::int64_t p, int n, std::int64_t seed) {
    BigInt r = seed;
    BigInt pk = p;
    BigInt inv2r = mod_inverse(2 * seed % p, BigInt(p));
    for (int k = 1; k < n; ++k) {
        BigInt pk1 = pk * p;
        BigInt diff = mod_floor(u - r * r, pk1);
        BigInt t = diff / pk % p * inv2r % p;
        r += t * pk;
        pk = pk1;
    }
    return r;
}

// Lift the root of u ≡ 1 (mod 8) to r^2 ≡ u (mod 2^n); r is determined
// mod 2^{n-1}.
BigInt lift_two(const BigInt& u, int n) {
    BigInt r = 1;
    for (int k = 3; k < n; ++k) {
        BigInt diff = r * r - u;
        if (bit_test(mod_floor(diff, big_pow(2, k + 1)), static_cast<unsigned>(k))) {
            r += BigInt(1) << (k - 1);
        }
    }
    return mod_floor(r, big_pow(2, n - 1));
}

// Tries to recognize the radicand as the square of an exact rational and, if
// so, returns that rational aligned with the computed branch.
std::optional<Rational> exact_sqrt_of(const PAdicNumber& x, const PAdicNumber& root) {
    if (!x.has_exact_value()) return std::nullopt;
    const Rational& r = x.exact_value();
    if (r.num < 0) return std::nullopt;
    BigInt sn = boost::multiprecision::sqrt(r.num);
    BigInt sd = boost::multiprecision::sqrt(r.den);
    if (sn * sn != r.num || sd * sd != r.den) return std::nullopt;
    Rational cand(sn, sd);
    PAdicNumber c = PAdicNumber::from_rational(cand.num, cand.den, x.prime(), root.precision());
    if (agree_to_precision(c, root)) return cand;
    return -cand;
}

}  // namespace

SqrtPair padic_sqrt(const PAdicNumber& x, int precision) {
    if (x.is_exact_zero()) return SqrtPair{x, x};
    if (!sqrt_exists(x)) throw std::invalid_argument("padic_sqrt: no square root in Q_p");
    std::int64_t p = x.prime().value();

    BigInt root_unit;
    int out_precision;
    if (p == 2) {
        // Work one digit deeper: a radicand mod 2^{n+1} pins the root mod 2^n.
        int work = std::min(precision + 1, x.precision());
        BigInt u = x.unit_as_integer() % big_pow(2, work);
        root_unit = lift_two(u, work);
        out_precision = work - 1;
        BigInt m = big_pow(2, out_precision);
        BigInt other = mod_floor(-root_unit, m);
        if ((other & 7) < (root_unit & 7)) root_unit = other;
    } else {
        out_precision = std::min(precision, x.precision());
        BigInt u = x.unit_as_integer() % big_pow(p, out_precision);
        std::int64_t seed = *residue_sqrt(x.digit(0), x.prime());
        seed = std::min(seed, p - seed);
        root_unit = lift_odd(u, p, out_precision, seed);
    }

    PAdicNumber root = PAdicNumber::from_digits(x.prime(), x.valuation() / 2, [&] {
        std::vector<std::int64_t> ds(static_cast<std::size_t>(out_precision));
        BigInt u = root_unit;
        for (auto& d : ds) {
            d = static_cast<std::int64_t>(u % p);
            u /= p;
        }
        return ds;
    }(), out_precision, DigitTail::Zeros);
    // from_digits attaches an integer-tail bookkeeping value that is only the
    // truncation, not the root itself; replace it with a true exact value when
    // the radicand is a rational perfect square, else drop it.
    PAdicNumber bare = root.truncated(out_precision);
    if (auto exact = exact_sqrt_of(x, bare)) {
        PAdicNumber e = PAdicNumber::from_rational(exact->num, exact->den, x.prime(), out_precision);
        return SqrtPair{e, -e};
    }
    return SqrtPair{bare, -bare};
}

ExistenceVerdict sqrt_a2p4_verdict(const PAdicNumber& a) {
    if (a.is_indeterminate()) throw IndeterminateError("sqrt_a2p4_verdict: a indeterminate");
    Prime prime = a.prime();
    std::int64_t p = prime.value();

    auto with_witness = [&](bool exists, SqrtCase tag) {
        ExistenceVerdict v{exists, tag, std::nullopt};
        if (!exists) return v;
        if (p == 2) {
            v.witness = 1;
            return v;
        }
        PAdicNumber w = a.is_exact_zero()
                            ? PAdicNumber::from_integer(4, prime)
                            : a * a + PAdicNumber::from_integer(4, prime, a.precision());
        if (w.is_regular()) v.witness = residue_sqrt(w.digit(0), prime);
        return v;
    };

    if (a.is_exact_zero()) {
        return with_witness(true, p == 2 ? SqrtCase::P2KGe3 : SqrtCase::PGe3SmallA);
    }

    std::int64_t v = a.valuation();
    if (v >= 1) {
        if (p >= 3) return with_witness(true, SqrtCase::PGe3SmallA);
        if (v >= 3) return with_witness(true, SqrtCase::P2KGe3);
        return with_witness(false, v == 2 ? SqrtCase::P2KEq2 : SqrtCase::P2KEq1);
    }
    if (v <= -1) return with_witness(true, SqrtCase::ALarge);

    // |a| = 1.
    if (p == 2) return with_witness(false, SqrtCase::UnitAP2);
    if (p == 3) return with_witness(false, SqrtCase::UnitAP3);

    PAdicNumber w = a * a + PAdicNumber::from_integer(4, prime, a.precision());
    if (w.is_indeterminate()) {
        throw PrecisionError("sqrt_a2p4_verdict: a^2+4 vanishes to precision; deepen the digits of a");
    }
    if (w.is_exact_zero()) {
        // a^2 = -4 exactly: the root is 0.
        return ExistenceVerdict{true, SqrtCase::UnitADegenerate, std::nullopt};
    }
    if (w.valuation() == 0) {
        bool exists = is_quadratic_residue(w.digit(0), prime);
        return with_witness(exists, SqrtCase::UnitAResidue);
    }

    // |a^2+4| < 1: read the three-digit condition on a0, a1, a2.
    if (a.precision() < 3) {
        throw PrecisionError("sqrt_a2p4_verdict: degenerate stratum needs 3 digits of a");
    }
    std::int64_t a0 = a.digit(0), a1 = a.digit(1), a2 = a.digit(2);
    bool c1 = (a0 * a0 + 4) % p == 0;
    bool c2 = ((a0 * a0 + 4) / p + 2 * a0 * a1) % p == 0;
    bool c3 = (a1 * a1 + 2 * a0 * a2) % p != 0;
    SqrtCase tag = (c1 && c2 && c3) ? SqrtCase::UnitADegenerate : SqrtCase::UnitAUndetermined;
    // The digit condition alone does not pin the leading digit of the
    // remaining unit, so the direct criterion always has the last word.
    return with_witness(sqrt_exists(w), tag);
}

std::pair<PAdicNumber, PAdicNumber> solve_monic_quadratic(const PAdicNumber& b, const PAdicNumber& c,
                                                          int precision) {
    Prime p = b.prime();
    PAdicNumber four = PAdicNumber::from_integer(4, p, precision);
    PAdicNumber disc = b * b - four * c;
    if (!disc.is_exact_zero() && !sqrt_exists(disc)) {
        throw std::domain_error("solve_monic_quadratic: discriminant has no square root");
    }
    SqrtPair s = padic_sqrt(disc, precision);
    PAdicNumber half = PAdicNumber::from_rational(1, 2, p, precision);
    return {(-b + s.root) * half, (-b + s.neg_root) * half};
}

std::pair<PAdicNumber, PAdicNumber> solve_fixed_quadratic(const PAdicNumber& a, int precision) {
    PAdicNumber minus_one = PAdicNumber::from_integer(-1, a.prime(), precision);
    return solve_monic_quadratic(a, minus_one, precision);
}

}  // namespace qpdyn
