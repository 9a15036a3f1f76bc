#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpdyn {

using BigInt = boost::multiprecision::cpp_int;

/// Thrown when a value is zero to working precision but not provably zero:
/// its norm, digits and distances are unknowable, never guessed.
struct IndeterminateError : std::runtime_error {
    explicit IndeterminateError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an operation needs more guaranteed digits than are available.
struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

/// A prime base, checked by trial division at construction.
class Prime {
public:
    explicit Prime(std::int64_t p);
    std::int64_t value() const { return p_; }
    friend bool operator==(const Prime& a, const Prime& b) { return a.p_ == b.p_; }
    friend bool operator!=(const Prime& a, const Prime& b) { return a.p_ != b.p_; }

private:
    std::int64_t p_;
};

/// A p-adic absolute value on the discrete scale: either exactly 0 or p^e.
/// Total order: 0 < p^e for every e, and p^e < p^f iff e < f.
class NormValue {
public:
    static NormValue zero() { return NormValue(true, 0); }
    static NormValue pow(std::int64_t e) { return NormValue(false, e); }
    static NormValue one() { return NormValue(false, 0); }

    bool is_zero() const { return zero_; }
    std::int64_t exponent() const;

    NormValue operator*(const NormValue& o) const;
    NormValue pow_int(int k) const;

    friend bool operator==(const NormValue& a, const NormValue& b) {
        return a.zero_ == b.zero_ && (a.zero_ || a.e_ == b.e_);
    }
    friend bool operator!=(const NormValue& a, const NormValue& b) { return !(a == b); }
    friend bool operator<(const NormValue& a, const NormValue& b);
    friend bool operator<=(const NormValue& a, const NormValue& b) { return a < b || a == b; }
    friend bool operator>(const NormValue& a, const NormValue& b) { return b < a; }
    friend bool operator>=(const NormValue& a, const NormValue& b) { return b <= a; }

    static NormValue max(const NormValue& a, const NormValue& b) { return a < b ? b : a; }

    /// Renders as "1", "p^e" or "0" with the numeric base, e.g. "5^-2".
    std::string str(std::int64_t p) const;

private:
    NormValue(bool z, std::int64_t e) : zero_(z), e_(e) {}
    bool zero_;
    std::int64_t e_;
};

/// Exact rational bookkeeping attached to values that are known exactly.
/// Normalized: den > 0, gcd(num, den) = 1.
struct Rational {
    BigInt num;
    BigInt den;

    Rational() : num(0), den(1) {}
    Rational(BigInt n, BigInt d);

    bool is_zero() const { return num == 0; }
    Rational operator+(const Rational& o) const { return Rational(num * o.den + o.num * den, den * o.den); }
    Rational operator-() const { return Rational(-num, den); }
    Rational operator-(const Rational& o) const { return *this + (-o); }
    Rational operator*(const Rational& o) const { return Rational(num * o.num, den * o.den); }
    Rational operator/(const Rational& o) const;
    friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }

    /// Total bit size; used to cap bookkeeping growth along long orbits.
    std::size_t bits() const;
};

/// How a digit list extends beyond the listed digits.
enum class DigitTail {
    Zeros,       ///< listed digits are the whole expansion (an integer unit part)
    RepeatLast,  ///< last digit repeats forever (eventually-periodic rationals)
};

/// An element of Q_p with explicit precision tracking.
///
/// Three states: an exact zero; a regular value p^v * (d0 + d1 p + ...) whose
/// first N unit digits are guaranteed (d0 != 0); or an indeterminate zero,
/// produced when every known digit cancelled in a subtraction. The true value
/// of an indeterminate zero lies in p^bound * Z_p but may be 0; taking its
/// norm is an error.
///
/// Values constructed from rationals (and anything computed from them while
/// the bookkeeping stays small) carry their exact value, which lets total
/// cancellations resolve to exact zeros instead of indeterminate ones.
/// All instances are immutable after construction.
class PAdicNumber {
public:
    static constexpr int kDefaultPrecision = 64;

    static PAdicNumber zero(Prime p);
    static PAdicNumber from_rational(const BigInt& num, const BigInt& den, Prime p,
                                     int precision = kDefaultPrecision);
    static PAdicNumber from_integer(std::int64_t n, Prime p, int precision = kDefaultPrecision);
    static PAdicNumber from_digits(Prime p, std::int64_t valuation, std::vector<std::int64_t> digits,
                                   int precision = kDefaultPrecision, DigitTail tail = DigitTail::Zeros);

    bool is_exact_zero() const { return state_ == State::ExactZero; }
    bool is_indeterminate() const { return state_ == State::Indeterminate; }
    bool is_regular() const { return state_ == State::Regular; }
    /// Regular or exact zero: safe to take the norm of.
    bool is_determinate() const { return state_ != State::Indeterminate; }

    Prime prime() const { return p_; }

    /// The exponent of p, exact. Throws on zeros of either kind.
    std::int64_t valuation() const;

    /// |x|_p. Exact zero gives NormValue::zero(); indeterminate throws.
    NormValue norm() const;

    /// Count of guaranteed unit digits (regular values only).
    int precision() const;

    /// Indeterminate zeros: the value is ≡ 0 mod p^bound.
    std::int64_t zero_bound() const;

    /// First k guaranteed digits of the unit part, least significant first.
    std::vector<std::int64_t> canonical_digits(int k) const;
    const std::vector<std::int64_t>& unit_digits() const;
    std::int64_t digit(int i) const;

    bool has_exact_value() const { return exact_.has_value(); }
    const Rational& exact_value() const { return *exact_; }

    /// The unit part as an integer mod p^precision.
    BigInt unit_as_integer() const;

    PAdicNumber operator-() const;
    PAdicNumber operator+(const PAdicNumber& o) const;
    PAdicNumber operator-(const PAdicNumber& o) const;
    PAdicNumber operator*(const PAdicNumber& o) const;
    PAdicNumber operator/(const PAdicNumber& o) const;

    /// Copy with precision lowered to at most k digits and the exact
    /// bookkeeping dropped: a genuinely window-only view, for precision tests.
    PAdicNumber truncated(int k) const;

    /// "p^v * (d0 + d1*p + ...) [N digits]"
    std::string str() const;
    /// "v;d0,d1,...,dk" with at most 8 digits listed; used in reports.
    std::string compact() const;

    /// |x - y|, exact. Throws IndeterminateError when the difference is zero
    /// to precision without being provably zero.
    friend NormValue distance(const PAdicNumber& x, const PAdicNumber& y);

    /// True when two values agree on every digit both windows guarantee
    /// (their difference is an exact zero or cancels wholly).
    friend bool agree_to_precision(const PAdicNumber& x, const PAdicNumber& y);

private:
    enum class State { ExactZero, Indeterminate, Regular };

    PAdicNumber(Prime p, State s) : p_(p), state_(s) {}
    static PAdicNumber make_regular(Prime p, std::int64_t v, const BigInt& unit, int precision,
                                    std::optional<Rational> exact);
    static PAdicNumber make_indeterminate(Prime p, std::int64_t bound);
    static std::optional<Rational> capped(std::optional<Rational> r);

    Prime p_;
    State state_;
    std::int64_t valuation_ = 0;         // Regular
    std::vector<std::int64_t> digits_;   // Regular; size == precision, digits_[0] != 0
    BigInt unit_;                        // the same window as an integer mod p^precision
    std::int64_t zero_bound_ = 0;        // Indeterminate
    std::optional<Rational> exact_;
};

/// Closed ball {x : |x - c|_p <= p^e}. Open balls are normalized away at
/// construction: on the discrete radius scale B_{p^e}(c) = closed(c, e-1).
struct Ball {
    PAdicNumber center;
    std::int64_t closed_log_radius;

    static Ball closed(PAdicNumber center, std::int64_t log_radius) {
        return Ball{std::move(center), log_radius};
    }
    static Ball open_of_log_radius(PAdicNumber center, std::int64_t log_radius) {
        return Ball{std::move(center), log_radius - 1};
    }

    /// Exact membership. Throws IndeterminateError when x - c is an
    /// indeterminate zero too coarse to decide.
    bool contains(const PAdicNumber& x) const;
};

/// Sphere {x : |x - c|_p = p^e}.
struct Sphere {
    PAdicNumber center;
    std::int64_t log_radius;

    bool contains(const PAdicNumber& x) const;
};

BigInt big_pow(std::int64_t base, std::int64_t exp);
BigInt mod_floor(const BigInt& a, const BigInt& m);
BigInt mod_inverse(const BigInt& a, const BigInt& m);

}  // namespace qpdyn
