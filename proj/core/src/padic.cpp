#include "qpdyn/padic.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace qpdyn {

namespace {

// Exact bookkeeping is dropped once numerator+denominator exceed this many
// bits; window arithmetic carries on alone from there. Orbit iteration cubes
// numerators, so anything surviving a handful of steps is dropped quickly.
constexpr std::size_t kMaxExactBits = 640;

bool is_prime_i64(std::int64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::int64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

std::int64_t strip_p(BigInt& n, std::int64_t p) {
    std::int64_t v = 0;
    while (n != 0 && n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

}  // namespace

Prime::Prime(std::int64_t p) : p_(p) {
    if (!is_prime_i64(p)) {
        throw std::invalid_argument("Prime: " + std::to_string(p) + " is not prime");
    }
}

std::int64_t NormValue::exponent() const {
    if (zero_) throw std::domain_error("NormValue: exact zero has no exponent");
    return e_;
}

NormValue NormValue::operator*(const NormValue& o) const {
    if (zero_ || o.zero_) return zero();
    return pow(e_ + o.e_);
}

NormValue NormValue::pow_int(int k) const {
    if (zero_) return zero();
    return pow(e_ * k);
}

bool operator<(const NormValue& a, const NormValue& b) {
    if (a.zero_) return !b.zero_;
    if (b.zero_) return false;
    return a.e_ < b.e_;
}

std::string NormValue::str(std::int64_t p) const {
    if (zero_) return "0";
    if (e_ == 0) return "1";
    std::ostringstream os;
    os << p << "^" << e_;
    return os.str();
}

Rational::Rational(BigInt n, BigInt d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    BigInt g = boost::multiprecision::gcd(n < 0 ? BigInt(-n) : n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num = std::move(n);
    den = std::move(d);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw std::domain_error("Rational: division by zero");
    return Rational(num * o.den, den * o.num);
}

std::size_t Rational::bits() const {
    BigInt n = num < 0 ? BigInt(-num) : num;
    if (n == 0) n = 1;
    return boost::multiprecision::msb(n) + boost::multiprecision::msb(den) + 2;
}

BigInt big_pow(std::int64_t base, std::int64_t exp) {
    if (exp >= 0 && exp <= 256) {
        thread_local std::map<std::pair<std::int64_t, std::int64_t>, BigInt> cache;
        auto it = cache.find({base, exp});
        if (it != cache.end()) return it->second;
        BigInt r = 1;
        for (std::int64_t i = 0; i < exp; ++i) r *= base;
        cache.emplace(std::make_pair(base, exp), r);
        return r;
    }
    BigInt r = 1;
    for (std::int64_t i = 0; i < exp; ++i) r *= base;
    return r;
}

BigInt mod_floor(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r;
}

// Extended Euclid; a must be invertible mod m.
BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    BigInt r0 = m, r1 = mod_floor(a, m);
    BigInt t0 = 0, t1 = 1;
    while (r1 != 0) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        BigInt t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (r0 != 1) throw std::domain_error("mod_inverse: not invertible");
    return mod_floor(t0, m);
}

PAdicNumber PAdicNumber::zero(Prime p) {
    PAdicNumber x(p, State::ExactZero);
    x.exact_ = Rational(0, 1);
    return x;
}

PAdicNumber PAdicNumber::make_indeterminate(Prime p, std::int64_t bound) {
    PAdicNumber x(p, State::Indeterminate);
    x.zero_bound_ = bound;
    return x;
}

PAdicNumber PAdicNumber::make_regular(Prime p, std::int64_t v, const BigInt& unit, int precision,
                                      std::optional<Rational> exact) {
    if (precision < 1) throw PrecisionError("PAdicNumber: no guaranteed digits left");
    if (v > (std::int64_t{1} << 52) || v < -(std::int64_t{1} << 52)) {
        throw PrecisionError("PAdicNumber: valuation out of the supported range");
    }
    PAdicNumber x(p, State::Regular);
    x.valuation_ = v;
    x.digits_.resize(static_cast<std::size_t>(precision));
    BigInt u = mod_floor(unit, big_pow(p.value(), precision));
    x.unit_ = u;
    for (int i = 0; i < precision; ++i) {
        x.digits_[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(u % p.value());
        u /= p.value();
    }
    if (x.digits_[0] == 0) throw std::logic_error("PAdicNumber: unit part not a unit");
    x.exact_ = capped(std::move(exact));
    return x;
}

std::optional<Rational> PAdicNumber::capped(std::optional<Rational> r) {
    if (r && r->bits() > kMaxExactBits) return std::nullopt;
    return r;
}

PAdicNumber PAdicNumber::from_rational(const BigInt& num, const BigInt& den, Prime p, int precision) {
    if (den == 0) throw std::invalid_argument("from_rational: zero denominator");
    if (num == 0) return zero(p);
    BigInt n = num, d = den;
    std::int64_t v = strip_p(n, p.value()) - strip_p(d, p.value());
    BigInt m = big_pow(p.value(), precision);
    BigInt unit = mod_floor(n, m) * mod_inverse(d, m) % m;
    return make_regular(p, v, unit, precision, Rational(num, den));
}

PAdicNumber PAdicNumber::from_integer(std::int64_t n, Prime p, int precision) {
    return from_rational(BigInt(n), BigInt(1), p, precision);
}

PAdicNumber PAdicNumber::from_digits(Prime p, std::int64_t valuation, std::vector<std::int64_t> digits,
                                     int precision, DigitTail tail) {
    for (std::int64_t d : digits) {
        if (d < 0 || d >= p.value()) throw std::invalid_argument("from_digits: digit out of range");
    }
    // Normalize away leading zeros into the valuation.
    std::size_t lead = 0;
    while (lead < digits.size() && digits[lead] == 0) ++lead;
    if (lead == digits.size()) return zero(p);
    if (lead > 0) {
        digits.erase(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(lead));
        valuation += static_cast<std::int64_t>(lead);
    }
    if (digits.size() > static_cast<std::size_t>(precision)) {
        digits.resize(static_cast<std::size_t>(precision));
    }

    std::optional<Rational> exact;
    std::size_t given = digits.size();
    BigInt prefix = 0;
    BigInt pk = 1;
    for (std::size_t i = 0; i < given; ++i) {
        prefix += digits[i] * pk;
        pk *= p.value();
    }
    if (tail == DigitTail::Zeros) {
        exact = Rational(prefix, 1);
    } else {
        // d_{m} repeats from index m on: unit = prefix(0..m-1) + d_m p^m / (1 - p).
        BigInt pm = pk / p.value();
        BigInt last = digits.back();
        Rational unit = Rational(prefix - last * pm, 1) + Rational(last * pm, BigInt(1) - p.value());
        exact = unit;
        while (digits.size() < static_cast<std::size_t>(precision)) digits.push_back(digits[given - 1]);
    }
    if (tail == DigitTail::Zeros) {
        while (digits.size() < static_cast<std::size_t>(precision)) digits.push_back(0);
    }

    BigInt unit_val = 0;
    for (std::size_t i = digits.size(); i-- > 0;) unit_val = unit_val * p.value() + digits[i];
    std::optional<Rational> scaled;
    if (exact) {
        Rational pv = valuation >= 0 ? Rational(big_pow(p.value(), valuation), 1)
                                     : Rational(1, big_pow(p.value(), -valuation));
        scaled = *exact * pv;
    }
    return make_regular(p, valuation, unit_val, precision, scaled);
}

std::int64_t PAdicNumber::valuation() const {
    if (state_ == State::ExactZero) throw std::domain_error("valuation: exact zero");
    if (state_ == State::Indeterminate) throw IndeterminateError("valuation: indeterminate zero");
    return valuation_;
}

NormValue PAdicNumber::norm() const {
    switch (state_) {
        case State::ExactZero: return NormValue::zero();
        case State::Regular: return NormValue::pow(-valuation_);
        case State::Indeterminate:
        default:
            throw IndeterminateError("norm: value is zero to precision p^" +
                                     std::to_string(zero_bound_) + " but not provably zero");
    }
}

int PAdicNumber::precision() const {
    if (state_ != State::Regular) throw std::domain_error("precision: not a regular value");
    return static_cast<int>(digits_.size());
}

std::int64_t PAdicNumber::zero_bound() const {
    if (state_ != State::Indeterminate) throw std::domain_error("zero_bound: not indeterminate");
    return zero_bound_;
}

std::vector<std::int64_t> PAdicNumber::canonical_digits(int k) const {
    if (state_ == State::ExactZero) return std::vector<std::int64_t>(static_cast<std::size_t>(k), 0);
    if (state_ == State::Indeterminate) throw IndeterminateError("canonical_digits: indeterminate zero");
    if (k > precision()) {
        throw PrecisionError("canonical_digits: " + std::to_string(k) + " digits requested, " +
                             std::to_string(precision()) + " guaranteed");
    }
    return std::vector<std::int64_t>(digits_.begin(), digits_.begin() + k);
}

const std::vector<std::int64_t>& PAdicNumber::unit_digits() const {
    if (state_ != State::Regular) throw std::domain_error("unit_digits: not a regular value");
    return digits_;
}

std::int64_t PAdicNumber::digit(int i) const {
    if (state_ != State::Regular) throw std::domain_error("digit: not a regular value");
    if (i >= precision()) throw PrecisionError("digit: index beyond guaranteed precision");
    return digits_[static_cast<std::size_t>(i)];
}

BigInt PAdicNumber::unit_as_integer() const {
    if (state_ != State::Regular) throw std::domain_error("unit_as_integer: not a regular value");
    return unit_;
}

PAdicNumber PAdicNumber::operator-() const {
    switch (state_) {
        case State::ExactZero: return *this;
        case State::Indeterminate: return *this;
        case State::Regular:
        default: {
            BigInt m = big_pow(p_.value(), precision());
            std::optional<Rational> exact;
            if (exact_) exact = -*exact_;
            return make_regular(p_, valuation_, m - unit_as_integer(), precision(), std::move(exact));
        }
    }
}

PAdicNumber PAdicNumber::operator+(const PAdicNumber& o) const {
    if (p_ != o.p_) throw std::invalid_argument("add: different primes");
    if (state_ == State::ExactZero) return o;
    if (o.state_ == State::ExactZero) return *this;

    if (state_ == State::Indeterminate || o.state_ == State::Indeterminate) {
        if (state_ == State::Indeterminate && o.state_ == State::Indeterminate) {
            return make_indeterminate(p_, std::min(zero_bound_, o.zero_bound_));
        }
        const PAdicNumber& ind = state_ == State::Indeterminate ? *this : o;
        const PAdicNumber& reg = state_ == State::Indeterminate ? o : *this;
        if (reg.valuation_ >= ind.zero_bound_) return make_indeterminate(p_, ind.zero_bound_);
        int keep = static_cast<int>(
            std::min<std::int64_t>(reg.precision(), ind.zero_bound_ - reg.valuation_));
        return make_regular(p_, reg.valuation_, reg.unit_as_integer(), keep, std::nullopt);
    }

    std::int64_t v = std::min(valuation_, o.valuation_);
    std::int64_t sx = valuation_ - v;
    std::int64_t sy = o.valuation_ - v;
    std::int64_t window = std::min(sx + precision(), sy + o.precision());
    BigInt m = big_pow(p_.value(), window);
    // A shift at or beyond the window contributes nothing mod p^window; the
    // clamp also keeps big_pow bounded when valuations are far apart.
    auto shifted = [&](const PAdicNumber& z, std::int64_t s) {
        return s >= window ? BigInt(0) : z.unit_as_integer() * big_pow(p_.value(), s) % m;
    };
    BigInt sum = mod_floor(shifted(*this, sx) + shifted(o, sy), m);

    std::optional<Rational> exact;
    if (exact_ && o.exact_) exact = capped(*exact_ + *o.exact_);

    if (sum == 0) {
        if (exact) {
            if (exact->is_zero()) return zero(p_);
            // The true value survives below the shared window; rebuild it.
            return from_rational(exact->num, exact->den, p_,
                                 std::min(precision(), o.precision()));
        }
        return make_indeterminate(p_, v + window);
    }

    std::int64_t cancelled = strip_p(sum, p_.value());
    int out_precision = static_cast<int>(window - cancelled);
    return make_regular(p_, v + cancelled, sum, out_precision, std::move(exact));
}

PAdicNumber PAdicNumber::operator-(const PAdicNumber& o) const { return *this + (-o); }

PAdicNumber PAdicNumber::operator*(const PAdicNumber& o) const {
    if (p_ != o.p_) throw std::invalid_argument("mul: different primes");
    if (state_ == State::ExactZero || o.state_ == State::ExactZero) return zero(p_);
    if (state_ == State::Indeterminate || o.state_ == State::Indeterminate) {
        std::int64_t b1 = state_ == State::Indeterminate ? zero_bound_ : valuation_;
        std::int64_t b2 = o.state_ == State::Indeterminate ? o.zero_bound_ : o.valuation_;
        return make_indeterminate(p_, b1 + b2);
    }
    int n = std::min(precision(), o.precision());
    BigInt m = big_pow(p_.value(), n);
    BigInt u = unit_as_integer() * o.unit_as_integer() % m;
    std::optional<Rational> exact;
    if (exact_ && o.exact_) exact = *exact_ * *o.exact_;
    return make_regular(p_, valuation_ + o.valuation_, u, n, std::move(exact));
}

PAdicNumber PAdicNumber::operator/(const PAdicNumber& o) const {
    if (p_ != o.p_) throw std::invalid_argument("div: different primes");
    if (o.state_ == State::ExactZero) throw std::domain_error("div: division by exact zero");
    if (o.state_ == State::Indeterminate) {
        throw IndeterminateError("div: division by indeterminate zero");
    }
    if (state_ == State::ExactZero) return zero(p_);
    if (state_ == State::Indeterminate) return make_indeterminate(p_, zero_bound_ - o.valuation_);
    int n = std::min(precision(), o.precision());
    BigInt m = big_pow(p_.value(), n);
    BigInt u = unit_as_integer() % m * mod_inverse(o.unit_as_integer() % m, m) % m;
    std::optional<Rational> exact;
    if (exact_ && o.exact_) exact = *exact_ / *o.exact_;
    return make_regular(p_, valuation_ - o.valuation_, u, n, std::move(exact));
}

PAdicNumber PAdicNumber::truncated(int k) const {
    if (state_ != State::Regular) return *this;
    int n = std::min(k, precision());
    return make_regular(p_, valuation_, unit_as_integer() % big_pow(p_.value(), n), n, std::nullopt);
}

std::string PAdicNumber::str() const {
    std::ostringstream os;
    switch (state_) {
        case State::ExactZero: return "0";
        case State::Indeterminate:
            os << "0 + O(" << p_.value() << "^" << zero_bound_ << ")";
            return os.str();
        case State::Regular:
        default: {
            os << p_.value() << "^" << valuation_ << " * (";
            int shown = std::min<int>(6, precision());
            for (int i = 0; i < shown; ++i) {
                if (i > 0) os << " + ";
                os << digits_[static_cast<std::size_t>(i)];
                if (i == 1) os << "*" << p_.value();
                if (i > 1) os << "*" << p_.value() << "^" << i;
            }
            if (precision() > shown) os << " + ...";
            os << ") [" << precision() << " digits]";
            return os.str();
        }
    }
}

std::string PAdicNumber::compact() const {
    std::ostringstream os;
    switch (state_) {
        case State::ExactZero: return "zero";
        case State::Indeterminate:
            os << "indeterminate;bound=" << zero_bound_;
            return os.str();
        case State::Regular:
        default: {
            os << valuation_ << ";";
            int shown = std::min<int>(8, precision());
            for (int i = 0; i < shown; ++i) {
                if (i > 0) os << ",";
                os << digits_[static_cast<std::size_t>(i)];
            }
            return os.str();
        }
    }
}

NormValue distance(const PAdicNumber& x, const PAdicNumber& y) {
    PAdicNumber d = x - y;
    if (d.is_indeterminate()) {
        throw IndeterminateError("distance: difference is zero to precision; cannot certify a norm");
    }
    return d.norm();
}

bool agree_to_precision(const PAdicNumber& x, const PAdicNumber& y) {
    PAdicNumber d = x - y;
    return d.is_exact_zero() || d.is_indeterminate();
}

bool Ball::contains(const PAdicNumber& x) const {
    PAdicNumber d = x - center;
    if (d.is_exact_zero()) return true;
    if (d.is_regular()) return -d.valuation() <= closed_log_radius;
    // |d| <= p^{-bound}: decisive iff the bound already places it inside.
    if (-d.zero_bound() <= closed_log_radius) return true;
    throw IndeterminateError("Ball::contains: membership undecidable at current precision");
}

bool Sphere::contains(const PAdicNumber& x) const {
    PAdicNumber d = x - center;
    if (d.is_exact_zero()) return false;
    if (d.is_regular()) return -d.valuation() == log_radius;
    if (-d.zero_bound() < log_radius) return false;  // provably inside the sphere
    throw IndeterminateError("Sphere::contains: membership undecidable at current precision");
}

}  // namespace qpdyn
