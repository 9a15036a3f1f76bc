#pragma once

#include "qpdyn/padic.hpp"

#include <optional>
#include <string>
#include <utility>

namespace qpdyn {

/// Which stratum of the square-root analysis of a^2 + 4 decided the verdict.
enum class SqrtCase {
    PGe3SmallA,        // |a| < 1, p >= 3
    P2KGe3,            // |a| < 1, p = 2, v(a) >= 3
    P2KEq2,            // |a| < 1, p = 2, v(a) = 2
    P2KEq1,            // |a| < 1, p = 2, v(a) = 1
    ALarge,            // |a| > 1
    UnitAP2,           // |a| = 1, p = 2
    UnitAP3,           // |a| = 1, p = 3
    UnitAResidue,      // |a| = 1, p >= 5, a^2+4 a unit: residue test
    UnitADegenerate,   // |a| = 1, p >= 5, |a^2+4| < 1, three-digit condition holds
    UnitAUndetermined, // |a| = 1, p >= 5, |a^2+4| < 1, condition fails; decided directly
};

std::string to_string(SqrtCase c);

struct ExistenceVerdict {
    bool exists;
    SqrtCase case_tag;
    std::optional<std::int64_t> witness;  // residue x with x^2 ≡ unit(a^2+4) (mod p)
};

/// True iff x^2 ≡ a0 (mod p) has a solution; decided by enumerating residues.
bool is_quadratic_residue(std::int64_t a0, Prime p);

/// Smallest residue in [1, p-1] squaring to a0 mod p, if any.
std::optional<std::int64_t> residue_sqrt(std::int64_t a0, Prime p);

/// Square-root existence in Q_p: even valuation, and the leading unit digit a
/// quadratic residue (p odd) or digits d1 = d2 = 0 (p = 2).
/// At p = 2 at least 3 guaranteed digits are required.
bool sqrt_exists(const PAdicNumber& x);

struct SqrtPair {
    PAdicNumber root;      // the branch whose seed residue is smaller
    PAdicNumber neg_root;  // == -root
};

/// Digit-by-digit lift of the square root to `precision` digits (one less at
/// p = 2, where the root is only determined that far by the radicand).
/// Requires sqrt_exists(x); an exact zero maps to (0, 0).
SqrtPair padic_sqrt(const PAdicNumber& x, int precision);

/// Existence of sqrt(a^2 + 4), dispatched on the |a| stratum. The tag records
/// which analysis applied; `exists` always agrees with the direct digit
/// criterion on a^2 + 4 whenever that value is determinate.
ExistenceVerdict sqrt_a2p4_verdict(const PAdicNumber& a);

/// Roots of z^2 + b z + c = 0 via the discriminant b^2 - 4c; the first root
/// takes the canonical square-root branch. Throws std::domain_error when the
/// discriminant has no square root.
std::pair<PAdicNumber, PAdicNumber> solve_monic_quadratic(const PAdicNumber& b, const PAdicNumber& c,
                                                          int precision);

/// The two nonzero fixed-point candidates (-a ± sqrt(a^2+4)) / 2, i.e. the
/// roots of x^2 + a x - 1 = 0. First component is the +branch.
std::pair<PAdicNumber, PAdicNumber> solve_fixed_quadratic(const PAdicNumber& a, int precision);

}  // namespace qpdyn
