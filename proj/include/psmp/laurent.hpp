#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psmp/rational.hpp"

namespace psmp {

// Certificate |o(eps^k)| <= G * eps^(k + delta) for 0 < eps <= eps_max.
// G = 0 is the degenerate case of an identically-zero remainder.
struct RemainderBound {
    Rational delta;    // in (0, 1]
    Rational G;        // >= 0
    Rational eps_max;  // > 0

    bool operator==(const RemainderBound&) const = default;
};

// Truncated Laurent series in eps: a_h eps^h + ... + a_k eps^k + o(eps^k),
// with exact rational coefficients. "Pivotal" means the leading coefficient
// is nonzero; with exact arithmetic this is always decided from a_h itself.
// Values are immutable; every operation returns a fresh expansion.
class LaurentExpansion {
public:
    static LaurentExpansion make(long h, std::vector<Rational> coeffs, bool pivotal,
                                 std::optional<RemainderBound> bound = std::nullopt);

    long h() const { return h_; }
    long k() const { return h_ + static_cast<long>(coeffs_.size()) - 1; }
    long width() const { return static_cast<long>(coeffs_.size()) - 1; }
    bool pivotal() const { return pivotal_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    const std::optional<RemainderBound>& bound() const { return bound_; }

    // Coefficient of eps^order; zero outside the retained window.
    Rational coeff(long order) const;
    const Rational& lead() const { return coeffs_.front(); }

    LaurentExpansion with_bound(std::optional<RemainderBound> b) const;
    LaurentExpansion without_bound() const { return with_bound(std::nullopt); }

    bool operator==(const LaurentExpansion&) const = default;

private:
    LaurentExpansion() = default;

    long h_ = 0;
    std::vector<Rational> coeffs_;
    bool pivotal_ = false;
    std::optional<RemainderBound> bound_;
};

// Rewrites a certificate with delta > 1 into the equivalent form with
// delta in (0, 1], extending the window with explicit zero coefficients.
LaurentExpansion normalize_bound(long h, std::vector<Rational> coeffs, const Rational& delta,
                                 const Rational& G, const Rational& eps_max);

// Combines two representations of the same function into the most
// informative one; overlapping coefficients must agree exactly.
LaurentExpansion merge(const LaurentExpansion& a, const LaurentExpansion& b);

LaurentExpansion scale(const Rational& c, const LaurentExpansion& a);
LaurentExpansion add(const LaurentExpansion& a, const LaurentExpansion& b);
LaurentExpansion mul(const LaurentExpansion& a, const LaurentExpansion& b);
LaurentExpansion reciprocal(const LaurentExpansion& b);

// Quotient by the direct recurrence on output coefficients (not via
// mul(a, reciprocal(b)), which serves as an independent cross-check).
LaurentExpansion div(const LaurentExpansion& a, const LaurentExpansion& b);

// n-ary sum/product. Coefficients follow the pairwise rules; remainder
// certificates use the one-shot formulas, which are permutation-invariant
// and no looser than folding the binary rules.
LaurentExpansion sum_many(std::span<const LaurentExpansion> terms);
LaurentExpansion prod_many(std::span<const LaurentExpansion> factors);

// Constant c as a (0, n)-expansion with identically-zero remainder (G = 0).
LaurentExpansion constant(const Rational& value, long n, const Rational& eps_max = Rational(1));

// Trades certificate exponent down to delta_star <= delta, inflating G.
LaurentExpansion downgrade_delta(const LaurentExpansion& a, const Rational& delta_star);

// Partial sum at a concrete eps > 0 (remainder not included).
Rational evaluate(const LaurentExpansion& a, const Rational& epsilon);

// Sound coarsening of a certificate: G rounded up and eps_max rounded down
// to 64 fractional bits, so denominators stay small through long pipelines.
RemainderBound compress_bound(const RemainderBound& b);

std::string to_string(const LaurentExpansion& a);

}  // namespace psmp
