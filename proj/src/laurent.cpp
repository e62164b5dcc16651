#include "psmp/laurent.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "psmp/errors.hpp"

namespace psmp {

namespace {

using rat::pow_int;
using rat::pow_up;

void check_bound(const RemainderBound& b) {
    if (sgn(b.delta) <= 0 || b.delta > 1)
        throw InvalidBound("delta must lie in (0, 1], got " + rat::to_string(b.delta));
    if (sgn(b.G) < 0) throw InvalidBound("G must be nonnegative");
    if (sgn(b.eps_max) <= 0) throw InvalidBound("eps_max must be positive");
}

bool all_bounded(std::span<const LaurentExpansion> xs) {
    return std::all_of(xs.begin(), xs.end(),
                       [](const LaurentExpansion& x) { return x.bound().has_value(); });
}

Rational min_eps(std::span<const LaurentExpansion> xs) {
    Rational m = xs[0].bound()->eps_max;
    for (const auto& x : xs) m = std::min(m, x.bound()->eps_max);
    return m;
}

// Exponents handed to pow_up below are all nonnegative: each is an integer
// gap >= 0 plus a difference of deltas that the selection rules keep >= 0.
Rational expo(long integer_part, const Rational& plus, const Rational& minus) {
    return Rational(integer_part) + plus - minus;
}

// delta of a combined certificate: the smaller delta wins only where its
// side determines the output order k.
Rational pick_delta(long k_from_a, const Rational& da, long k_from_b, const Rational& db) {
    if (k_from_a < k_from_b) return da;
    if (k_from_b < k_from_a) return db;
    return std::min(da, db);
}

std::optional<RemainderBound> sum_bound(std::span<const LaurentExpansion> xs, long k_out) {
    if (!all_bounded(xs)) return std::nullopt;
    Rational eps = min_eps(xs);
    Rational delta(std::numeric_limits<long>::max());
    for (const auto& x : xs)
        if (x.k() == k_out) delta = std::min(delta, x.bound()->delta);
    Rational g(0);
    for (const auto& x : xs) {
        const auto& b = *x.bound();
        g += b.G * pow_up(eps, expo(x.k() - k_out, b.delta, delta));
        for (long j = k_out + 1; j <= x.k(); ++j)
            g += abs(x.coeff(j)) * pow_up(eps, expo(j - k_out, 0, delta));
    }
    return RemainderBound{delta, g, eps};
}

std::optional<RemainderBound> mul_bound(const LaurentExpansion& a, const LaurentExpansion& b,
                                        long k_out) {
    if (!a.bound() || !b.bound()) return std::nullopt;
    const auto& ba = *a.bound();
    const auto& bb = *b.bound();
    Rational eps = std::min(ba.eps_max, bb.eps_max);
    Rational delta = pick_delta(b.h() + a.k(), ba.delta, a.h() + b.k(), bb.delta);
    Rational g(0);
    for (long i = a.h(); i <= a.k(); ++i)
        for (long j = b.h(); j <= b.k(); ++j)
            if (i + j > k_out)
                g += abs(a.coeff(i)) * abs(b.coeff(j)) * pow_up(eps, expo(i + j - k_out, 0, delta));
    for (long j = b.h(); j <= b.k(); ++j)
        g += ba.G * abs(b.coeff(j)) * pow_up(eps, expo(j + a.k() - k_out, ba.delta, delta));
    for (long i = a.h(); i <= a.k(); ++i)
        g += bb.G * abs(a.coeff(i)) * pow_up(eps, expo(i + b.k() - k_out, bb.delta, delta));
    g += ba.G * bb.G * pow_up(eps, expo(a.k() + b.k() - k_out, ba.delta + bb.delta, delta));
    return RemainderBound{delta, g, eps};
}

// Validity cutoff below which |B(eps)| >= |b_h| eps^h / 2 is guaranteed.
// Returns nullopt for "no constraint" (possible only when G = 0).
std::optional<Rational> pivot_cutoff(const LaurentExpansion& b) {
    const auto& bb = *b.bound();
    Rational half_lead = abs(b.lead()) / 2;
    if (b.h() == b.k()) {
        if (sgn(bb.G) == 0) return std::nullopt;
        return rat::pow_down(half_lead / bb.G, 1 / bb.delta);
    }
    Rational denom(0);
    for (long i = b.h() + 1; i <= b.k(); ++i)
        denom += abs(b.coeff(i)) * pow_up(bb.eps_max, Rational(i - b.h() - 1));
    denom += bb.G * pow_up(bb.eps_max, expo(b.k() - b.h() - 1, bb.delta, 0));
    if (sgn(denom) == 0) return std::nullopt;
    return half_lead / denom;
}

std::optional<RemainderBound> reciprocal_bound(const LaurentExpansion& b,
                                               const LaurentExpansion& c) {
    if (!b.bound()) return std::nullopt;
    const auto& bb = *b.bound();
    Rational eps = bb.eps_max;
    if (auto cut = pivot_cutoff(b)) eps = std::min(eps, *cut);
    Rational g(0);
    for (long i = b.h(); i <= b.k(); ++i)
        for (long j = c.h(); j <= c.k(); ++j)
            if (i + j > b.k() - b.h())
                g += abs(b.coeff(i)) * abs(c.coeff(j)) *
                     pow_up(eps, expo(i + j - b.k() + b.h(), 0, bb.delta));
    for (long j = c.h(); j <= c.k(); ++j)
        g += bb.G * abs(c.coeff(j)) * pow_up(eps, Rational(j + b.h()));
    g *= 2 / abs(b.lead());
    return RemainderBound{bb.delta, g, eps};
}

std::optional<RemainderBound> div_bound(const LaurentExpansion& a, const LaurentExpansion& b,
                                        const LaurentExpansion& d) {
    if (!a.bound() || !b.bound()) return std::nullopt;
    const auto& ba = *a.bound();
    const auto& bb = *b.bound();
    long k_out = d.k();
    Rational delta =
        pick_delta(a.k() - b.h(), ba.delta, a.h() + b.k() - 2 * b.h(), bb.delta);
    Rational eps = std::min(ba.eps_max, bb.eps_max);
    if (auto cut = pivot_cutoff(b)) eps = std::min(eps, *cut);
    long cross = std::min(a.k(), a.h() + b.k() - b.h());
    Rational g(0);
    for (long i = cross + 1; i <= a.k(); ++i)
        g += abs(a.coeff(i)) * pow_up(eps, expo(i - b.h() - k_out, 0, delta));
    for (long i = b.h(); i <= b.k(); ++i)
        for (long j = d.h(); j <= d.k(); ++j)
            if (i + j > cross)
                g += abs(b.coeff(i)) * abs(d.coeff(j)) *
                     pow_up(eps, expo(i + j - k_out - b.h(), 0, delta));
    g += ba.G * pow_up(eps, expo(a.k() - b.h() - k_out, ba.delta, delta));
    for (long j = d.h(); j <= d.k(); ++j)
        g += bb.G * abs(d.coeff(j)) * pow_up(eps, expo(j + b.k() - b.h() - k_out, bb.delta, delta));
    g *= 2 / abs(b.lead());
    return RemainderBound{delta, g, eps};
}

std::optional<RemainderBound> prod_bound(std::span<const LaurentExpansion> xs, long k_out) {
    if (!all_bounded(xs)) return std::nullopt;
    const std::size_t n = xs.size();
    Rational eps = min_eps(xs);
    long h_sum = 0;
    for (const auto& x : xs) h_sum += x.h();
    Rational delta(std::numeric_limits<long>::max());
    for (const auto& x : xs)
        if (x.k() + (h_sum - x.h()) == k_out) delta = std::min(delta, x.bound()->delta);

    Rational g(0);
    // cross terms of retained coefficients that overflow the output window
    std::vector<long> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = xs[i].h();
    while (true) {
        long order = 0;
        for (std::size_t i = 0; i < n; ++i) order += idx[i];
        if (order > k_out) {
            Rational prod(1);
            for (std::size_t i = 0; i < n; ++i) prod *= abs(xs[i].coeff(idx[i]));
            if (sgn(prod) != 0) g += prod * pow_up(eps, expo(order - k_out, 0, delta));
        }
        std::size_t pos = 0;
        while (pos < n && idx[pos] == xs[pos].k()) {
            idx[pos] = xs[pos].h();
            ++pos;
        }
        if (pos == n) break;
        ++idx[pos];
    }
    // one remainder factor, all other factors bounded by their total mass
    for (std::size_t j = 0; j < n; ++j) {
        Rational factor(1);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j) continue;
            Rational mass(0);
            for (long l = xs[i].h(); l <= xs[i].k(); ++l)
                mass += abs(xs[i].coeff(l)) * pow_up(eps, Rational(l));
            mass += xs[i].bound()->G * pow_up(eps, expo(xs[i].k(), xs[i].bound()->delta, 0));
            factor *= mass;
        }
        const auto& bj = *xs[j].bound();
        g += factor * bj.G * pow_up(eps, expo(xs[j].k() - k_out, bj.delta, delta));
    }
    return RemainderBound{delta, g, eps};
}

}  // namespace

LaurentExpansion LaurentExpansion::make(long h, std::vector<Rational> coeffs, bool pivotal,
                                        std::optional<RemainderBound> bound) {
    if (coeffs.empty()) throw EmptyCoefficients("an expansion needs at least one coefficient");
    if (pivotal && sgn(coeffs.front()) == 0)
        throw PivotalZeroLead("pivotal expansion with zero leading coefficient");
    if (bound) check_bound(*bound);
    LaurentExpansion out;
    out.h_ = h;
    out.pivotal_ = sgn(coeffs.front()) != 0;  // decidable, so the flag is normalized
    for (auto& c : coeffs) c.canonicalize();  // equality must stay decidable
    out.coeffs_ = std::move(coeffs);
    if (bound) {
        bound->delta.canonicalize();
        bound->G.canonicalize();
        bound->eps_max.canonicalize();
    }
    out.bound_ = std::move(bound);
    return out;
}

Rational LaurentExpansion::coeff(long order) const {
    if (order < h_ || order > k()) return Rational(0);
    return coeffs_[static_cast<std::size_t>(order - h_)];
}

LaurentExpansion LaurentExpansion::with_bound(std::optional<RemainderBound> b) const {
    if (b) check_bound(*b);
    LaurentExpansion out(*this);
    out.bound_ = std::move(b);
    return out;
}

LaurentExpansion normalize_bound(long h, std::vector<Rational> coeffs, const Rational& delta,
                                 const Rational& G, const Rational& eps_max) {
    if (sgn(delta) <= 0) throw InvalidBound("delta must be positive");
    if (delta <= 1)
        return LaurentExpansion::make(h, std::move(coeffs), false,
                                      RemainderBound{delta, G, eps_max});
    long fl = rat::floor_long(delta);
    bool integral = rat::is_integer(delta);
    long pad = fl - (integral ? 1 : 0);
    Rational new_delta = delta - fl + (integral ? 1 : 0);
    coeffs.insert(coeffs.end(), static_cast<std::size_t>(pad), Rational(0));
    return LaurentExpansion::make(h, std::move(coeffs), false,
                                  RemainderBound{new_delta, G, eps_max});
}

LaurentExpansion merge(const LaurentExpansion& a, const LaurentExpansion& b) {
    long h = std::max(a.h(), b.h());
    long k = std::max(a.k(), b.k());
    for (long l = a.h(); l < std::min(h, a.k() + 1); ++l)
        if (sgn(a.coeff(l)) != 0)
            throw InconsistentRepresentations("nonzero coefficient below the merged order");
    for (long l = b.h(); l < std::min(h, b.k() + 1); ++l)
        if (sgn(b.coeff(l)) != 0)
            throw InconsistentRepresentations("nonzero coefficient below the merged order");
    for (long l = h; l <= std::min(a.k(), b.k()); ++l)
        if (a.coeff(l) != b.coeff(l))
            throw InconsistentRepresentations("representations disagree at order " +
                                              std::to_string(l));
    const LaurentExpansion& tail = a.k() >= b.k() ? a : b;
    std::vector<Rational> coeffs;
    coeffs.reserve(static_cast<std::size_t>(k - h + 1));
    for (long l = h; l <= k; ++l)
        coeffs.push_back(l <= std::min(a.k(), b.k()) ? a.coeff(l) : tail.coeff(l));

    // certificate priority: larger k, then larger delta, then smaller G
    std::optional<RemainderBound> bound;
    if (a.k() != b.k()) {
        bound = tail.bound();
    } else if (a.bound() && b.bound()) {
        const auto& ba = *a.bound();
        const auto& bb = *b.bound();
        if (ba.delta != bb.delta) {
            bound = ba.delta > bb.delta ? ba : bb;
        } else {
            bound = RemainderBound{ba.delta, std::min(ba.G, bb.G),
                                   std::min(ba.eps_max, bb.eps_max)};
        }
    } else if (a.bound()) {
        bound = a.bound();
    } else {
        bound = b.bound();
    }
    return LaurentExpansion::make(h, std::move(coeffs), false, std::move(bound));
}

LaurentExpansion scale(const Rational& c, const LaurentExpansion& a) {
    std::vector<Rational> coeffs;
    coeffs.reserve(a.coeffs().size());
    for (const auto& x : a.coeffs()) coeffs.push_back(c * x);
    std::optional<RemainderBound> bound;
    if (a.bound()) bound = RemainderBound{a.bound()->delta, abs(c) * a.bound()->G,
                                          a.bound()->eps_max};
    return LaurentExpansion::make(a.h(), std::move(coeffs), false, std::move(bound));
}

LaurentExpansion add(const LaurentExpansion& a, const LaurentExpansion& b) {
    long h = std::min(a.h(), b.h());
    long k = std::min(a.k(), b.k());
    std::vector<Rational> coeffs;
    coeffs.reserve(static_cast<std::size_t>(k - h + 1));
    for (long l = h; l <= k; ++l) coeffs.push_back(a.coeff(l) + b.coeff(l));
    const LaurentExpansion args[] = {a, b};
    auto bound = sum_bound(args, k);
    return LaurentExpansion::make(h, std::move(coeffs), false, std::move(bound));
}

LaurentExpansion mul(const LaurentExpansion& a, const LaurentExpansion& b) {
    long h = a.h() + b.h();
    long k = std::min(a.h() + b.k(), b.h() + a.k());
    std::vector<Rational> coeffs(static_cast<std::size_t>(k - h + 1), Rational(0));
    for (long r = 0; r <= k - h; ++r)
        for (long i = 0; i <= r; ++i)
            coeffs[static_cast<std::size_t>(r)] +=
                a.coeff(a.h() + i) * b.coeff(b.h() + r - i);
    auto bound = mul_bound(a, b, k);
    return LaurentExpansion::make(h, std::move(coeffs), false, std::move(bound));
}

LaurentExpansion reciprocal(const LaurentExpansion& b) {
    if (!b.pivotal()) throw NotPivotal("reciprocal of a non-pivotal expansion");
    long h = -b.h();
    long w = b.width();
    std::vector<Rational> coeffs(static_cast<std::size_t>(w + 1), Rational(0));
    Rational inv_lead = 1 / b.lead();
    coeffs[0] = inv_lead;
    for (long r = 1; r <= w; ++r) {
        Rational acc(0);
        for (long i = 1; i <= r; ++i)
            acc += b.coeff(b.h() + i) * coeffs[static_cast<std::size_t>(r - i)];
        coeffs[static_cast<std::size_t>(r)] = -inv_lead * acc;
    }
    auto result = LaurentExpansion::make(h, std::move(coeffs), true);
    return result.with_bound(reciprocal_bound(b, result));
}

LaurentExpansion div(const LaurentExpansion& a, const LaurentExpansion& b) {
    if (!b.pivotal()) throw NotPivotal("division by a non-pivotal expansion");
    long h = a.h() - b.h();
    long w = std::min(a.width(), b.width());
    std::vector<Rational> coeffs(static_cast<std::size_t>(w + 1), Rational(0));
    Rational inv_lead = 1 / b.lead();
    for (long r = 0; r <= w; ++r) {
        Rational acc = a.coeff(a.h() + r);
        for (long i = 1; i <= r; ++i)
            acc -= b.coeff(b.h() + i) * coeffs[static_cast<std::size_t>(r - i)];
        coeffs[static_cast<std::size_t>(r)] = inv_lead * acc;
    }
    auto result = LaurentExpansion::make(h, std::move(coeffs), false);
    return result.with_bound(div_bound(a, b, result));
}

LaurentExpansion sum_many(std::span<const LaurentExpansion> terms) {
    if (terms.empty()) throw EmptySequence("sum of no expansions");
    if (terms.size() == 1) return terms[0];
    long h = terms[0].h(), k = terms[0].k();
    for (const auto& t : terms) {
        h = std::min(h, t.h());
        k = std::min(k, t.k());
    }
    std::vector<Rational> coeffs(static_cast<std::size_t>(k - h + 1), Rational(0));
    for (const auto& t : terms)
        for (long l = std::max(h, t.h()); l <= k; ++l)
            coeffs[static_cast<std::size_t>(l - h)] += t.coeff(l);
    auto bound = sum_bound(terms, k);
    return LaurentExpansion::make(h, std::move(coeffs), false, std::move(bound));
}

LaurentExpansion prod_many(std::span<const LaurentExpansion> factors) {
    if (factors.empty()) throw EmptySequence("product of no expansions");
    if (factors.size() == 1) return factors[0];
    LaurentExpansion acc = factors[0].without_bound();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = mul(acc, factors[i].without_bound());
    return acc.with_bound(prod_bound(factors, acc.k()));
}

LaurentExpansion constant(const Rational& value, long n, const Rational& eps_max) {
    if (n < 0) throw Error("constant expansion needs a nonnegative order");
    std::vector<Rational> coeffs(static_cast<std::size_t>(n + 1), Rational(0));
    coeffs[0] = value;
    return LaurentExpansion::make(0, std::move(coeffs), false,
                                  RemainderBound{Rational(1), Rational(0), eps_max});
}

LaurentExpansion downgrade_delta(const LaurentExpansion& a, const Rational& delta_star) {
    if (!a.bound()) throw InvalidBound("no certificate to downgrade");
    if (sgn(delta_star) <= 0) throw InvalidBound("delta must be positive");
    const auto& b = *a.bound();
    if (delta_star > b.delta)
        throw DeltaTooLarge("cannot raise delta from " + rat::to_string(b.delta) + " to " +
                            rat::to_string(delta_star));
    Rational g = b.G * pow_up(b.eps_max, b.delta - delta_star);
    return a.with_bound(RemainderBound{delta_star, g, b.eps_max});
}

Rational evaluate(const LaurentExpansion& a, const Rational& epsilon) {
    if (sgn(epsilon) <= 0) throw NonpositiveEpsilon("evaluation needs eps > 0");
    Rational acc(0);
    for (long l = a.h(); l <= a.k(); ++l) acc += a.coeff(l) * pow_int(epsilon, l);
    return acc;
}

RemainderBound compress_bound(const RemainderBound& b) {
    RemainderBound out = b;
    mpz_class scaled;
    mpz_mul_2exp(scaled.get_mpz_t(), b.G.get_num().get_mpz_t(), 64);
    mpz_cdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), b.G.get_den().get_mpz_t());
    out.G = Rational(scaled) / Rational(mpz_class(1) << 64);
    out.G.canonicalize();
    mpz_mul_2exp(scaled.get_mpz_t(), b.eps_max.get_num().get_mpz_t(), 64);
    mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), b.eps_max.get_den().get_mpz_t());
    if (sgn(scaled) > 0) {
        out.eps_max = Rational(scaled) / Rational(mpz_class(1) << 64);
        out.eps_max.canonicalize();
    }
    return out;
}

std::string to_string(const LaurentExpansion& a) {
    std::ostringstream os;
    auto power = [](long l) -> std::string {
        if (l == 0) return "";
        if (l == 1) return "*eps";
        return "*eps^" + std::to_string(l);
    };
    bool first = true;
    for (long l = a.h(); l <= a.k(); ++l) {
        Rational c = a.coeff(l);
        if (sgn(c) == 0) continue;
        if (first) {
            os << rat::to_string(c) << power(l);
            first = false;
        } else {
            os << (sgn(c) > 0 ? " + " : " - ") << rat::to_string(abs(c)) << power(l);
        }
    }
    if (first) os << "0";
    os << " + o(" << (a.k() == 0 ? std::string("1") : "eps^" + std::to_string(a.k())) << ")";
    return os.str();
}

}  // namespace psmp
