#include <doctest.h>

#include <functional>

#include "psmp/laurent.hpp"
#include "testutil.hpp"

using namespace psmp;
using namespace psmp::testutil;

namespace {

LaurentExpansion strip(const LaurentExpansion& a) { return a.without_bound(); }

}  // namespace

TEST_CASE("window length laws") {
    Rng rng(11);
    ExpansionOpts piv;
    piv.pivotal = true;
    for (int it = 0; it < 2000; ++it) {
        auto a = rand_expansion(rng);
        auto b = rand_expansion(rng);
        auto bp = rand_expansion(rng, piv);
        CHECK(scale(rand_rational(rng), a).width() == a.width());
        long ws = add(a, b).width();
        CHECK(ws >= std::min(a.width(), b.width()));
        CHECK(ws <= std::max(a.width(), b.width()));
        CHECK(mul(a, b).width() == std::min(a.width(), b.width()));
        CHECK(reciprocal(bp).width() == bp.width());
        CHECK(div(a, bp).width() == std::min(a.width(), bp.width()));
    }
}

TEST_CASE("commutativity, associativity, distributivity of coefficients") {
    Rng rng(13);
    for (int it = 0; it < 2000; ++it) {
        auto a = strip(rand_expansion(rng));
        auto b = strip(rand_expansion(rng));
        auto c = strip(rand_expansion(rng));
        CHECK(add(a, b) == add(b, a));
        CHECK(mul(a, b) == mul(b, a));
        CHECK(add(add(a, b), c) == add(a, add(b, c)));
        CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
        CHECK(mul(add(a, b), c) == add(mul(a, c), mul(b, c)));
    }
}

TEST_CASE("certificate parameters of add and mul are symmetric") {
    Rng rng(17);
    ExpansionOpts opts;
    opts.with_bound = true;
    opts.deltas = {Rational(1), Rational(1, 2), Rational(3, 4)};
    for (int it = 0; it < 2000; ++it) {
        auto a = rand_expansion(rng, opts);
        auto b = rand_expansion(rng, opts);
        CHECK(add(a, b).bound() == add(b, a).bound());
        CHECK(mul(a, b).bound() == mul(b, a).bound());
    }
}

TEST_CASE("reciprocal and quotient coefficients match schoolbook long division") {
    Rng rng(19);
    ExpansionOpts piv;
    piv.pivotal = true;
    for (int it = 0; it < 2000; ++it) {
        auto b = rand_expansion(rng, piv);
        auto r = reciprocal(b);
        auto expect = longdiv_series({Rational(1)}, b.coeffs(),
                                     static_cast<std::size_t>(b.width()) + 1);
        CHECK(r.coeffs() == expect);
        CHECK(r.h() == -b.h());

        auto a = rand_expansion(rng);
        auto d = div(a, b);
        auto expect_d = longdiv_series(a.coeffs(), b.coeffs(),
                                       static_cast<std::size_t>(d.width()) + 1);
        CHECK(d.coeffs() == expect_d);
        CHECK(d.h() == a.h() - b.h());
    }
}

TEST_CASE("quotient agrees with multiplication by the reciprocal") {
    Rng rng(23);
    ExpansionOpts piv;
    piv.pivotal = true;
    for (int it = 0; it < 2000; ++it) {
        auto a = strip(rand_expansion(rng));
        auto b = strip(rand_expansion(rng, piv));
        auto direct = div(a, b);
        auto indirect = mul(a, reciprocal(b));
        CHECK(direct.h() == indirect.h());
        CHECK(direct.k() == indirect.k());
        CHECK(direct.coeffs() == indirect.coeffs());
    }
}

TEST_CASE("delta of a composite never drops below the smallest input delta") {
    Rng rng(29);
    ExpansionOpts opts;
    opts.with_bound = true;
    opts.deltas = {Rational(1), Rational(1, 2), Rational(3, 4), Rational(1, 3)};
    for (int it = 0; it < 500; ++it) {
        std::vector<LaurentExpansion> inputs;
        Rational min_delta(1);
        for (int i = 0; i < 4; ++i) {
            inputs.push_back(rand_expansion(rng, opts));
            min_delta = std::min(min_delta, inputs.back().bound()->delta);
        }
        LaurentExpansion acc = inputs[0];
        for (int step = 1; step < 4; ++step) {
            int op = rand_int(rng, 0, 2);
            if (op == 0)
                acc = add(acc, inputs[static_cast<std::size_t>(step)]);
            else if (op == 1)
                acc = mul(acc, inputs[static_cast<std::size_t>(step)]);
            else if (acc.pivotal())
                acc = div(inputs[static_cast<std::size_t>(step)], acc);
            else
                acc = add(acc, inputs[static_cast<std::size_t>(step)]);
        }
        REQUIRE(acc.bound().has_value());
        CHECK(acc.bound()->delta >= min_delta);
        // and the downgrade to exactly that floor succeeds
        CHECK(downgrade_delta(acc, min_delta).bound()->delta == min_delta);
    }
}

// Certified-bound soundness: build expansions of known rational functions
// through the arithmetic and check |f(eps) - partial_sum(eps)| against the
// certificate, exactly, on a geometric grid.
namespace {

struct TrackedFn {
    LaurentExpansion expansion;
    std::function<Rational(const Rational&)> value;
};

// a random polynomial known in full, represented either exactly (G = 0) or
// truncated with a hand-derived tail certificate
TrackedFn tracked_leaf(Rng& rng, const Rational& eps0, bool force_positive) {
    int degree = rand_int(rng, 0, 4);
    std::vector<Rational> full;
    for (int l = 0; l <= degree; ++l)
        full.push_back(force_positive ? rand_positive_rational(rng) : rand_rational(rng));
    if (sgn(full[0]) == 0) full[0] = rand_positive_rational(rng);

    long k = rand_int(rng, 0, degree);
    std::vector<Rational> coeffs(full.begin(), full.begin() + k + 1);
    Rational delta = rand_int(rng, 0, 1) ? Rational(1) : Rational(1, 2);
    Rational g(0);
    for (long l = k + 1; l <= degree; ++l)
        g += abs(full[static_cast<std::size_t>(l)]) *
             rat::pow_up(eps0, Rational(l - k) - delta);
    auto expansion =
        LaurentExpansion::make(0, std::move(coeffs), false, RemainderBound{delta, g, eps0});
    auto value = [full](const Rational& eps) {
        Rational acc(0);
        for (std::size_t l = 0; l < full.size(); ++l)
            acc += full[l] * rat::pow_int(eps, static_cast<long>(l));
        return acc;
    };
    return {expansion, value};
}

void check_sound(const TrackedFn& t, const Rational& eps0) {
    REQUIRE(t.expansion.bound().has_value());
    const auto& b = *t.expansion.bound();
    Rational eps = std::min(eps0, b.eps_max);
    for (int step = 0; step < 5; ++step, eps /= 4) {
        Rational err = abs(t.value(eps) - evaluate(t.expansion, eps));
        bool ok = sgn(b.G) == 0
                      ? sgn(err) == 0
                      : rat::le_pow(err / b.G, eps, Rational(t.expansion.k()) + b.delta);
        CHECK_MESSAGE(ok, "remainder ", rat::to_string(err), " exceeds certificate at eps = ",
                      rat::to_string(eps), " for ", to_string(t.expansion));
    }
}

}  // namespace

TEST_CASE("certificates stay sound through random arithmetic") {
    Rng rng(31);
    const Rational eps0(1, 4);
    for (int it = 0; it < 400; ++it) {
        TrackedFn acc = tracked_leaf(rng, eps0, false);
        for (int step = 0; step < 3; ++step) {
            int op = rand_int(rng, 0, 3);
            if (op == 0) {
                TrackedFn rhs = tracked_leaf(rng, eps0, false);
                auto lhs_val = acc.value, rhs_val = rhs.value;
                acc = {add(acc.expansion, rhs.expansion),
                       [lhs_val, rhs_val](const Rational& e) -> Rational { return lhs_val(e) + rhs_val(e); }};
            } else if (op == 1) {
                TrackedFn rhs = tracked_leaf(rng, eps0, false);
                auto lhs_val = acc.value, rhs_val = rhs.value;
                acc = {mul(acc.expansion, rhs.expansion),
                       [lhs_val, rhs_val](const Rational& e) -> Rational { return lhs_val(e) * rhs_val(e); }};
            } else if (op == 2) {
                // divisor with positive coefficients is nonzero on (0, eps0]
                TrackedFn rhs = tracked_leaf(rng, eps0, true);
                auto lhs_val = acc.value, rhs_val = rhs.value;
                acc = {div(acc.expansion, rhs.expansion),
                       [lhs_val, rhs_val](const Rational& e) -> Rational { return lhs_val(e) / rhs_val(e); }};
            } else {
                Rational c = rand_rational(rng);
                auto lhs_val = acc.value;
                acc = {scale(c, acc.expansion),
                       [c, lhs_val](const Rational& e) -> Rational { return c * lhs_val(e); }};
            }
        }
        check_sound(acc, eps0);
    }
}

TEST_CASE("reciprocal certificates stay sound") {
    Rng rng(37);
    const Rational eps0(1, 4);
    for (int it = 0; it < 400; ++it) {
        TrackedFn leaf = tracked_leaf(rng, eps0, true);
        auto val = leaf.value;
        TrackedFn rec{reciprocal(leaf.expansion),
                      [val](const Rational& e) -> Rational { return 1 / val(e); }};
        check_sound(rec, eps0);
    }
}
