#include <doctest.h>

#include <cmath>

#include "psmp/errors.hpp"
#include "psmp/rational.hpp"
#include "testutil.hpp"

using namespace psmp;
using rat::parse;

TEST_CASE("integer powers are exact") {
    CHECK(rat::pow_int(parse("2/3"), 3) == parse("8/27"));
    CHECK(rat::pow_int(parse("2/3"), 0) == 1);
    CHECK(rat::pow_int(parse("2/3"), -2) == parse("9/4"));
    CHECK(rat::pow_int(parse("-1/2"), 3) == parse("-1/8"));
    CHECK_THROWS_AS(rat::pow_int(Rational(0), -1), Error);
}

TEST_CASE("directed fractional powers bracket the true value") {
    testutil::Rng rng(7);
    for (int it = 0; it < 200; ++it) {
        Rational x(testutil::rand_int(rng, 1, 50), testutil::rand_int(rng, 1, 50));
        x.canonicalize();
        Rational e(testutil::rand_int(rng, -5, 5), testutil::rand_int(rng, 1, 4));
        e.canonicalize();
        Rational lo = rat::pow_down(x, e);
        Rational hi = rat::pow_up(x, e);
        CHECK(lo <= hi);
        double truth = std::pow(rat::to_double(x), rat::to_double(e));
        CHECK(rat::to_double(lo) <= truth * (1 + 1e-12) + 1e-12);
        CHECK(rat::to_double(hi) >= truth * (1 - 1e-12) - 1e-12);
        if (rat::is_integer(e)) CHECK(lo == hi);  // no rounding without a root
    }
}

TEST_CASE("rounding error stays within the advertised precision") {
    Rational half(1, 2);
    Rational lo = rat::pow_down(half, half);  // sqrt(1/2)
    Rational hi = rat::pow_up(half, half);
    Rational gap = hi - lo;
    CHECK(gap >= 0);
    CHECK(gap <= Rational(1) / (mpz_class(1) << 60));
}

TEST_CASE("exact power comparison") {
    // (1/4)^(3/2) = 1/8 exactly
    CHECK(rat::le_pow(parse("1/8"), parse("1/4"), parse("3/2")));
    CHECK_FALSE(rat::le_pow(parse("1/8") + parse("1/1000000"), parse("1/4"), parse("3/2")));
    CHECK(rat::le_pow(Rational(0), parse("1/4"), parse("3/2")));
    CHECK(rat::le_pow(parse("1/100"), parse("1/10"), Rational(2)));
    CHECK_FALSE(rat::le_pow(parse("1/99"), parse("1/10"), Rational(2)));
}

TEST_CASE("floor and integrality") {
    CHECK(rat::floor_long(parse("7/2")) == 3);
    CHECK(rat::floor_long(parse("-7/2")) == -4);
    CHECK(rat::floor_long(Rational(5)) == 5);
    CHECK(rat::is_integer(Rational(4)));
    CHECK_FALSE(rat::is_integer(parse("1/3")));
}

TEST_CASE("parsing round-trips and rejects garbage") {
    for (const char* text : {"0", "-7", "3/4", "-22/7", "123456789123456789/2"}) {
        Rational q = parse(text);
        CHECK(parse(rat::to_string(q)) == q);
    }
    CHECK(parse("2/4") == parse("1/2"));  // canonicalized
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("1/0"), ParseError);
    CHECK_THROWS_AS(parse("a/b"), ParseError);
    CHECK_THROWS_AS(parse("1/-2"), ParseError);
    CHECK_THROWS_AS(parse("1.5"), ParseError);
    CHECK_THROWS_AS(parse("1/2/3"), ParseError);
}
