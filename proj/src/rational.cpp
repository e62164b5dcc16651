#include "psmp/rational.hpp"

#include <cctype>

#include "psmp/errors.hpp"

namespace psmp::rat {

namespace {

constexpr unsigned long kRootBits = 64;

// Largest r with r/2^s <= x^(1/n); retries at higher precision so a positive
// x never rounds down to zero.
Rational nth_root_down(const Rational& x, unsigned long n) {
    if (sgn(x) == 0) return Rational(0);
    for (unsigned long s = kRootBits;; s *= 2) {
        mpz_class radicand;
        mpz_mul_2exp(radicand.get_mpz_t(), x.get_num().get_mpz_t(), s * n);
        mpz_fdiv_q(radicand.get_mpz_t(), radicand.get_mpz_t(), x.get_den().get_mpz_t());
        mpz_class root;
        mpz_root(root.get_mpz_t(), radicand.get_mpz_t(), n);
        if (sgn(root) > 0) {
            mpz_class scale;
            mpz_ui_pow_ui(scale.get_mpz_t(), 2, s);
            Rational out(root, scale);
            out.canonicalize();
            return out;
        }
    }
}

// Smallest representable r/2^64 with r/2^64 >= x^(1/n).
Rational nth_root_up(const Rational& x, unsigned long n) {
    if (sgn(x) == 0) return Rational(0);
    mpz_class radicand;
    mpz_mul_2exp(radicand.get_mpz_t(), x.get_num().get_mpz_t(), kRootBits * n);
    mpz_cdiv_q(radicand.get_mpz_t(), radicand.get_mpz_t(), x.get_den().get_mpz_t());
    mpz_class root;
    int exact = mpz_root(root.get_mpz_t(), radicand.get_mpz_t(), n);
    if (!exact) root += 1;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, kRootBits);
    Rational out(root, scale);
    out.canonicalize();
    return out;
}

long exponent_numerator(const Rational& e) {
    if (!e.get_num().fits_slong_p())
        throw Error("exponent numerator out of range: " + to_string(e));
    return e.get_num().get_si();
}

}  // namespace

Rational pow_int(const Rational& x, long e) {
    if (e == 0) return Rational(1);
    bool invert = e < 0;
    unsigned long mag = invert ? static_cast<unsigned long>(-(e + 1)) + 1
                               : static_cast<unsigned long>(e);
    if (invert && sgn(x) == 0) throw Error("zero base with negative exponent");
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), x.get_num().get_mpz_t(), mag);
    mpz_pow_ui(den.get_mpz_t(), x.get_den().get_mpz_t(), mag);
    Rational out = invert ? Rational(den, num) : Rational(num, den);
    out.canonicalize();
    return out;
}

Rational pow_up(const Rational& x, const Rational& e) {
    if (sgn(x) <= 0) throw Error("pow_up requires a positive base");
    unsigned long v = e.get_den().get_ui();
    long u = exponent_numerator(e);
    if (v == 1) return pow_int(x, u);
    if (u >= 0) return nth_root_up(pow_int(x, u), v);
    return 1 / nth_root_down(pow_int(x, -u), v);
}

Rational pow_down(const Rational& x, const Rational& e) {
    if (sgn(x) <= 0) throw Error("pow_down requires a positive base");
    unsigned long v = e.get_den().get_ui();
    long u = exponent_numerator(e);
    if (v == 1) return pow_int(x, u);
    if (u >= 0) return nth_root_down(pow_int(x, u), v);
    return 1 / nth_root_up(pow_int(x, -u), v);
}

bool le_pow(const Rational& lhs, const Rational& base, const Rational& e) {
    if (sgn(base) <= 0) throw Error("le_pow requires a positive base");
    if (sgn(lhs) <= 0) return true;
    unsigned long v = e.get_den().get_ui();
    long u = exponent_numerator(e);
    return pow_int(lhs, static_cast<long>(v)) <= pow_int(base, u);
}

long floor_long(const Rational& x) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    if (!q.fits_slong_p()) throw Error("floor out of range");
    return q.get_si();
}

bool is_integer(const Rational& x) { return x.get_den() == 1; }

Rational parse(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    std::size_t i = text[0] == '-' ? 1 : 0;
    bool seen_digit = false, seen_slash = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            seen_digit = true;
        } else if (c == '/' && !seen_slash && seen_digit) {
            seen_slash = true;
            seen_digit = false;
        } else {
            throw ParseError("bad rational literal: " + text);
        }
    }
    if (!seen_digit) throw ParseError("bad rational literal: " + text);
    Rational out;
    if (mpq_set_str(out.get_mpq_t(), text.c_str(), 10) != 0)
        throw ParseError("bad rational literal: " + text);
    if (sgn(Rational(out.get_den())) == 0)
        throw ParseError("zero denominator: " + text);
    out.canonicalize();
    return out;
}

std::string to_string(const Rational& x) { return x.get_str(); }

double to_double(const Rational& x) { return x.get_d(); }

}  // namespace psmp::rat
