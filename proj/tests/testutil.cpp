#include "testutil.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace psmp::testutil {

namespace {

constexpr long kDegree = 3;  // maximal polynomial degree per entry

std::optional<RemainderBound> rand_certificate(Rng& rng, const ModelOpts& opts) {
    if (!opts.bounded) return std::nullopt;
    Rational delta = opts.half_deltas && rand_int(rng, 0, 2) == 0 ? Rational(1, 2) : Rational(1);
    Rational g = rand_int(rng, 0, 1) == 0 ? Rational(0)
                                          : Rational(rand_int(rng, 1, 3), rand_int(rng, 1, 4));
    g.canonicalize();
    return RemainderBound{delta, g, opts.eps0};
}

LaurentExpansion from_poly(const std::vector<Rational>& poly, Rng& rng, const ModelOpts& opts) {
    long lead = 0;
    while (lead < static_cast<long>(poly.size()) && sgn(poly[static_cast<std::size_t>(lead)]) == 0)
        ++lead;
    std::vector<Rational> coeffs(poly.begin() + lead, poly.end());
    return LaurentExpansion::make(lead, std::move(coeffs), false, rand_certificate(rng, opts));
}

}  // namespace

PerturbedSMP rand_model(Rng& rng, int n, const ModelOpts& opts) {
    PerturbedSMP m;
    m.eps0 = opts.eps0;
    m.bounded_mode = opts.bounded;
    m.polynomial_exact = true;
    for (int s = 1; s <= n; ++s) m.states.push_back(s);

    // transition sets: a full cycle plus random extra edges and self-loops
    std::map<int, std::set<int>> sets;
    for (int i = 1; i <= n; ++i) {
        sets[i].insert(i % n + 1);
        for (int j = 1; j <= n; ++j)
            if (j != i % n + 1 && rand_int(rng, 0, 99) < (i == j ? 40 : 35)) sets[i].insert(j);
    }

    for (int i = 1; i <= n; ++i) {
        std::vector<int> row(sets[i].begin(), sets[i].end());
        m.transition_sets[i] = row;

        // split the row into order-zero carriers and perturbative entries
        std::vector<int> carriers;
        for (int j : row)
            if (rand_int(rng, 0, 1) == 0) carriers.push_back(j);
        if (carriers.empty()) carriers.push_back(row[static_cast<std::size_t>(
            rand_int(rng, 0, static_cast<int>(row.size()) - 1))]);

        std::map<int, std::vector<Rational>> poly;
        for (int j : row) poly[j].assign(kDegree + 1, Rational(0));
        Rational total(0);
        std::map<int, Rational> budget;  // how much each carrier may still donate
        for (int j : carriers) {
            Rational w(rand_int(rng, 1, 4));
            poly[j][0] = w;
            total += w;
        }
        for (int j : carriers) {
            poly[j][0] /= total;
            budget[j] = poly[j][0];
        }
        auto donate = [&](int to, long order) {
            int from = carriers[static_cast<std::size_t>(
                rand_int(rng, 0, static_cast<int>(carriers.size()) - 1))];
            if (from == to) return;
            Rational amount = budget[from] / 2;
            budget[from] = amount;
            poly[from][static_cast<std::size_t>(order)] -= amount;
            poly[to][static_cast<std::size_t>(order)] += amount;
        };
        for (int j : row) {
            bool is_carrier = std::find(carriers.begin(), carriers.end(), j) != carriers.end();
            if (!is_carrier) donate(j, rand_int(rng, 1, kDegree));  // never bounces
        }
        int wiggles = rand_int(rng, 0, 2);
        for (int t = 0; t < wiggles; ++t)
            donate(row[static_cast<std::size_t>(rand_int(rng, 0, static_cast<int>(row.size()) - 1))],
                   rand_int(rng, 1, kDegree));

        for (int j : row) m.p.emplace(std::make_pair(i, j), from_poly(poly[j], rng, opts));
    }

    if (opts.discrete_time) {
        m.e = m.p;
    } else {
        for (int i = 1; i <= n; ++i)
            for (int j : m.transition_sets[i]) {
                long m_minus = opts.laurent_sojourns ? rand_int(rng, -1, 1) : rand_int(rng, 0, 1);
                std::vector<Rational> coeffs{rand_positive_rational(rng)};
                int extra = rand_int(rng, 0, 2);
                for (int t = 0; t < extra; ++t) {
                    Rational c(rand_int(rng, 0, 3), rand_int(rng, 1, 3));
                    c.canonicalize();
                    coeffs.push_back(c);
                }
                m.e.emplace(std::make_pair(i, j),
                            LaurentExpansion::make(m_minus, std::move(coeffs), false,
                                                   rand_certificate(rng, opts)));
            }
    }

    auto report = validate(m);
    if (!report.ok())
        throw std::logic_error("random model generator produced an invalid model: " +
                               report.violations.front().message);
    return m;
}

}  // namespace psmp::testutil
