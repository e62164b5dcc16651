#include "psmp/stationary.hpp"

#include <algorithm>
#include <limits>

#include "psmp/reduction.hpp"

namespace psmp {

LaurentExpansion sojourn(const PerturbedSMP& m, int i) {
    std::vector<LaurentExpansion> terms;
    for (int j : m.transition_set(i)) terms.push_back(m.e_at(i, j));
    if (terms.empty()) throw EmptySubset("state " + std::to_string(i) + " has no transitions");
    return sum_many(terms);
}

StationaryReport stationary_distribution(const PerturbedSMP& m, bool force) {
    StationaryReport report;
    auto complain = [&](const std::string& msg) { report.violations.push_back(msg); };

    for (int i : m.states) {
        LaurentExpansion E_ii = hitting_expectation(m, i);
        if (!E_ii.pivotal() || sgn(E_ii.lead()) <= 0)
            complain("return-time expansion at state " + std::to_string(i) +
                     " lacks a positive lead");
        LaurentExpansion e_i = sojourn(m, i);
        LaurentExpansion pi = div(e_i, E_ii);
        Rational limit = pi.h() == 0 ? pi.coeff(0) : Rational(0);
        report.states.push_back({i, std::move(e_i), std::move(E_ii), std::move(pi),
                                 std::move(limit)});
    }

    long min_order = std::numeric_limits<long>::max();
    long n_plus = std::numeric_limits<long>::max();
    for (const auto& s : report.states) {
        if (s.pi.h() < 0)
            complain("negative stationary order at state " + std::to_string(s.state));
        if (sgn(s.pi.lead()) <= 0)
            complain("stationary lead coefficient at state " + std::to_string(s.state) +
                     " is not positive");
        min_order = std::min(min_order, s.pi.h());
        n_plus = std::min(n_plus, s.pi.k());
        if (s.pi.h() == 0) report.x0.push_back(s.state);
    }
    if (min_order != 0) complain("no state has a stationary probability of order zero");

    report.n_plus = n_plus;
    for (long l = 0; l <= n_plus; ++l) {
        Rational sum(0);
        for (const auto& s : report.states) sum += s.pi.coeff(l);
        Rational residual = sum - Rational(l == 0 ? 1 : 0);
        report.coefficient_sum_residuals.push_back(residual);
        if (sgn(residual) != 0)
            complain("stationary coefficients at order " + std::to_string(l) +
                     " sum to " + rat::to_string(sum));
    }

    if (!report.ok() && !force) throw InvariantViolation(std::move(report));
    return report;
}

}  // namespace psmp
