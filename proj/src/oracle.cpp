#include "psmp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psmp/errors.hpp"
#include "psmp/reduction.hpp"
#include "psmp/stationary.hpp"

namespace psmp {

namespace {

// Exact solve of A x = b by fraction-free elimination on the integer matrix
// obtained after clearing row denominators.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> A,
                                   std::vector<Rational> b) {
    const std::size_t n = A.size();
    std::vector<std::vector<mpz_class>> M(n, std::vector<mpz_class>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        mpz_class lcm = 1;
        for (std::size_t j = 0; j < n; ++j) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), A[i][j].get_den().get_mpz_t());
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), b[i].get_den().get_mpz_t());
        for (std::size_t j = 0; j < n; ++j)
            M[i][j] = A[i][j].get_num() * (lcm / A[i][j].get_den());
        M[i][n] = b[i].get_num() * (lcm / b[i].get_den());
    }
    mpz_class prev = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && sgn(M[pivot][col]) == 0) ++pivot;
        if (pivot == n) throw SingularSystem("singular linear system");
        std::swap(M[col], M[pivot]);
        for (std::size_t i = col + 1; i < n; ++i) {
            for (std::size_t j = col + 1; j <= n; ++j) {
                mpz_class t = M[col][col] * M[i][j] - M[i][col] * M[col][j];
                mpz_divexact(M[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            M[i][col] = 0;
        }
        prev = M[col][col];
    }
    std::vector<Rational> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        Rational acc(M[ii][n]);
        for (std::size_t j = ii + 1; j < n; ++j) acc -= Rational(M[ii][j]) * x[j];
        x[ii] = acc / Rational(M[ii][ii]);
        x[ii].canonicalize();
    }
    return x;
}

std::size_t position(const std::vector<int>& states, int s) {
    auto it = std::lower_bound(states.begin(), states.end(), s);
    if (it == states.end() || *it != s) throw Error("state " + std::to_string(s) + " unknown");
    return static_cast<std::size_t>(it - states.begin());
}

std::vector<Rational> sojourn_vector(const NumericSMP& num) {
    std::vector<Rational> e(num.states.size(), Rational(0));
    for (std::size_t i = 0; i < num.states.size(); ++i)
        for (std::size_t j = 0; j < num.states.size(); ++j) e[i] += num.E1[i][j];
    return e;
}

double fit_slope(const std::vector<std::pair<double, double>>& pts) {
    double mx = 0, my = 0;
    for (auto [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0, sxx = 0;
    for (auto [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    return sxy / sxx;
}

}  // namespace

NumericSMP instantiate(const PerturbedSMP& m, const Rational& epsilon, bool polynomial_exact) {
    if (sgn(epsilon) <= 0 || epsilon > m.eps0)
        throw EpsilonOutOfRange("eps must lie in (0, " + rat::to_string(m.eps0) + "]");
    NumericSMP num;
    num.epsilon = epsilon;
    num.polynomial_exact = polynomial_exact;
    num.states = m.states;
    const std::size_t n = m.states.size();
    num.P.assign(n, std::vector<Rational>(n, Rational(0)));
    num.E1.assign(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (int j : m.transition_set(m.states[i])) {
            std::size_t jj = position(m.states, j);
            num.P[i][jj] = evaluate(m.p_at(m.states[i], j), epsilon);
            num.E1[i][jj] = evaluate(m.e_at(m.states[i], j), epsilon);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        Rational sum(0);
        for (std::size_t j = 0; j < n; ++j) {
            sum += num.P[i][j];
            if (sgn(num.P[i][j]) < 0 || sgn(num.E1[i][j]) < 0)
                num.negative_entries.emplace_back(m.states[i], m.states[j]);
        }
        num.row_sum_residuals.push_back(1 - sum);
    }
    return num;
}

std::vector<Rational> numeric_embedded_stationary(const NumericSMP& num) {
    const std::size_t n = num.states.size();
    std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n, Rational(0)));
    std::vector<Rational> b(n, Rational(0));
    // balance equations for all targets but the last, plus normalization
    for (std::size_t j = 0; j + 1 < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            A[j][i] = num.P[i][j] - Rational(i == j ? 1 : 0);
    for (std::size_t i = 0; i < n; ++i) A[n - 1][i] = 1;
    b[n - 1] = 1;
    return solve_linear(std::move(A), std::move(b));
}

std::vector<Rational> numeric_stationary(const NumericSMP& num) {
    std::vector<Rational> rho = numeric_embedded_stationary(num);
    std::vector<Rational> e = sojourn_vector(num);
    Rational total(0);
    for (std::size_t i = 0; i < rho.size(); ++i) total += rho[i] * e[i];
    if (sgn(total) == 0) throw SingularSystem("zero total sojourn weight");
    std::vector<Rational> pi(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        pi[i] = rho[i] * e[i] / total;
        pi[i].canonicalize();
    }
    return pi;
}

std::vector<Rational> numeric_hitting(const NumericSMP& num, int j) {
    const std::size_t n = num.states.size();
    const std::size_t target = position(num.states, j);
    std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < n; ++r)
            A[i][r] = Rational(i == r ? 1 : 0) - (r == target ? Rational(0) : num.P[i][r]);
    return solve_linear(std::move(A), sojourn_vector(num));
}

ComparisonReport compare(const PerturbedSMP& m, std::vector<Rational> eps_grid) {
    ComparisonReport report;
    if (eps_grid.empty()) {
        Rational eps(1, 10);
        for (int d = 0; d < 4; ++d, eps /= 10)
            if (eps <= m.eps0) eps_grid.push_back(eps);
    }
    for (const auto& eps : eps_grid)
        if (sgn(eps) <= 0 || eps > m.eps0)
            throw EpsilonOutOfRange("grid point " + rat::to_string(eps) + " outside (0, eps0]");
    std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());

    StationaryReport stat = stationary_distribution(m, /*force=*/true);
    for (const auto& v : stat.violations) report.notes.push_back("stationary: " + v);

    struct Tracked {
        std::string name;
        bool is_pi;
        int from, to;
        LaurentExpansion expansion;
        std::vector<std::pair<double, double>> error_points;
    };
    std::vector<Tracked> tracked;
    for (const auto& s : stat.states) {
        tracked.push_back({"pi_" + std::to_string(s.state), true, s.state, s.state, s.pi, {}});
        tracked.push_back({"E_" + std::to_string(s.state) + "_" + std::to_string(s.state),
                           false, s.state, s.state, s.E_ii, {}});
    }
    for (int i : m.states)
        for (int j : m.states)
            if (i != j) {
                auto pair = pair_hitting(m, i, j);
                tracked.push_back({"E_" + std::to_string(i) + "_" + std::to_string(j),
                                   false, i, j, pair.E_ij, {}});
            }

    for (const auto& eps : eps_grid) {
        NumericSMP num = instantiate(m, eps, m.polynomial_exact);
        std::vector<Rational> pi = numeric_stationary(num);
        std::vector<std::vector<Rational>> hitting;  // hitting[jj][ii] = E to states[jj] from states[ii]
        for (int j : m.states) hitting.push_back(numeric_hitting(num, j));

        for (auto& t : tracked) {
            Rational oracle =
                t.is_pi ? pi[position(m.states, t.from)]
                        : hitting[position(m.states, t.to)][position(m.states, t.from)];
            Rational partial = evaluate(t.expansion, eps);
            Rational err = abs(oracle - partial);
            QuantityComparison row{t.name, eps, oracle, partial, err, std::nullopt, std::nullopt};
            const auto& bound = t.expansion.bound();
            if (bound && eps <= bound->eps_max) {
                Rational order(t.expansion.k());
                row.bound_value = bound->G * rat::pow_up(eps, order + bound->delta);
                row.bound_pass = sgn(bound->G) == 0
                                     ? sgn(err) == 0
                                     : rat::le_pow(err / bound->G, eps, order + bound->delta);
                if (!*row.bound_pass) report.pass = false;
            }
            if (sgn(err) > 0)
                t.error_points.emplace_back(std::log(rat::to_double(eps)),
                                            std::log(rat::to_double(err)));
            report.rows.push_back(std::move(row));
        }
    }

    for (const auto& t : tracked) {
        SlopeCheck check;
        check.quantity = t.name;
        check.points = static_cast<int>(t.error_points.size());
        double delta = t.expansion.bound() ? rat::to_double(t.expansion.bound()->delta) : 1.0;
        check.threshold = static_cast<double>(t.expansion.k()) + delta / 2.0;
        if (check.points >= 2) {
            check.slope = fit_slope(t.error_points);
            check.pass = check.slope >= check.threshold;
        } else {
            check.slope = std::numeric_limits<double>::infinity();
            check.pass = true;  // vanishing error everywhere is consistent with any order
        }
        if (!check.pass) report.pass = false;
        report.slopes.push_back(std::move(check));
    }
    if (!stat.ok()) report.pass = false;
    return report;
}

}  // namespace psmp
