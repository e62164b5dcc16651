#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psmp/model.hpp"

namespace psmp {

// Model instantiated at a concrete eps: dense matrices of exact partial
// sums. When polynomial_exact holds (remainders identically zero by user
// attestation), these are the true transition quantities and the solves
// below are exact ground truth; otherwise they support order tests only.
struct NumericSMP {
    Rational epsilon;
    bool polynomial_exact = false;
    std::vector<int> states;
    std::vector<std::vector<Rational>> P;   // transition probabilities
    std::vector<std::vector<Rational>> E1;  // sojourn expectations
    std::vector<Rational> row_sum_residuals;  // 1 - row sum of P
    std::vector<std::pair<int, int>> negative_entries;
};

NumericSMP instantiate(const PerturbedSMP& model, const Rational& epsilon,
                       bool polynomial_exact);

// Stationary distribution rho of the embedded chain (rho P = rho, sum 1),
// by exact fraction-free elimination.
std::vector<Rational> numeric_embedded_stationary(const NumericSMP& num);

// Stationary distribution pi of the process: rho weighted by sojourn
// expectations and renormalized.
std::vector<Rational> numeric_stationary(const NumericSMP& num);

// Expected hitting times E_ij of target j from every start i, by exact
// solution of the first-step linear system.
std::vector<Rational> numeric_hitting(const NumericSMP& num, int j);

struct QuantityComparison {
    std::string quantity;
    Rational eps;
    Rational oracle;
    Rational partial_sum;
    Rational abs_error;
    std::optional<Rational> bound_value;  // displayed outward-rounded certificate
    std::optional<bool> bound_pass;       // exact check against the certificate
};

struct SlopeCheck {
    std::string quantity;
    int points = 0;
    double slope = 0.0;
    double threshold = 0.0;
    bool pass = true;
};

struct ComparisonReport {
    std::vector<QuantityComparison> rows;
    std::vector<SlopeCheck> slopes;
    std::vector<std::string> notes;
    bool pass = true;
};

// Cross-validates expansion predictions against the oracle over an eps grid
// (default: negative powers of ten inside the validity range). Certificate
// rows are checked exactly; order behaviour is checked by a log-log slope
// fit of the error against eps.
ComparisonReport compare(const PerturbedSMP& model, std::vector<Rational> eps_grid = {});

}  // namespace psmp
