#pragma once

#include <string>
#include <vector>

#include "psmp/errors.hpp"
#include "psmp/model.hpp"

namespace psmp {

// Expected sojourn time in state i: the sum of e_ij over the row.
LaurentExpansion sojourn(const PerturbedSMP& model, int i);

struct StateStationary {
    int state;
    LaurentExpansion e_i;   // sojourn expectation
    LaurentExpansion E_ii;  // expected return time
    LaurentExpansion pi;    // stationary probability
    Rational limit_at_zero;
};

struct StationaryReport {
    std::vector<StateStationary> states;
    std::vector<int> x0;               // states with order-zero stationary probability
    long n_plus = 0;                   // common retained order of the pi expansions
    std::vector<Rational> coefficient_sum_residuals;  // sum_i c_i[l] - (l == 0), l = 0..n_plus
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

struct InvariantViolation : Error {
    StationaryReport report;
    explicit InvariantViolation(StationaryReport r)
        : Error("stationary structural invariants violated"), report(std::move(r)) {}
};

// Full pipeline: E_ii by sequential reduction, e_i by row summation, then
// pi_i = e_i / E_ii by the division recurrence. The structural identities
// (nonnegative orders, a zero minimum order, positive leads, coefficient
// sums matching the constant one) are checked exactly; violations throw
// unless force is set, in which case they ride along in the report.
StationaryReport stationary_distribution(const PerturbedSMP& model, bool force = false);

}  // namespace psmp
