#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psmp/laurent.hpp"

namespace psmp {

// Perturbed semi-Markov process over states {1..N} (labels survive phase
// space reduction, so a reduced model keeps its original names). For each i
// and each j in Y_i the model stores the transition probability expansion
// p_ij (orders >= 0, positive lead) and the sojourn expectation expansion
// e_ij (orders may be negative, positive lead). eps0 bounds the validity
// interval (0, eps0]. Immutable by convention once built.
struct PerturbedSMP {
    std::vector<int> states;  // sorted labels
    Rational eps0;
    bool bounded_mode = false;
    bool polynomial_exact = false;  // user attestation: remainders identically zero
    std::map<int, std::vector<int>> transition_sets;  // Y_i, sorted
    std::map<std::pair<int, int>, LaurentExpansion> p;
    std::map<std::pair<int, int>, LaurentExpansion> e;
    std::map<int, std::string> state_names;
    // attestations for the distribution-level assumptions the expansions
    // cannot express (no instant transitions; finite sojourn expectations)
    bool attest_no_instant_transitions = true;
    bool attest_finite_expectations = true;

    int n_states() const { return static_cast<int>(states.size()); }
    bool has_state(int i) const;
    bool in_transition_set(int i, int j) const;
    const std::vector<int>& transition_set(int i) const;
    const LaurentExpansion& p_at(int i, int j) const;
    const LaurentExpansion& e_at(int i, int j) const;
};

enum class Condition { A, B, Bprime, C, D, E, F, Fprime };
std::string to_string(Condition c);

struct Violation {
    Condition condition;
    std::string location;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Structural checks: communication through the transition sets, order and
// positivity constraints on every expansion, row-sum coefficient identities,
// and certificate presence in bounded mode. Violations are reported, never
// thrown.
ValidationReport validate(const PerturbedSMP& model);

// Sum of p_ij over a nonempty subset of Y_i.
LaurentExpansion row_sum(const PerturbedSMP& model, int i, const std::vector<int>& subset);

// Diagnostic classification of a sub-stochastic row sum: lead order positive;
// lead value below one; unit lead with a negative first correction; or
// identically one up to the retained order (remainder sign not checkable).
enum class RowSumClass { PositiveOrder, LeadBelowOne, NegativeCorrection, IdenticallyOne,
                         Inconsistent };
RowSumClass row_sum_class(const PerturbedSMP& model, int i, const std::vector<int>& subset);
std::string to_string(RowSumClass c);

// Convenience constructors. discrete_time sets e := p; continuous_time sets
// e_ij := p_ij / lambda_i with one intensity expansion per state.
PerturbedSMP discrete_time(PerturbedSMP skeleton);
PerturbedSMP continuous_time(PerturbedSMP skeleton,
                             const std::map<int, LaurentExpansion>& lambda);

}  // namespace psmp
