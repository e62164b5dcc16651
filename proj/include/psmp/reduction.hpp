#pragma once

#include <optional>
#include <vector>

#include "psmp/model.hpp"

namespace psmp {

// Probability of leaving state i at a jump, as an expansion. When i has a
// self-loop, both routes (one minus the self-probability; the sum over the
// other targets) are computed and merged into the most informative window.
// Without a self-loop the result is the constant one.
LaurentExpansion non_absorption(const PerturbedSMP& model, int i);

// One-step phase space reduction: removes state r, rerouting mass and
// accumulated sojourn time through it. Transition windows and certificates
// follow the arithmetic rules; the reduced model satisfies the same
// structural conditions as the input.
PerturbedSMP reduce_state(const PerturbedSMP& model, int r);

struct ReductionTrace {
    bool keep_intermediates = true;
    std::vector<int> eliminated;
    std::vector<PerturbedSMP> intermediates;
};

// Expected return time E_ii by sequential elimination of all other states.
// Coefficients do not depend on the elimination order; certificate constants
// may. Default order: ascending state label, skipping i.
LaurentExpansion hitting_expectation(const PerturbedSMP& model, int i,
                                     const std::optional<std::vector<int>>& order = std::nullopt,
                                     ReductionTrace* trace = nullptr);

struct PairHittingResult {
    LaurentExpansion E_ij, E_ji, E_ii, E_jj;
};

// Hitting expectations between two retained states: reduce everything else,
// then solve the two-state system in closed form.
PairHittingResult pair_hitting(const PerturbedSMP& model, int i, int j,
                               const std::optional<std::vector<int>>& order = std::nullopt);

}  // namespace psmp
