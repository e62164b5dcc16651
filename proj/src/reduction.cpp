#include "psmp/reduction.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "psmp/errors.hpp"
#include "psmp/stationary.hpp"

namespace psmp {

namespace {

std::vector<int> others(const PerturbedSMP& m, std::initializer_list<int> kept) {
    std::vector<int> out;
    for (int s : m.states)
        if (std::find(kept.begin(), kept.end(), s) == kept.end()) out.push_back(s);
    return out;
}

void check_permutation(const std::vector<int>& order, const std::vector<int>& expected) {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != expected)
        throw BadPermutation("elimination order must permute the states to remove");
}

}  // namespace

LaurentExpansion non_absorption(const PerturbedSMP& m, int i) {
    const auto& row = m.transition_set(i);
    if (!m.in_transition_set(i, i)) {
        long n = 0;
        for (int j : row) n = std::max(n, m.p_at(i, j).k());
        return constant(Rational(1), n, m.eps0);
    }
    const LaurentExpansion& self = m.p_at(i, i);
    LaurentExpansion one_minus = add(constant(Rational(1), self.k(), m.eps0),
                                     scale(Rational(-1), self));
    std::vector<LaurentExpansion> exits;
    for (int j : row)
        if (j != i) exits.push_back(m.p_at(i, j));
    if (exits.empty())
        throw Error("state " + std::to_string(i) + " has no exit transitions");
    LaurentExpansion merged = merge(one_minus, sum_many(exits));
    if (!merged.pivotal() || sgn(merged.lead()) <= 0)
        throw Error("non-absorption probability at state " + std::to_string(i) +
                    " is not positive-pivotal");
    return merged;
}

PerturbedSMP reduce_state(const PerturbedSMP& m, int r) {
    if (m.n_states() <= 1) throw SingleState("cannot reduce a one-state model");
    if (!m.has_state(r)) throw Error("state " + std::to_string(r) + " not in the model");

    const bool self_loop = m.in_transition_set(r, r);
    std::optional<LaurentExpansion> escape;
    if (self_loop) escape = non_absorption(m, r);

    // targets reachable through r, and the per-target rerouting factor
    std::vector<int> via_r;
    std::map<int, LaurentExpansion> through;
    for (int j : m.transition_set(r)) {
        if (j == r) continue;
        via_r.push_back(j);
        through.emplace(j, self_loop ? div(m.p_at(r, j), *escape) : m.p_at(r, j));
    }

    PerturbedSMP out;
    out.eps0 = m.eps0;
    out.bounded_mode = m.bounded_mode;
    out.polynomial_exact = m.polynomial_exact;
    out.attest_no_instant_transitions = m.attest_no_instant_transitions;
    out.attest_finite_expectations = m.attest_finite_expectations;
    out.states = others(m, {r});
    for (int s : out.states) {
        auto it = m.state_names.find(s);
        if (it != m.state_names.end()) out.state_names.emplace(*it);
    }

    for (int i : out.states) {
        const bool feeds_r = m.in_transition_set(i, r);
        std::optional<LaurentExpansion> entry;  // p_ir normalized by the escape probability
        if (feeds_r) entry = self_loop ? div(m.p_at(i, r), *escape) : m.p_at(i, r);

        std::set<int> targets;
        for (int j : m.transition_set(i))
            if (j != r) targets.insert(j);
        if (feeds_r)
            for (int j : via_r) targets.insert(j);

        out.transition_sets[i] = std::vector<int>(targets.begin(), targets.end());
        for (int j : targets) {
            const bool direct = m.in_transition_set(i, j);
            const bool rerouted = feeds_r && through.count(j);
            if (rerouted) {
                LaurentExpansion detour_p = mul(m.p_at(i, r), through.at(j));
                std::vector<LaurentExpansion> sojourns;
                sojourns.push_back(mul(m.e_at(i, r), through.at(j)));
                if (self_loop)
                    sojourns.push_back(mul(m.e_at(r, r), mul(*entry, through.at(j))));
                sojourns.push_back(mul(m.e_at(r, j), *entry));
                LaurentExpansion detour_e = sum_many(sojourns);
                if (direct) {
                    out.p.emplace(std::make_pair(i, j), add(m.p_at(i, j), detour_p));
                    out.e.emplace(std::make_pair(i, j), add(m.e_at(i, j), detour_e));
                } else {
                    out.p.emplace(std::make_pair(i, j), std::move(detour_p));
                    out.e.emplace(std::make_pair(i, j), std::move(detour_e));
                }
            } else {
                out.p.emplace(std::make_pair(i, j), m.p_at(i, j));
                out.e.emplace(std::make_pair(i, j), m.e_at(i, j));
            }
        }
    }
    // keep certificate rationals small across repeated reductions
    for (auto* table : {&out.p, &out.e})
        for (auto& [key, x] : *table)
            if (x.bound()) x = x.with_bound(compress_bound(*x.bound()));
    return out;
}

LaurentExpansion hitting_expectation(const PerturbedSMP& m, int i,
                                     const std::optional<std::vector<int>>& order,
                                     ReductionTrace* trace) {
    if (!m.has_state(i)) throw Error("state " + std::to_string(i) + " not in the model");
    std::vector<int> elim = order.value_or(others(m, {i}));
    check_permutation(elim, others(m, {i}));

    PerturbedSMP cur = m;
    for (int r : elim) {
        cur = reduce_state(cur, r);
        if (trace) {
            trace->eliminated.push_back(r);
            if (trace->keep_intermediates) trace->intermediates.push_back(cur);
        }
    }
    return cur.e_at(i, i);
}

PairHittingResult pair_hitting(const PerturbedSMP& m, int i, int j,
                               const std::optional<std::vector<int>>& order) {
    if (i == j) throw SameState("pair hitting needs two distinct states");
    if (!m.has_state(i) || !m.has_state(j)) throw Error("state not in the model");
    std::vector<int> elim = order.value_or(others(m, {i, j}));
    check_permutation(elim, others(m, {i, j}));

    PerturbedSMP cur = m;
    for (int r : elim) cur = reduce_state(cur, r);

    LaurentExpansion e_i = sojourn(cur, i);
    LaurentExpansion e_j = sojourn(cur, j);
    const LaurentExpansion& p_ij = cur.p_at(i, j);
    const LaurentExpansion& p_ji = cur.p_at(j, i);
    PairHittingResult out{
        .E_ij = div(e_i, p_ij),
        .E_ji = div(e_j, p_ji),
        .E_ii = add(e_i, mul(e_j, div(p_ij, p_ji))),
        .E_jj = add(e_j, mul(e_i, div(p_ji, p_ij))),
    };
    return out;
}

}  // namespace psmp
