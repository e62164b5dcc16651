#include "psmp/model.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "psmp/errors.hpp"

namespace psmp {

namespace {

std::string pair_loc(int i, int j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

void check_entry_bound(const PerturbedSMP& m, const LaurentExpansion& x, Condition cond,
                       const std::string& loc, std::vector<Violation>& out) {
    if (!x.bound()) {
        out.push_back({cond, loc, "bounded mode requires a remainder certificate"});
        return;
    }
    if (x.bound()->eps_max > m.eps0)
        out.push_back({cond, loc, "certificate range exceeds eps0"});
}

}  // namespace

bool PerturbedSMP::has_state(int i) const {
    return std::binary_search(states.begin(), states.end(), i);
}

bool PerturbedSMP::in_transition_set(int i, int j) const {
    auto it = transition_sets.find(i);
    if (it == transition_sets.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(), j);
}

const std::vector<int>& PerturbedSMP::transition_set(int i) const {
    auto it = transition_sets.find(i);
    if (it == transition_sets.end()) throw Error("no transition set for state " + std::to_string(i));
    return it->second;
}

const LaurentExpansion& PerturbedSMP::p_at(int i, int j) const {
    auto it = p.find({i, j});
    if (it == p.end()) throw Error("no transition probability at " + pair_loc(i, j));
    return it->second;
}

const LaurentExpansion& PerturbedSMP::e_at(int i, int j) const {
    auto it = e.find({i, j});
    if (it == e.end()) throw Error("no sojourn expectation at " + pair_loc(i, j));
    return it->second;
}

std::string to_string(Condition c) {
    switch (c) {
        case Condition::A: return "A";
        case Condition::B: return "B";
        case Condition::Bprime: return "B'";
        case Condition::C: return "C";
        case Condition::D: return "D";
        case Condition::E: return "E";
        case Condition::F: return "F";
        case Condition::Fprime: return "F'";
    }
    return "?";
}

ValidationReport validate(const PerturbedSMP& m) {
    ValidationReport report;
    auto& out = report.violations;

    for (int i : m.states) {
        auto it = m.transition_sets.find(i);
        if (it == m.transition_sets.end() || it->second.empty()) {
            out.push_back({Condition::A, std::to_string(i), "empty transition set"});
            continue;
        }
        for (int j : it->second) {
            if (!m.has_state(j))
                out.push_back({Condition::A, pair_loc(i, j), "target outside the phase space"});
            if (!m.p.count({i, j}))
                out.push_back({Condition::B, pair_loc(i, j), "missing transition probability"});
            if (!m.e.count({i, j}))
                out.push_back({Condition::F, pair_loc(i, j), "missing sojourn expectation"});
        }
    }
    if (!report.ok()) return report;  // structure is broken; later checks would throw

    // communication: every ordered pair connected through the transition sets
    for (int src : m.states) {
        std::set<int> seen{src};
        std::deque<int> queue{src};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (int v : m.transition_set(u))
                if (seen.insert(v).second) queue.push_back(v);
        }
        for (int dst : m.states)
            if (!seen.count(dst))
                out.push_back({Condition::A, pair_loc(src, dst),
                               "state " + std::to_string(dst) + " unreachable from " +
                                   std::to_string(src)});
    }

    for (const auto& [key, x] : m.p) {
        const std::string loc = "p" + pair_loc(key.first, key.second);
        if (x.h() < 0) out.push_back({Condition::B, loc, "negative leading order"});
        if (!x.pivotal() || sgn(x.lead()) <= 0)
            out.push_back({Condition::B, loc, "leading coefficient must be positive"});
        if (m.bounded_mode) check_entry_bound(m, x, Condition::Bprime, loc, out);
    }
    for (const auto& [key, x] : m.e) {
        const std::string loc = "e" + pair_loc(key.first, key.second);
        if (!x.pivotal() || sgn(x.lead()) <= 0)
            out.push_back({Condition::F, loc, "leading coefficient must be positive"});
        if (m.bounded_mode) check_entry_bound(m, x, Condition::Fprime, loc, out);
    }

    // row-sum coefficients must match the constant one up to the common order
    for (int i : m.states) {
        const auto& row = m.transition_set(i);
        bool usable = std::all_of(row.begin(), row.end(),
                                  [&](int j) { return m.p.count({i, j}) > 0; });
        if (!usable) continue;
        long k_row = m.p_at(i, row.front()).k();
        for (int j : row) k_row = std::min(k_row, m.p_at(i, j).k());
        for (long l = 0; l <= k_row; ++l) {
            Rational sum(0);
            for (int j : row) sum += m.p_at(i, j).coeff(l);
            Rational expected(l == 0 ? 1 : 0);
            if (sum != expected)
                out.push_back({Condition::C, std::to_string(i),
                               "row coefficients at order " + std::to_string(l) + " sum to " +
                                   rat::to_string(sum) + ", expected " +
                                   rat::to_string(expected)});
        }
    }

    if (!m.attest_no_instant_transitions)
        out.push_back({Condition::D, "model", "instant transitions not ruled out"});
    if (!m.attest_finite_expectations)
        out.push_back({Condition::E, "model", "finite sojourn expectations not attested"});
    return report;
}

LaurentExpansion row_sum(const PerturbedSMP& m, int i, const std::vector<int>& subset) {
    if (subset.empty()) throw EmptySubset("row sum over an empty subset");
    std::vector<LaurentExpansion> terms;
    terms.reserve(subset.size());
    for (int j : subset) terms.push_back(m.p_at(i, j));
    return sum_many(terms);
}

RowSumClass row_sum_class(const PerturbedSMP& m, int i, const std::vector<int>& subset) {
    LaurentExpansion s = row_sum(m, i, subset);
    long lead_order = s.h();
    while (lead_order <= s.k() && sgn(s.coeff(lead_order)) == 0) ++lead_order;
    if (lead_order > s.k() || lead_order > 0)
        return lead_order > s.k() ? RowSumClass::Inconsistent : RowSumClass::PositiveOrder;
    if (s.coeff(0) < 1) return sgn(s.coeff(0)) > 0 ? RowSumClass::LeadBelowOne
                                                   : RowSumClass::Inconsistent;
    if (s.coeff(0) > 1) return RowSumClass::Inconsistent;
    for (long l = 1; l <= s.k(); ++l) {
        int sign = sgn(s.coeff(l));
        if (sign < 0) return RowSumClass::NegativeCorrection;
        if (sign > 0) return RowSumClass::Inconsistent;
    }
    return RowSumClass::IdenticallyOne;
}

std::string to_string(RowSumClass c) {
    switch (c) {
        case RowSumClass::PositiveOrder: return "positive-order";
        case RowSumClass::LeadBelowOne: return "lead-below-one";
        case RowSumClass::NegativeCorrection: return "negative-correction";
        case RowSumClass::IdenticallyOne: return "identically-one";
        case RowSumClass::Inconsistent: return "inconsistent";
    }
    return "?";
}

PerturbedSMP discrete_time(PerturbedSMP skeleton) {
    skeleton.e = skeleton.p;
    return skeleton;
}

PerturbedSMP continuous_time(PerturbedSMP skeleton,
                             const std::map<int, LaurentExpansion>& lambda) {
    skeleton.e.clear();
    for (const auto& [key, prob] : skeleton.p) {
        auto it = lambda.find(key.first);
        if (it == lambda.end())
            throw Error("missing intensity for state " + std::to_string(key.first));
        skeleton.e.emplace(key, div(prob, it->second));
    }
    return skeleton;
}

}  // namespace psmp
