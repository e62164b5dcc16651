#pragma once

#include <string>

#include <json.hpp>

#include "psmp/model.hpp"
#include "psmp/oracle.hpp"
#include "psmp/reduction.hpp"
#include "psmp/stationary.hpp"

namespace psmp::io {

inline constexpr int kFormatVersion = 1;

// Expansion record {h, k, coeffs as "p/q" strings, pivotal, bound?}; the
// round-trip through JSON is exact.
nlohmann::ordered_json expansion_to_json(const LaurentExpansion& x);
LaurentExpansion expansion_from_json(const nlohmann::json& j);

// Model files carry n_states, eps0, mode ("plain" | "bounded"), optional
// state names, the p entries, and e entries (or "discrete-time", or a
// continuous-time intensity table). Duplicate (i,j) entries and e entries
// outside the transition sets are rejected at parse time.
nlohmann::ordered_json model_to_json(const PerturbedSMP& m);
PerturbedSMP model_from_json(const nlohmann::json& j);

PerturbedSMP load_model(const std::string& path);
void save_model(const PerturbedSMP& m, const std::string& path);

nlohmann::ordered_json validation_to_json(const ValidationReport& r);
nlohmann::ordered_json stationary_to_json(const StationaryReport& r);
nlohmann::ordered_json comparison_to_json(const ComparisonReport& r);
nlohmann::ordered_json trace_to_json(const ReductionTrace& t);

std::string validation_to_text(const ValidationReport& r);
std::string stationary_to_text(const StationaryReport& r);
std::string comparison_to_text(const ComparisonReport& r);

}  // namespace psmp::io
