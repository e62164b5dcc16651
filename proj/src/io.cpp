#include "psmp/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "psmp/errors.hpp"

namespace psmp::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

Rational rational_field(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ParseError("missing field \"" + key + "\"");
    const auto& v = j.at(key);
    if (v.is_string()) return rat::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    throw ParseError("field \"" + key + "\" must be a rational string");
}

std::vector<Rational> coeffs_field(const json& j) {
    if (!j.contains("coeffs") || !j.at("coeffs").is_array() || j.at("coeffs").empty())
        throw ParseError("expansion needs a nonempty \"coeffs\" array");
    std::vector<Rational> out;
    for (const auto& c : j.at("coeffs")) {
        if (c.is_string())
            out.push_back(rat::parse(c.get<std::string>()));
        else if (c.is_number_integer())
            out.push_back(Rational(c.get<long>()));
        else
            throw ParseError("coefficients must be rational strings");
    }
    return out;
}

std::optional<RemainderBound> bound_field(const json& j) {
    if (!j.contains("bound") || j.at("bound").is_null()) return std::nullopt;
    const auto& b = j.at("bound");
    return RemainderBound{rational_field(b, "delta"), rational_field(b, "G"),
                          rational_field(b, "eps_max")};
}

ordered_json bound_to_json(const RemainderBound& b) {
    return ordered_json{{"delta", rat::to_string(b.delta)},
                        {"G", rat::to_string(b.G)},
                        {"eps_max", rat::to_string(b.eps_max)}};
}

ordered_json entry_to_json(int i, int j, const LaurentExpansion& x) {
    ordered_json out{{"i", i}, {"j", j}, {"h", x.h()}};
    ordered_json coeffs = ordered_json::array();
    for (const auto& c : x.coeffs()) coeffs.push_back(rat::to_string(c));
    out["coeffs"] = std::move(coeffs);
    if (x.bound()) out["bound"] = bound_to_json(*x.bound());
    return out;
}

void parse_entries(const json& arr, const char* what, bool require_in_sets,
                   const PerturbedSMP& m,
                   std::map<std::pair<int, int>, LaurentExpansion>& out) {
    if (!arr.is_array()) throw ParseError(std::string(what) + " must be an array");
    for (const auto& entry : arr) {
        if (!entry.contains("i") || !entry.contains("j"))
            throw ParseError(std::string(what) + " entry without i/j");
        int i = entry.at("i").get<int>();
        int j = entry.at("j").get<int>();
        if (!m.has_state(i) || !m.has_state(j))
            throw ParseError(std::string(what) + " entry outside the phase space at (" +
                             std::to_string(i) + "," + std::to_string(j) + ")");
        if (require_in_sets && !m.in_transition_set(i, j))
            throw ParseError(std::string(what) + " entry at (" + std::to_string(i) + "," +
                             std::to_string(j) + ") is outside the transition set");
        long h = entry.contains("h") ? entry.at("h").get<long>() : 0;
        auto x = LaurentExpansion::make(h, coeffs_field(entry), false, bound_field(entry));
        if (!out.emplace(std::make_pair(i, j), std::move(x)).second)
            throw ParseError(std::string(what) + " has a duplicate entry at (" +
                             std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

}  // namespace

ordered_json expansion_to_json(const LaurentExpansion& x) {
    ordered_json out{{"h", x.h()}, {"k", x.k()}};
    ordered_json coeffs = ordered_json::array();
    for (const auto& c : x.coeffs()) coeffs.push_back(rat::to_string(c));
    out["coeffs"] = std::move(coeffs);
    out["pivotal"] = x.pivotal();
    if (x.bound()) out["bound"] = bound_to_json(*x.bound());
    return out;
}

LaurentExpansion expansion_from_json(const json& j) {
    long h = j.contains("h") ? j.at("h").get<long>() : 0;
    auto coeffs = coeffs_field(j);
    if (j.contains("k") && j.at("k").get<long>() != h + static_cast<long>(coeffs.size()) - 1)
        throw ParseError("inconsistent expansion window");
    bool pivotal = j.value("pivotal", false);
    return LaurentExpansion::make(h, std::move(coeffs), pivotal, bound_field(j));
}

ordered_json model_to_json(const PerturbedSMP& m) {
    ordered_json out;
    out["format_version"] = kFormatVersion;
    out["n_states"] = m.n_states();
    out["eps0"] = rat::to_string(m.eps0);
    out["mode"] = m.bounded_mode ? "bounded" : "plain";
    if (m.polynomial_exact) out["polynomial_exact"] = true;
    if (!m.state_names.empty()) {
        ordered_json names = ordered_json::object();
        for (const auto& [s, name] : m.state_names) names[std::to_string(s)] = name;
        out["states"] = std::move(names);
    }
    ordered_json p = ordered_json::array();
    for (const auto& [key, x] : m.p) p.push_back(entry_to_json(key.first, key.second, x));
    out["p"] = std::move(p);
    if (m.e == m.p) {
        out["e"] = "discrete-time";
    } else {
        ordered_json e = ordered_json::array();
        for (const auto& [key, x] : m.e) e.push_back(entry_to_json(key.first, key.second, x));
        out["e"] = std::move(e);
    }
    if (!m.attest_no_instant_transitions || !m.attest_finite_expectations)
        out["attestations"] = ordered_json{{"no_instant_transitions",
                                            m.attest_no_instant_transitions},
                                           {"finite_expectations", m.attest_finite_expectations}};
    return out;
}

PerturbedSMP model_from_json(const json& j) {
    PerturbedSMP m;
    if (!j.contains("n_states")) throw ParseError("model needs \"n_states\"");
    int n = j.at("n_states").get<int>();
    if (n < 1) throw ParseError("n_states must be positive");
    for (int s = 1; s <= n; ++s) m.states.push_back(s);
    m.eps0 = rational_field(j, "eps0");
    if (sgn(m.eps0) <= 0 || m.eps0 > 1) throw ParseError("eps0 must lie in (0, 1]");
    std::string mode = j.value("mode", "plain");
    if (mode != "plain" && mode != "bounded") throw ParseError("mode must be plain or bounded");
    m.bounded_mode = mode == "bounded";
    m.polynomial_exact = j.value("polynomial_exact", false);
    if (j.contains("states")) {
        const auto& names = j.at("states");
        if (names.is_array()) {
            int s = 1;
            for (const auto& name : names) m.state_names[s++] = name.get<std::string>();
        } else if (names.is_object()) {
            for (const auto& [key, name] : names.items())
                m.state_names[std::stoi(key)] = name.get<std::string>();
        }
    }
    if (j.contains("attestations")) {
        const auto& a = j.at("attestations");
        m.attest_no_instant_transitions = a.value("no_instant_transitions", true);
        m.attest_finite_expectations = a.value("finite_expectations", true);
    }

    if (!j.contains("p")) throw ParseError("model needs \"p\" entries");
    parse_entries(j.at("p"), "p", /*require_in_sets=*/false, m, m.p);
    for (const auto& [key, x] : m.p) m.transition_sets[key.first].push_back(key.second);
    for (int s : m.states) m.transition_sets[s];  // ensure every state has a (possibly empty) row

    if (!j.contains("e")) throw ParseError("model needs \"e\" entries");
    const auto& e = j.at("e");
    if (e.is_string() && e.get<std::string>() == "discrete-time") {
        m.e = m.p;
    } else if (e.is_object() && e.contains("continuous-time")) {
        std::map<int, LaurentExpansion> lambda;
        for (const auto& entry : e.at("continuous-time")) {
            int i = entry.at("i").get<int>();
            if (!m.has_state(i)) throw ParseError("intensity for unknown state");
            long h = entry.contains("h") ? entry.at("h").get<long>() : 0;
            auto x = LaurentExpansion::make(h, coeffs_field(entry), false, bound_field(entry));
            if (!lambda.emplace(i, std::move(x)).second)
                throw ParseError("duplicate intensity for state " + std::to_string(i));
        }
        m = continuous_time(std::move(m), lambda);
    } else {
        parse_entries(e, "e", /*require_in_sets=*/true, m, m.e);
        for (int i : m.states)
            for (int jj : m.transition_set(i))
                if (!m.e.count({i, jj}))
                    throw ParseError("missing e entry at (" + std::to_string(i) + "," +
                                     std::to_string(jj) + ")");
    }
    return m;
}

PerturbedSMP load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw ParseError(path + ": " + ex.what());
    }
    return model_from_json(j);
}

void save_model(const PerturbedSMP& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IOError("cannot write " + path);
    out << model_to_json(m).dump(2) << "\n";
}

ordered_json validation_to_json(const ValidationReport& r) {
    ordered_json out;
    out["format_version"] = kFormatVersion;
    out["ok"] = r.ok();
    ordered_json violations = ordered_json::array();
    for (const auto& v : r.violations)
        violations.push_back(ordered_json{{"condition", to_string(v.condition)},
                                          {"location", v.location},
                                          {"message", v.message}});
    out["violations"] = std::move(violations);
    return out;
}

ordered_json stationary_to_json(const StationaryReport& r) {
    ordered_json out;
    out["format_version"] = kFormatVersion;
    ordered_json states = ordered_json::array();
    for (const auto& s : r.states) {
        ordered_json row;
        row["state"] = s.state;
        row["n_minus"] = s.pi.h();
        row["n_plus"] = s.pi.k();
        row["pi"] = expansion_to_json(s.pi);
        row["e"] = expansion_to_json(s.e_i);
        row["E_return"] = expansion_to_json(s.E_ii);
        row["limit_at_zero"] = rat::to_string(s.limit_at_zero);
        states.push_back(std::move(row));
    }
    out["states"] = std::move(states);
    out["X0"] = r.x0;
    ordered_json residuals = ordered_json::array();
    for (const auto& x : r.coefficient_sum_residuals) residuals.push_back(rat::to_string(x));
    out["coefficient_sum_residuals"] = std::move(residuals);
    out["violations"] = r.violations;
    return out;
}

ordered_json comparison_to_json(const ComparisonReport& r) {
    ordered_json out;
    out["format_version"] = kFormatVersion;
    out["pass"] = r.pass;
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) {
        ordered_json jr{{"quantity", row.quantity},
                        {"eps", rat::to_string(row.eps)},
                        {"oracle", rat::to_string(row.oracle)},
                        {"partial_sum", rat::to_string(row.partial_sum)},
                        {"abs_error", rat::to_string(row.abs_error)}};
        if (row.bound_value) jr["bound_value"] = rat::to_string(*row.bound_value);
        if (row.bound_pass) jr["bound_pass"] = *row.bound_pass;
        rows.push_back(std::move(jr));
    }
    out["rows"] = std::move(rows);
    ordered_json slopes = ordered_json::array();
    for (const auto& s : r.slopes)
        slopes.push_back(ordered_json{{"quantity", s.quantity},
                                      {"points", s.points},
                                      {"slope", s.slope},
                                      {"threshold", s.threshold},
                                      {"pass", s.pass}});
    out["slopes"] = std::move(slopes);
    out["notes"] = r.notes;
    return out;
}

ordered_json trace_to_json(const ReductionTrace& t) {
    ordered_json out;
    out["format_version"] = kFormatVersion;
    out["eliminated"] = t.eliminated;
    ordered_json steps = ordered_json::array();
    for (const auto& m : t.intermediates) steps.push_back(model_to_json(m));
    out["steps"] = std::move(steps);
    return out;
}

std::string validation_to_text(const ValidationReport& r) {
    std::ostringstream os;
    if (r.ok()) {
        os << "model accepted: all structural conditions hold\n";
        return os.str();
    }
    os << r.violations.size() << " violation(s):\n";
    for (const auto& v : r.violations)
        os << "  [" << to_string(v.condition) << "] " << v.location << ": " << v.message << "\n";
    return os.str();
}

std::string stationary_to_text(const StationaryReport& r) {
    std::ostringstream os;
    for (const auto& s : r.states) {
        os << "state " << s.state << ":\n";
        os << "  pi   = " << to_string(s.pi) << "\n";
        os << "  e    = " << to_string(s.e_i) << "\n";
        os << "  E_ii = " << to_string(s.E_ii) << "\n";
        if (s.pi.bound())
            os << "  certificate: |rem| <= " << rat::to_string(s.pi.bound()->G) << " * eps^("
               << s.pi.k() << " + " << rat::to_string(s.pi.bound()->delta) << ") for eps <= "
               << rat::to_string(s.pi.bound()->eps_max) << "\n";
        os << "  limit at 0: " << rat::to_string(s.limit_at_zero) << "\n";
    }
    os << "X0 = {";
    for (std::size_t i = 0; i < r.x0.size(); ++i) os << (i ? "," : "") << r.x0[i];
    os << "}\n";
    if (!r.ok()) {
        os << "violations:\n";
        for (const auto& v : r.violations) os << "  " << v << "\n";
    }
    return os.str();
}

std::string comparison_to_text(const ComparisonReport& r) {
    std::ostringstream os;
    os << (r.pass ? "oracle check passed" : "oracle check FAILED") << "\n";
    for (const auto& row : r.rows) {
        os << "  " << row.quantity << " @ eps=" << rat::to_string(row.eps)
           << ": |err| = " << rat::to_string(row.abs_error);
        if (row.bound_value)
            os << " vs bound " << rat::to_string(*row.bound_value)
               << (row.bound_pass && *row.bound_pass ? " (ok)" : " (VIOLATED)");
        os << "\n";
    }
    for (const auto& s : r.slopes) {
        os << "  slope " << s.quantity << ": ";
        if (s.points >= 2)
            os << s.slope << " vs threshold " << s.threshold;
        else
            os << "exact (" << s.points << " nonzero errors)";
        os << (s.pass ? " (ok)" : " (FAILED)") << "\n";
    }
    for (const auto& n : r.notes) os << "  note: " << n << "\n";
    return os.str();
}

}  // namespace psmp::io
