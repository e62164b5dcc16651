#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "psmp/errors.hpp"
#include "psmp/io.hpp"
#include "psmp/oracle.hpp"
#include "psmp/reduction.hpp"
#include "psmp/stationary.hpp"

namespace {

using namespace psmp;

struct Output {
    std::string path;    // empty: stdout
    std::string format;  // "text" | "structured"

    void emit(const std::string& text, const nlohmann::ordered_json& structured) const {
        std::string payload = format == "structured" ? structured.dump(2) + "\n" : text;
        if (path.empty()) {
            std::cout << payload;
        } else {
            std::ofstream out(path);
            if (!out) throw IOError("cannot write " + path);
            out << payload;
        }
    }
};

std::vector<int> parse_order(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<Rational> parse_grid(const std::vector<std::string>& items) {
    std::vector<Rational> out;
    for (const auto& s : items) out.push_back(rat::parse(s));
    return out;
}

// Certificate preference: larger delta, then smaller G, then larger range.
bool tighter(const RemainderBound& a, const RemainderBound& b) {
    if (a.delta != b.delta) return a.delta > b.delta;
    if (a.G != b.G) return a.G < b.G;
    return a.eps_max > b.eps_max;
}

int run_hitting(const PerturbedSMP& model, int state, const std::optional<std::vector<int>>& order,
                bool search_permutations, bool trace_flag, const Output& out) {
    ReductionTrace trace;
    trace.keep_intermediates = trace_flag;
    LaurentExpansion result =
        hitting_expectation(model, state, order, trace_flag ? &trace : nullptr);

    if (search_permutations) {
        std::vector<int> rest;
        for (int s : model.states)
            if (s != state) rest.push_back(s);
        if (rest.size() > 8) throw Error("permutation search is limited to 9 states");
        std::vector<int> perm = rest;
        do {
            LaurentExpansion candidate = hitting_expectation(model, state, perm);
            if (candidate.coeffs() != result.coeffs() || candidate.h() != result.h())
                throw Error("elimination orders disagree on coefficients");
            if (candidate.bound() && (!result.bound() || tighter(*candidate.bound(), *result.bound())))
                result = candidate;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    std::ostringstream text;
    text << "E_" << state << "_" << state << " = " << to_string(result) << "\n";
    if (result.bound())
        text << "certificate: |rem| <= " << rat::to_string(result.bound()->G) << " * eps^("
             << result.k() << " + " << rat::to_string(result.bound()->delta) << ") for eps <= "
             << rat::to_string(result.bound()->eps_max) << "\n";
    nlohmann::ordered_json j;
    j["format_version"] = io::kFormatVersion;
    j["state"] = state;
    j["E"] = io::expansion_to_json(result);
    if (trace_flag) j["trace"] = io::trace_to_json(trace);
    out.emit(text.str(), j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"asymptotic expansions for stationary distributions and hitting times of "
                 "perturbed semi-Markov processes"};
    app.require_subcommand(1);

    std::string input, output_path, format = "text", order_csv;
    int state = 0, state_i = 0, state_j = 0;
    bool trace_flag = false, force = false, search_perms = false, classify = false;
    std::vector<std::string> grid_items;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("model", input, "model file (JSON)")->required();
        cmd->add_option("-o,--output", output_path, "write the report to a file");
        cmd->add_option("-f,--format", format, "report format: text | structured")
            ->check(CLI::IsMember({"text", "structured"}));
    };

    auto* cmd_validate = app.add_subcommand("validate", "check the structural conditions");
    add_common(cmd_validate);
    cmd_validate->add_flag("--classify", classify, "also classify row sums of each full row");

    auto* cmd_reduce = app.add_subcommand("reduce", "eliminate one state");
    add_common(cmd_reduce);
    cmd_reduce->add_option("-s,--state", state, "state to eliminate")->required();
    cmd_reduce->add_flag("--trace", trace_flag, "include the reduced model as a trace step");

    auto* cmd_hitting = app.add_subcommand("hitting", "expected return time expansion");
    add_common(cmd_hitting);
    cmd_hitting->add_option("-s,--state", state, "target state")->required();
    cmd_hitting->add_option("--order", order_csv, "elimination order (comma separated)");
    cmd_hitting->add_flag("--trace", trace_flag, "record intermediate models");
    cmd_hitting->add_flag("--search-permutations", search_perms,
                          "try all elimination orders and keep the tightest certificate");

    auto* cmd_stationary = app.add_subcommand("stationary", "stationary distribution expansions");
    add_common(cmd_stationary);
    cmd_stationary->add_flag("--force", force, "emit expansions even when invariants fail");

    auto* cmd_pair = app.add_subcommand("pair", "hitting expectations between two states");
    add_common(cmd_pair);
    cmd_pair->add_option("-i", state_i, "first state")->required();
    cmd_pair->add_option("-j", state_j, "second state")->required();

    auto* cmd_oracle = app.add_subcommand("oracle-check", "cross-validate against exact solves");
    add_common(cmd_oracle);
    cmd_oracle->add_option("--eps", grid_items, "grid points, e.g. --eps 1/10 1/100");

    CLI11_PARSE(app, argc, argv);

    try {
        PerturbedSMP model = io::load_model(input);
        Output out{output_path, format};

        if (cmd_validate->parsed()) {
            ValidationReport report = validate(model);
            auto j = io::validation_to_json(report);
            std::string text = io::validation_to_text(report);
            if (classify && report.ok()) {
                std::ostringstream extra;
                nlohmann::ordered_json classes = nlohmann::ordered_json::object();
                for (int i : model.states) {
                    auto c = row_sum_class(model, i, model.transition_set(i));
                    extra << "row " << i << ": " << to_string(c) << "\n";
                    classes[std::to_string(i)] = to_string(c);
                }
                text += extra.str();
                j["row_classes"] = std::move(classes);
            }
            out.emit(text, j);
            return report.ok() ? 0 : 1;
        }

        if (cmd_reduce->parsed()) {
            PerturbedSMP reduced = reduce_state(model, state);
            nlohmann::ordered_json j = io::model_to_json(reduced);
            std::ostringstream text;
            text << j.dump(2) << "\n";
            if (trace_flag) {
                ReductionTrace trace;
                trace.eliminated.push_back(state);
                trace.intermediates.push_back(reduced);
                j = nlohmann::ordered_json{{"format_version", io::kFormatVersion},
                                           {"trace", io::trace_to_json(trace)},
                                           {"model", io::model_to_json(reduced)}};
            }
            out.emit(text.str(), j);
            return 0;
        }

        if (cmd_hitting->parsed()) {
            std::optional<std::vector<int>> order;
            if (!order_csv.empty()) order = parse_order(order_csv);
            return run_hitting(model, state, order, search_perms, trace_flag, out);
        }

        if (cmd_stationary->parsed()) {
            StationaryReport report;
            int status = 0;
            try {
                report = stationary_distribution(model, force);
            } catch (const InvariantViolation& ex) {
                report = ex.report;
                status = 1;
            }
            if (!report.ok()) status = 1;
            out.emit(io::stationary_to_text(report), io::stationary_to_json(report));
            return status;
        }

        if (cmd_pair->parsed()) {
            PairHittingResult r = pair_hitting(model, state_i, state_j);
            std::ostringstream text;
            text << "E_" << state_i << "_" << state_j << " = " << to_string(r.E_ij) << "\n"
                 << "E_" << state_j << "_" << state_i << " = " << to_string(r.E_ji) << "\n"
                 << "E_" << state_i << "_" << state_i << " = " << to_string(r.E_ii) << "\n"
                 << "E_" << state_j << "_" << state_j << " = " << to_string(r.E_jj) << "\n";
            nlohmann::ordered_json j;
            j["format_version"] = io::kFormatVersion;
            j["E_ij"] = io::expansion_to_json(r.E_ij);
            j["E_ji"] = io::expansion_to_json(r.E_ji);
            j["E_ii"] = io::expansion_to_json(r.E_ii);
            j["E_jj"] = io::expansion_to_json(r.E_jj);
            out.emit(text.str(), j);
            return 0;
        }

        if (cmd_oracle->parsed()) {
            ComparisonReport report = compare(model, parse_grid(grid_items));
            out.emit(io::comparison_to_text(report), io::comparison_to_json(report));
            return report.pass ? 0 : 1;
        }
    } catch (const ParseError& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return 2;
    } catch (const IOError& ex) {
        std::cerr << "io error: " << ex.what() << "\n";
        return 2;
    } catch (const Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
