// Integration checks for the command-line tool: exit codes, report content,
// and byte-for-byte determinism of structured output.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAILED: " << what << "\n";
    }
}

std::string fixture(const std::string& name) {
    return std::string(PSMP_FIXTURE_DIR) + "/" + name;
}

struct RunResult {
    int status;
    std::string output;
};

RunResult run(const std::string& args) {
    std::string out_path = "cli_test_output.tmp";
    std::string cmd = std::string(PSMP_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    int raw = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(out_path.c_str());
    return {WEXITSTATUS(raw), ss.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

int main() {
    auto ok = run("validate " + fixture("two_state.json"));
    expect(ok.status == 0, "validate exits 0 on the fixture");
    expect(contains(ok.output, "accepted"), "validate reports acceptance");

    auto classify = run("validate --classify " + fixture("two_state.json"));
    expect(contains(classify.output, "identically-one"), "row classification shown");

    auto stationary = run("stationary " + fixture("two_state.json"));
    expect(stationary.status == 0, "stationary exits 0");
    expect(contains(stationary.output, "1*eps - 1*eps^2 + o(eps^2)"),
           "stationary prints pi_1 = eps - eps^2 + o(eps^2)");

    auto reduce = run("reduce " + fixture("two_state.json") + " -s 2 -f structured");
    expect(reduce.status == 0, "reduce exits 0");
    expect(contains(reduce.output, "\"h\": -1"), "reduced sojourn has order -1");

    auto hitting = run("hitting " + fixture("two_state.json") + " -s 1");
    expect(contains(hitting.output, "1*eps^-1 + 1 + o(1)"), "E_11 = 1/eps + 1");

    auto ordered = run("hitting " + fixture("two_state.json") + " -s 1 --order 2");
    expect(ordered.output == hitting.output, "explicit order matches the default");

    auto search = run("hitting " + fixture("two_state_bounded.json") + " -s 1 --search-permutations");
    expect(search.status == 0, "permutation search runs in bounded mode");

    auto pair = run("pair " + fixture("two_state.json") + " -i 1 -j 2");
    expect(contains(pair.output, "E_2_1 = 1*eps^-1 + o(1)"), "pair prints E_21 = 1/eps");

    auto oracle = run("oracle-check " + fixture("two_state_bounded.json"));
    expect(oracle.status == 0, "oracle-check passes on the bounded fixture");

    auto custom_grid = run("oracle-check " + fixture("two_state.json") + " --eps 1/10 1/100");
    expect(custom_grid.status == 0, "custom grid accepted");

    auto bad_grid = run("oracle-check " + fixture("two_state.json") + " --eps 2");
    expect(bad_grid.status == 1, "grid outside (0, eps0] rejected");

    auto missing = run("validate no_such_file.json");
    expect(missing.status == 2, "missing file exits 2");

    // determinism: structured output byte-for-byte across runs
    auto first = run("stationary " + fixture("two_state_bounded.json") + " -f structured");
    auto second = run("stationary " + fixture("two_state_bounded.json") + " -f structured");
    expect(!first.output.empty() && first.output == second.output,
           "structured output is deterministic");

    // a model failing validation drives a nonzero exit with the violation shown
    {
        std::ofstream bad("cli_bad_model.json");
        bad << R"({"n_states": 2, "eps0": "1/2", "mode": "plain",
                   "p": [{"i":1,"j":2,"h":0,"coeffs":["1","0"]},
                         {"i":2,"j":1,"h":1,"coeffs":["1"]},
                         {"i":2,"j":2,"h":0,"coeffs":["1","0"]}],
                   "e": "discrete-time"})";
    }
    auto invalid = run("validate cli_bad_model.json");
    expect(invalid.status == 1, "violations exit 1");
    expect(contains(invalid.output, "[C]"), "row-sum violation reported");
    std::remove("cli_bad_model.json");

    if (failures == 0) std::cout << "cli tests passed\n";
    return failures;
}
