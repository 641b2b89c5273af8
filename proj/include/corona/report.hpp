#pragma once
#include "corona/schur.hpp"
#include "corona/solver.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace corona {

struct CheckRecord {
    std::string id;
    std::string anchor; // verbatim phrase naming the fact this check pins down
    std::string status; // pass / fail / indeterminate
    double measured = 0.0;
    double tolerance = 0.0;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckRecord> checks;
    double runtime_s = 0.0; // timings sidecar only, kept out of the canonical report
    bool all_pass() const;
};

struct PolyTermSpec {
    std::vector<int> alpha, beta;
    double re = 0.0, im = 0.0;
};
using PolySpec = std::vector<PolyTermSpec>;

PolyField poly_from_spec(int n, const PolySpec& spec);

struct ProblemSpec {
    int n = 1;
    double delta = 0.4;
    std::vector<PolySpec> g;
    PolySpec h;
    std::vector<int> s_params;
};
ProblemSpec default_problem(); // n=1, g=(z, 1-2z), h=1

struct SchurSpec {
    std::vector<OperatorParams> grid; // empty -> default_frontier_grid()
    int level_lo = 1;
    int level_hi = 2;
};

struct RunConfig {
    std::uint64_t seed = 20260814ULL;
    int n = 2;
    int level = 2;
    std::vector<std::string> suites;            // empty -> all
    std::map<std::string, double> tol_override; // suite name -> tolerance
    std::string out_dir = ".";
    std::string constants_path; // empty -> default_constants_path()
    ProblemSpec problem;
    SchurSpec schur;
    RunConfig();
};

std::vector<std::string> all_suite_names();
SuiteResult run_suite(const std::string& name, const RunConfig& cfg);
std::vector<SuiteResult> run_suites(const RunConfig& cfg); // ordered by suite name

nlohmann::ordered_json config_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::ordered_json& j); // absent keys keep defaults
nlohmann::ordered_json report_json(const RunConfig& cfg, const std::vector<SuiteResult>& rs);
nlohmann::ordered_json timings_json(const std::vector<SuiteResult>& rs);

struct SolveArtifacts {
    nlohmann::ordered_json report;
    std::string csv;
    int exit_code = 0;
};
SolveArtifacts run_solve(const RunConfig& cfg);

struct SchurArtifacts {
    nlohmann::ordered_json report;
    std::string csv;
    std::string summary; // one-line agreement rate
};
SchurArtifacts run_schur(const RunConfig& cfg);

// minimal structural validator: type / properties / required / items / enum
std::vector<std::string> validate_json(const nlohmann::ordered_json& doc,
                                       const nlohmann::ordered_json& schema);
std::string report_schema_path();
extern const char* const kConstantsVersion;

} // namespace corona
