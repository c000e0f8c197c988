#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "treeharm/random.hpp"

namespace treeharm {

// One verification run: a named family of inequality checks over randomized
// inputs at a single parameter pair, with reproducible sampling.
struct SuiteConfig {
    MeasureParams params;
    unsigned max_depth = 4;
    std::uint64_t seed = 1;
    std::size_t samples = 200;
    std::vector<double> lambda_multipliers = {1.001, 1.05, 1.3, 2.0, 8.0};
    std::vector<double> gammas = {0.01, 0.1, 0.5, 1.0};
    std::vector<double> exponents = {1.5, 2.0, 4.0};
    std::vector<double> oscillation_exponents = {2.0, 3.0};
    std::size_t radius_points = 50;
};

struct SuiteResult {
    std::string suite;
    bool pass = true;
    std::uint64_t checks = 0;   // individual comparisons performed
    double worst_margin = 0.0;  // left side minus allowed right side; <= 0 passes
    std::string witness;        // the worst case in one line
    nlohmann::json details;
};

// The accepted suite names, in dispatch order.
const std::vector<std::string>& suite_names();

// Runs one named suite; throws validation_error("unknown suite") otherwise.
SuiteResult run_suite(const std::string& name, const SuiteConfig& config);

// Full machine-readable report for one run, embedding the resolved config.
nlohmann::json suite_report(const SuiteResult& result, const SuiteConfig& config);

} // namespace treeharm
