#pragma once
//
// Identity verification suites: seeded sweeps of every closed form and
// identity against brute-force evaluation, with per-statement thresholds.
// These back the `verify` CLI command and the acceptance tests.
//

#include <cstdint>
#include <string>
#include <vector>

#include "zw8/characters.hpp"

namespace zw8 {

struct VerifyOptions {
    uint64_t seed = 0xC0FFEE;
    double threshold_scale = 1.0; // multiplies every allowed residual
    AdditiveMode mode = AdditiveMode::DIFFERENT;
    bool quick = false; // reduced sweeps (used by unit tests)
    int workers = 1;
};

struct SuiteResult {
    std::string suite;
    bool pass = true;
    int64_t cases = 0;
    double worst_residual = 0;
    double worst_allowed = 0;
    std::string worst_case; // modulus / parameters at the worst residual
    uint64_t seed = 0;
    std::string mode;
    std::string note;

    std::string to_json() const;
};

// Suites: c4, klo, pow, c400, hfm1, cross, reciprocity, hd, cnn, ptp.
std::vector<std::string> suite_names();
bool is_suite_name(const std::string& name);
SuiteResult run_suite(const std::string& name, const VerifyOptions& opt);

} // namespace zw8
