#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace calpkit::cli {

// Runs one command line (without the program name). Exit codes: 0 success, 1 malformed input,
// 2 infeasible or over budget.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchConfig {
    std::vector<std::string> files;
    int random = 12;
    std::uint64_t seed = 1;
    int trials = 20;
    int threads = 0;  // 0: hardware concurrency
    bool timing = true;
};

// One CSV row per (instance, solver).
void bench(const BenchConfig& cfg, std::ostream& csv);

}  // namespace calpkit::cli
