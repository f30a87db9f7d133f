#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace greenpath::verify {

enum class Suite { Fast, Full };

struct Options {
    Suite suite = Suite::Full;
    std::uint64_t seed = 42;
    int threads = 0;  // 0 = GREENPATH_THREADS or hardware concurrency
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double discrepancy = 0.0;  // worst measured deviation
    double threshold = 0.0;
    bool time_ok = true;       // within the stated wall-clock budget, if any
    std::string detail;        // extra report lines (adjudication tables etc.)
};

// Runs the acceptance criteria.  Fast runs every criterion at reduced Monte
// Carlo scale (CI tier); Full runs at the stated scale.  Output is
// deterministic for a fixed (suite, seed) and independent of the worker
// count.
std::vector<CriterionResult> run_acceptance(const Options& options);

// One line per criterion plus a summary; returns 0 if everything passed,
// 1 otherwise.
int print_report(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace greenpath::verify
