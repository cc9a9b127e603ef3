#ifndef ZEROONE_RUNNER_HPP
#define ZEROONE_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "textio.hpp"

namespace zeroone {

struct CheckResult {
    std::string name;
    std::string status;  // pass | fail | inconclusive | skipped | info
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct RunResult {
    std::string kind;
    std::string jsonl;   // one record per trial (or per violation for screens)
    std::string csv;     // summary table
    std::string report;  // human-readable
    std::vector<CheckResult> checks;

    int failed() const;
};

struct SpecOverrides {
    std::optional<uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> n;
};

// Executes one experiment spec. Throws ParseError for malformed input and
// HypothesisError when a claim's precondition fails.
RunResult run_spec_text(const std::string& text, const SpecOverrides& ov = {});
RunResult run_spec_file(const std::string& path, const SpecOverrides& ov = {});

// Writes trials.jsonl, summary.csv and report.txt under dir.
void write_outputs(const RunResult& r, const std::string& dir);

// Listing for `catalog <kind>`; kind in contexts|pairs|systems|quads|all.
std::string catalog_text(const std::string& kind);

std::string read_file(const std::string& path);

} // namespace zeroone

#endif
