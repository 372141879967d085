#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boxverify/optimizer.hpp"

namespace boxverify {

struct VerifyOptions {
    std::uint64_t seed = 42;
    int samples_per_input = 20;  // the sample budget factor per input dimension
    std::optional<std::string> cache_dir;
    double timeout_seconds = 0.0;  // 0 disables the soft timeout
    OptConfig opt;
};

// One verification run: everything the batch CSV and the CLI need.
struct RunRecord {
    std::string model_path;
    std::string spec_path;
    std::string verdict;  // "holds" | "violated" | "unknown"
    double wall_seconds = 0.0;
    std::uint64_t seed = 42;
    std::string bounds_provenance;  // "fresh" | "cache" | "" when bounds never ran
    std::string diagnostic;         // non-empty explains an unknown verdict
    bool file_error = false;        // unreadable inputs (nonzero exit at the CLI)
    std::vector<double> ce_input;
    std::vector<double> ce_output;
    std::string ce_path;  // set once the counterexample file has been written
};

// Full pipeline for one (model, spec) instance: parse, screen complex input
// disjunctions, extract the box, estimate bounds (cached), decide. Content
// and model problems degrade to an `unknown` record instead of throwing.
RunRecord verify_instance(const std::string& model_path, const std::string& spec_path,
                          const VerifyOptions& options);

// Re-checks a counterexample file from scratch: loads the model, re-runs
// inference on the stored inputs and evaluates the violation formula exactly.
// Returns true iff the stored point still witnesses the violation.
bool validate_counterexample(const std::string& model_path, const std::string& spec_path,
                             const std::string& ce_path, std::string* message = nullptr);

}  // namespace boxverify
