#pragma once

#include <string>
#include <vector>

namespace boxverify {

// Counterexample assignment file: one s-expression of (variable value) pairs,
//   ((X_0 0.1) (X_1 -0.25) (Y_0 3.5) ...)
// Values print as shortest-round-trip decimals, so re-parsing reproduces the
// exact binary64 bit patterns.
std::string format_counterexample(const std::vector<double>& x, const std::vector<double>& y);
void write_counterexample_file(const std::string& path, const std::vector<double>& x,
                               const std::vector<double>& y);

struct Counterexample {
    std::vector<double> x;
    std::vector<double> y;  // may be empty if the file lists no outputs
};

// Requires a complete X_0..X_{n-1} assignment for some n; throws SyntaxError
// on malformed input, FileError if unreadable.
Counterexample parse_counterexample(const std::string& text);
Counterexample read_counterexample_file(const std::string& path);

}  // namespace boxverify
