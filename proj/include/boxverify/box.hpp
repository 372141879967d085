#pragma once

#include <cstddef>
#include <vector>

namespace boxverify {

// Axis-aligned hyper-rectangle of input bounds. Entries are finite and
// lo[i] <= hi[i]; dimensions with lo[i] == hi[i] are degenerate but legal.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dim() const { return lo.size(); }
    double width(std::size_t i) const { return hi[i] - lo[i]; }
    bool contains(const double* x) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i])
                return false;
        return true;
    }

    // Throws std::invalid_argument if the invariants fail.
    void validate() const;
};

}  // namespace boxverify
