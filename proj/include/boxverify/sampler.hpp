#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "boxverify/box.hpp"

namespace boxverify {

// SplitMix64: counter-style 64-bit generator (Steele, Lea & Flood's mixing
// constants). Chosen because the output stream is fully specified by the
// algorithm, so identical seeds reproduce identical samples on any platform,
// unlike std::uniform_real_distribution.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53 random bits
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Row-major n x d matrix of input points plus the seed that generated it.
struct SampleSet {
    std::size_t count = 0;
    std::size_t dim = 0;
    std::vector<double> data;
    std::uint64_t seed = 0;

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data.data() + i * dim, dim);
    }
};

// Latin hypercube sampling with multidimensional uniformity: oversample
// 5n i.i.d. points in the unit cube, prune clustered points by the
// two-nearest-neighbour criterion, then re-stratify each dimension by rank
// and map affinely onto the box. Deterministic in (n, box, seed).
SampleSet lhsmdu(std::size_t n, const Box& box, std::uint64_t seed);

// The elimination step: repeatedly removes the point with the smallest mean
// Euclidean distance to its two nearest neighbours (ties to the lowest row
// index) until `target` rows remain. Exposed separately so it can be checked
// against a brute-force reference.
std::vector<std::size_t> nearest_neighbor_prune_indices(std::span<const double> points,
                                                        std::size_t count, std::size_t dim,
                                                        std::size_t target);
std::vector<double> nearest_neighbor_prune(std::span<const double> points, std::size_t count,
                                           std::size_t dim, std::size_t target);

}  // namespace boxverify
