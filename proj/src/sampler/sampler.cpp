#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "boxverify/kernels.hpp"
#include "boxverify/sampler.hpp"

namespace boxverify {

namespace {

// Two nearest neighbours of a point, kept as squared distances with
// (distance, index) tie order.
struct TwoNearest {
    double s1 = std::numeric_limits<double>::infinity();
    double s2 = std::numeric_limits<double>::infinity();
    std::size_t n1 = 0;
    std::size_t n2 = 0;

    void offer(double s, std::size_t idx) {
        if (s < s1 || (s == s1 && idx < n1)) {
            s2 = s1;
            n2 = n1;
            s1 = s;
            n1 = idx;
        } else if (s < s2 || (s == s2 && idx < n2)) {
            s2 = s;
            n2 = idx;
        }
    }
};

double neighbor_mean(const TwoNearest& nn, std::size_t alive_count) {
    // with only two points alive there is a single neighbour
    if (alive_count <= 2)
        return std::sqrt(nn.s1);
    return (std::sqrt(nn.s1) + std::sqrt(nn.s2)) / 2.0;
}

}  // namespace

std::vector<std::size_t> nearest_neighbor_prune_indices(std::span<const double> points,
                                                        std::size_t count, std::size_t dim,
                                                        std::size_t target) {
    if (target > count)
        throw std::invalid_argument("prune target exceeds point count");
    if (points.size() != count * dim)
        throw std::invalid_argument("point matrix size mismatch");

    std::vector<bool> alive(count, true);
    std::size_t alive_count = count;

    auto sq = [&](std::size_t a, std::size_t b) {
        return kernels::sq_dist(points.data() + a * dim, points.data() + b * dim, dim);
    };

    std::vector<TwoNearest> nn(count);
    auto recompute = [&](std::size_t i) {
        TwoNearest fresh;
        for (std::size_t j = 0; j < count; ++j)
            if (j != i && alive[j])
                fresh.offer(sq(i, j), j);
        nn[i] = fresh;
    };
    for (std::size_t i = 0; i < count; ++i)
        if (alive_count > 1)
            recompute(i);

    while (alive_count > target) {
        std::size_t victim = count;
        double victim_mean = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < count; ++i) {
            if (!alive[i])
                continue;
            const double m = neighbor_mean(nn[i], alive_count);
            if (m < victim_mean) {
                victim_mean = m;
                victim = i;
            }
        }
        alive[victim] = false;
        --alive_count;
        if (alive_count == 0)
            break;
        for (std::size_t i = 0; i < count; ++i)
            if (alive[i] && (nn[i].n1 == victim || nn[i].n2 == victim))
                recompute(i);
    }

    std::vector<std::size_t> kept;
    kept.reserve(target);
    for (std::size_t i = 0; i < count; ++i)
        if (alive[i])
            kept.push_back(i);
    return kept;
}

std::vector<double> nearest_neighbor_prune(std::span<const double> points, std::size_t count,
                                           std::size_t dim, std::size_t target) {
    const auto kept = nearest_neighbor_prune_indices(points, count, dim, target);
    std::vector<double> out;
    out.reserve(kept.size() * dim);
    for (std::size_t idx : kept)
        out.insert(out.end(), points.begin() + static_cast<std::ptrdiff_t>(idx * dim),
                   points.begin() + static_cast<std::ptrdiff_t>((idx + 1) * dim));
    return out;
}

SampleSet lhsmdu(std::size_t n, const Box& box, std::uint64_t seed) {
    if (n == 0)
        throw std::invalid_argument("sample count must be positive");
    box.validate();
    const std::size_t d = box.dim();

    constexpr std::size_t kOversample = 5;  // candidate pool is 5n points
    const std::size_t m = kOversample * n;

    SplitMix64 rng(seed);
    std::vector<double> pool(m * d);
    for (double& v : pool)
        v = rng.next_unit();

    const auto kept = nearest_neighbor_prune_indices(pool, m, d, n);

    // Re-stratify each dimension: the k-th smallest coordinate moves into
    // stratum k, uniformly placed inside it. The guard keeps rounding in the
    // affine map from pushing a point across a stratum boundary.
    constexpr double kGuard = 1e-9;
    std::vector<double> unit(n * d);
    std::vector<std::size_t> order(n);
    for (std::size_t c = 0; c < d; ++c) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return pool[kept[a] * d + c] < pool[kept[b] * d + c];
        });
        for (std::size_t k = 0; k < n; ++k) {
            const double u = kGuard + rng.next_unit() * (1.0 - 2.0 * kGuard);
            unit[order[k] * d + c] = (static_cast<double>(k) + u) / static_cast<double>(n);
        }
    }

    SampleSet out;
    out.count = n;
    out.dim = d;
    out.seed = seed;
    out.data.resize(n * d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const double w = box.hi[c] - box.lo[c];
            double x = box.lo[c] + unit[r * d + c] * w;
            x = std::min(std::max(x, box.lo[c]), box.hi[c]);
            out.data[r * d + c] = x;
        }
    }
    return out;
}

}  // namespace boxverify
