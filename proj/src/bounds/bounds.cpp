#include "boxverify/bounds.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "boxverify/cache.hpp"
#include "boxverify/errors.hpp"

namespace boxverify {

VectorFn network_fn(const Network& net) {
    return [&net](std::span<const double> x) { return infer(net, x); };
}

EvaluatedSamples evaluate_samples(const VectorFn& fn, SampleSet samples) {
    EvaluatedSamples out;
    out.outputs.reserve(samples.count);
    for (std::size_t r = 0; r < samples.count; ++r)
        out.outputs.push_back(fn(samples.row(r)));
    out.samples = std::move(samples);
    return out;
}

CandidateSet extract_optima(const EvaluatedSamples& evaluated) {
    if (evaluated.outputs.empty())
        throw std::invalid_argument("extract_optima: no samples");
    const std::size_t m = evaluated.outputs[0].size();

    CandidateSet cands;
    cands.outputs.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        auto& c = cands.outputs[j];
        c.min_value = std::numeric_limits<double>::infinity();
        c.max_value = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < evaluated.outputs.size(); ++r) {
            const double v = evaluated.outputs[r][j];
            if (!std::isfinite(v))
                throw NonFiniteOutput("sample row " + std::to_string(r) +
                                      " produced a non-finite output");
            if (v < c.min_value) {  // strict: ties keep the lowest row index
                c.min_value = v;
                c.argmin_row = r;
            }
            if (v > c.max_value) {
                c.max_value = v;
                c.argmax_row = r;
            }
        }
        const auto min_row = evaluated.samples.row(c.argmin_row);
        const auto max_row = evaluated.samples.row(c.argmax_row);
        c.argmin_point.assign(min_row.begin(), min_row.end());
        c.argmax_point.assign(max_row.begin(), max_row.end());
    }
    return cands;
}

CandidateSet extract_optima(const Network& net, const SampleSet& samples) {
    return extract_optima(evaluate_samples(network_fn(net), samples));
}

namespace {

void check_deadline(const BoundsConfig& cfg) {
    if (cfg.deadline && std::chrono::steady_clock::now() > *cfg.deadline)
        throw TimeoutExpired("bounds estimation exceeded the time budget");
}

OutputBounds refine_impl(const VectorFn& fn, const Box& box, const CandidateSet& cands,
                         const OptConfig& cfg, const BoundsConfig* deadline_cfg) {
    OutputBounds bounds;
    bounds.provenance = Provenance::Fresh;
    bounds.outputs.resize(cands.outputs.size());

    for (std::size_t j = 0; j < cands.outputs.size(); ++j) {
        const auto& c = cands.outputs[j];
        auto& b = bounds.outputs[j];

        // non-finite objective values read as +inf so the line search backs off
        Objective to_min([&fn, j](std::span<const double> x) {
            const double v = fn(x)[j];
            return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
        });
        Objective to_max([&fn, j](std::span<const double> x) {
            const double v = fn(x)[j];
            return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
        });

        if (deadline_cfg)
            check_deadline(*deadline_cfg);
        const OptResult down = minimize(to_min, c.argmin_point, box, cfg);
        if (deadline_cfg)
            check_deadline(*deadline_cfg);
        const OptResult up = minimize(to_max, c.argmax_point, box, cfg);

        // refinement may only widen the sampled evidence
        if (std::isfinite(down.f_best) && down.f_best < c.min_value) {
            b.lo = down.f_best;
            b.lo_witness = down.x_best;
        } else {
            b.lo = c.min_value;
            b.lo_witness = c.argmin_point;
        }
        const double up_value = -up.f_best;
        if (std::isfinite(up_value) && up_value > c.max_value) {
            b.hi = up_value;
            b.hi_witness = up.x_best;
        } else {
            b.hi = c.max_value;
            b.hi_witness = c.argmax_point;
        }
    }
    return bounds;
}

}  // namespace

OutputBounds refine_bounds(const VectorFn& fn, const Box& box, const CandidateSet& cands,
                           const OptConfig& cfg) {
    return refine_impl(fn, box, cands, cfg, nullptr);
}

OutputBounds refine_bounds(const Network& net, const Box& box, const CandidateSet& cands,
                           const OptConfig& cfg) {
    return refine_impl(network_fn(net), box, cands, cfg, nullptr);
}

BoundsResult estimate_output_bounds(const Network& net, const Box& box, std::uint64_t seed,
                                    const BoundsConfig& cfg) {
    box.validate();
    if (box.dim() != net.input_dim)
        throw std::invalid_argument("box dimension does not match network input size");

    CacheKey key;
    key.model_digest = net.source_digest;
    key.box = box;
    key.seed = seed;
    key.samples_per_input = cfg.samples_per_input;
    key.opt = cfg.opt;

    if (cfg.cache_dir) {
        if (auto hit = cache_lookup(*cfg.cache_dir, key)) {
            if (hit->outputs.size() == net.output_dim) {
                BoundsResult result;
                result.bounds = std::move(*hit);
                return result;  // zero network evaluations
            }
        }
    }

    std::atomic<long> evals{0};
    VectorFn counted = [&net, &evals](std::span<const double> x) {
        evals.fetch_add(1, std::memory_order_relaxed);
        return infer(net, x);
    };

    const std::size_t n = static_cast<std::size_t>(cfg.samples_per_input) * net.input_dim;
    check_deadline(cfg);
    SampleSet samples = lhsmdu(n, box, seed);
    check_deadline(cfg);
    EvaluatedSamples evaluated = evaluate_samples(counted, std::move(samples));
    CandidateSet cands = extract_optima(evaluated);
    OutputBounds bounds = refine_impl(counted, box, cands, cfg.opt, &cfg);

    if (cfg.cache_dir)
        cache_store(*cfg.cache_dir, key, bounds);

    BoundsResult result;
    result.bounds = std::move(bounds);
    result.run = std::move(evaluated);
    result.fn_evals = evals.load();
    return result;
}

}  // namespace boxverify
