#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "boxverify/box.hpp"
#include "boxverify/onnx.hpp"
#include "boxverify/optimizer.hpp"
#include "boxverify/sampler.hpp"

namespace boxverify {

// Any pure vector -> vector map. Networks are adapted through infer(); tests
// plug in closed-form functions.
using VectorFn = std::function<std::vector<double>(std::span<const double>)>;

// Sample matrix with the corresponding outputs, one vector per row.
struct EvaluatedSamples {
    SampleSet samples;
    std::vector<std::vector<double>> outputs;
};

// Per-output extreme sampled values with the rows achieving them.
struct CandidateSet {
    struct PerOutput {
        std::vector<double> argmin_point;
        std::vector<double> argmax_point;
        double min_value = 0.0;
        double max_value = 0.0;
        std::size_t argmin_row = 0;
        std::size_t argmax_row = 0;
    };
    std::vector<PerOutput> outputs;
};

enum class Provenance { Fresh, Cache };

// Estimated per-output ranges with the witness inputs achieving them. These
// are inner estimates: every bound is a value the network actually attains.
struct OutputBounds {
    struct PerOutput {
        double lo = 0.0;
        double hi = 0.0;
        std::vector<double> lo_witness;
        std::vector<double> hi_witness;
    };
    std::vector<PerOutput> outputs;
    Provenance provenance = Provenance::Fresh;
};

struct BoundsConfig {
    OptConfig opt;
    int samples_per_input = 20;
    std::optional<std::string> cache_dir;
    // soft deadline checked between refinement steps; throws TimeoutExpired
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

EvaluatedSamples evaluate_samples(const VectorFn& fn, SampleSet samples);

CandidateSet extract_optima(const EvaluatedSamples& evaluated);
CandidateSet extract_optima(const Network& net, const SampleSet& samples);

OutputBounds refine_bounds(const VectorFn& fn, const Box& box, const CandidateSet& cands,
                           const OptConfig& cfg);
OutputBounds refine_bounds(const Network& net, const Box& box, const CandidateSet& cands,
                           const OptConfig& cfg);

struct BoundsResult {
    OutputBounds bounds;
    // present on the Fresh path; decide() reuses it for the counterexample scan
    std::optional<EvaluatedSamples> run;
    long fn_evals = 0;
};

// Full sampling + candidate extraction + refinement composition with a
// cache in front keyed on (model digest, box, seed, config).
BoundsResult estimate_output_bounds(const Network& net, const Box& box, std::uint64_t seed,
                                    const BoundsConfig& cfg);

VectorFn network_fn(const Network& net);

}  // namespace boxverify
