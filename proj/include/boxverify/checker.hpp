#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "boxverify/bounds.hpp"
#include "boxverify/box.hpp"
#include "boxverify/onnx.hpp"
#include "boxverify/vnnlib.hpp"

namespace boxverify {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Kleene lattice: And is min, Or is max under False < Indeterminate < True.
enum class TruthValue { AlwaysFalse = 0, Indeterminate = 1, AlwaysTrue = 2 };

using IntervalEnv = std::map<Variable, Interval>;

// Exact interval of the atom's linear expression via sign-aware endpoint
// selection, compared against the relation. Throws MissingVariable.
TruthValue eval_atom_interval(const LinearAtom& atom, const IntervalEnv& env);
TruthValue eval_formula_interval(const Formula& f, const IntervalEnv& env);

// Concrete two-valued evaluation with plain IEEE comparisons, zero tolerance.
bool eval_point(const Formula& f, std::span<const double> x, std::span<const double> y);

struct Verdict {
    enum class Kind { Holds, Violated, Unknown };
    enum class UnknownReason { ComplexDisjunction, Inconclusive, UnsupportedModel };

    Kind kind = Kind::Unknown;
    UnknownReason reason = UnknownReason::Inconclusive;
    std::vector<double> ce_input;   // set when Violated
    std::vector<double> ce_output;  // infer(net, ce_input)
};

IntervalEnv make_env(const Box& box, const OutputBounds& bounds);

// Algorithm verdict logic: interval refutation decides Holds; otherwise the
// samples are scanned in generation order for a concrete violation; otherwise
// Unknown(Inconclusive). The sample provider runs only when the scan is
// actually needed, which keeps cache hits free of network evaluations.
Verdict decide(const SpecFile& spec, const Network& net, const Box& box,
               const OutputBounds& bounds, const EvaluatedSamples& samples);
Verdict decide(const SpecFile& spec, const Network& net, const Box& box,
               const OutputBounds& bounds,
               const std::function<const EvaluatedSamples&()>& sample_provider);

}  // namespace boxverify
