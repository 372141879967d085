#include "boxverify/checker.hpp"

#include <algorithm>

#include "boxverify/errors.hpp"

namespace boxverify {

namespace {

const Interval& lookup(const IntervalEnv& env, const Variable& v) {
    auto it = env.find(v);
    if (it == env.end())
        throw MissingVariable("no interval for variable " + v.name());
    return it->second;
}

double point_value(const Variable& v, std::span<const double> x, std::span<const double> y) {
    const auto& vec = v.kind == Variable::Kind::Input ? x : y;
    if (static_cast<std::size_t>(v.index) >= vec.size())
        throw MissingVariable("no value for variable " + v.name());
    return vec[static_cast<std::size_t>(v.index)];
}

bool eval_atom_point(const LinearAtom& atom, std::span<const double> x,
                     std::span<const double> y) {
    // accumulation order matches eval_atom_interval (map order), so a
    // zero-width environment reproduces this sum bit for bit
    double acc = 0.0;
    for (const auto& [v, coeff] : atom.coefficients)
        acc += rational_to_double(coeff) * point_value(v, x, y);
    const double k = rational_to_double(atom.constant);
    return atom.relation == Relation::LessEq ? acc <= k : acc >= k;
}

}  // namespace

TruthValue eval_atom_interval(const LinearAtom& atom, const IntervalEnv& env) {
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& [v, coeff] : atom.coefficients) {
        const Interval& iv = lookup(env, v);
        const double c = rational_to_double(coeff);
        if (c >= 0.0) {
            lo += c * iv.lo;
            hi += c * iv.hi;
        } else {
            lo += c * iv.hi;
            hi += c * iv.lo;
        }
    }
    const double k = rational_to_double(atom.constant);
    if (atom.relation == Relation::LessEq) {
        if (hi <= k)
            return TruthValue::AlwaysTrue;
        if (lo > k)
            return TruthValue::AlwaysFalse;
        return TruthValue::Indeterminate;
    }
    if (lo >= k)
        return TruthValue::AlwaysTrue;
    if (hi < k)
        return TruthValue::AlwaysFalse;
    return TruthValue::Indeterminate;
}

TruthValue eval_formula_interval(const Formula& f, const IntervalEnv& env) {
    switch (f.kind) {
    case Formula::Kind::Atom:
        return eval_atom_interval(f.atom, env);
    case Formula::Kind::And: {
        TruthValue acc = TruthValue::AlwaysTrue;
        for (const Formula& child : f.children)
            acc = std::min(acc, eval_formula_interval(child, env));
        return acc;
    }
    case Formula::Kind::Or: {
        TruthValue acc = TruthValue::AlwaysFalse;
        for (const Formula& child : f.children)
            acc = std::max(acc, eval_formula_interval(child, env));
        return acc;
    }
    }
    return TruthValue::Indeterminate;
}

bool eval_point(const Formula& f, std::span<const double> x, std::span<const double> y) {
    switch (f.kind) {
    case Formula::Kind::Atom:
        return eval_atom_point(f.atom, x, y);
    case Formula::Kind::And:
        for (const Formula& child : f.children)
            if (!eval_point(child, x, y))
                return false;
        return true;
    case Formula::Kind::Or:
        for (const Formula& child : f.children)
            if (eval_point(child, x, y))
                return true;
        return false;
    }
    return false;
}

IntervalEnv make_env(const Box& box, const OutputBounds& bounds) {
    IntervalEnv env;
    for (std::size_t i = 0; i < box.dim(); ++i)
        env[Variable{Variable::Kind::Input, static_cast<int>(i)}] = {box.lo[i], box.hi[i]};
    for (std::size_t j = 0; j < bounds.outputs.size(); ++j)
        env[Variable{Variable::Kind::Output, static_cast<int>(j)}] = {bounds.outputs[j].lo,
                                                                      bounds.outputs[j].hi};
    return env;
}

Verdict decide(const SpecFile& spec, const Network& net, const Box& box,
               const OutputBounds& bounds,
               const std::function<const EvaluatedSamples&()>& sample_provider) {
    (void)net;
    Verdict verdict;

    const IntervalEnv env = make_env(box, bounds);
    if (eval_formula_interval(spec.assertion, env) == TruthValue::AlwaysFalse) {
        verdict.kind = Verdict::Kind::Holds;
        return verdict;
    }

    const EvaluatedSamples& run = sample_provider();
    for (std::size_t r = 0; r < run.samples.count; ++r) {
        const auto x = run.samples.row(r);
        const auto& y = run.outputs[r];
        if (eval_point(spec.assertion, x, y)) {
            verdict.kind = Verdict::Kind::Violated;
            verdict.ce_input.assign(x.begin(), x.end());
            verdict.ce_output = y;
            return verdict;
        }
    }

    verdict.kind = Verdict::Kind::Unknown;
    verdict.reason = Verdict::UnknownReason::Inconclusive;
    return verdict;
}

Verdict decide(const SpecFile& spec, const Network& net, const Box& box,
               const OutputBounds& bounds, const EvaluatedSamples& samples) {
    return decide(spec, net, box, bounds,
                  std::function<const EvaluatedSamples&()>([&]() -> const EvaluatedSamples& {
                      return samples;
                  }));
}

}  // namespace boxverify
