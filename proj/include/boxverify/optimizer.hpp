#pragma once

#include <functional>
#include <span>
#include <vector>

#include "boxverify/box.hpp"

namespace boxverify {

using ScalarFn = std::function<double(std::span<const double>)>;

// Deterministic scalar objective with an evaluation counter.
class Objective {
public:
    explicit Objective(ScalarFn fn) : fn_(std::move(fn)) {}

    double operator()(std::span<const double> x) const {
        ++evals_;
        return fn_(x);
    }
    long evaluations() const { return evals_; }

private:
    ScalarFn fn_;
    mutable long evals_ = 0;
};

struct OptConfig {
    int memory = 10;               // history pairs m
    int max_iterations = 200;
    double grad_tolerance = 1e-5;  // infinity norm of the projected gradient
    double f_tolerance = 1e-9;     // relative decrease
    double fd_step = 1e-6;         // relative finite-difference step
};

enum class OptStatus { Converged, MaxIterations, LineSearchFailure };

struct OptResult {
    std::vector<double> x_best;
    double f_best = 0.0;
    int iterations = 0;
    OptStatus status = OptStatus::Converged;
};

// Central finite differences with per-coordinate step h_rel * max(1, |x_i|),
// falling back to a second-order one-sided difference where the stencil
// would leave the box. Degenerate dimensions (lo == hi) get gradient 0.
std::vector<double> fd_gradient(const Objective& f, std::span<const double> x, const Box& box,
                                double h_rel);

// Box-constrained limited-memory BFGS: two-loop recursion over the last m
// curvature pairs, search along the path projected onto the box, backtracking
// until sufficient decrease. Every evaluated point stays inside the box and
// accepted f values never increase. Never throws on optimization trouble;
// the status reports it and x_best/f_best hold the best point seen.
OptResult minimize(const Objective& f, std::span<const double> x0, const Box& box,
                   const OptConfig& cfg);

// Variant reporting each accepted iterate, used by property tests.
using AcceptObserver = std::function<void(std::span<const double>, double)>;
OptResult minimize(const Objective& f, std::span<const double> x0, const Box& box,
                   const OptConfig& cfg, const AcceptObserver& on_accept);

}  // namespace boxverify
