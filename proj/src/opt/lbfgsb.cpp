#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "boxverify/kernels.hpp"
#include "boxverify/optimizer.hpp"

namespace boxverify {

namespace {

constexpr double kArmijoC1 = 1e-4;
constexpr int kMaxBacktracks = 40;
constexpr double kCurvatureSkip = 1e-10;

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

double norm2(const std::vector<double>& v) {
    return std::sqrt(kernels::dot(v.data(), v.data(), v.size()));
}

void clamp_into(const Box& box, std::vector<double>& x) {
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::min(std::max(x[i], box.lo[i]), box.hi[i]);
}

struct CurvaturePair {
    std::vector<double> s;
    std::vector<double> y;
    double rho;  // 1 / (s.y)
};

// standard two-loop recursion; returns the quasi-Newton step -H*g
std::vector<double> two_loop_direction(const std::vector<double>& g,
                                       const std::deque<CurvaturePair>& history) {
    std::vector<double> q = g;
    const std::size_t k = history.size();
    std::vector<double> alpha(k);
    for (std::size_t i = k; i-- > 0;) {
        const CurvaturePair& p = history[i];
        alpha[i] = p.rho * kernels::dot(p.s.data(), q.data(), q.size());
        kernels::axpy(-alpha[i], p.y.data(), q.data(), q.size());
    }
    if (!history.empty()) {
        const CurvaturePair& last = history.back();
        const double yy = kernels::dot(last.y.data(), last.y.data(), last.y.size());
        if (yy > 0.0) {
            const double gamma = 1.0 / (last.rho * yy);
            for (double& v : q)
                v *= gamma;
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        const CurvaturePair& p = history[i];
        const double beta = p.rho * kernels::dot(p.y.data(), q.data(), q.size());
        kernels::axpy(alpha[i] - beta, p.s.data(), q.data(), q.size());
    }
    for (double& v : q)
        v = -v;
    return q;
}

}  // namespace

std::vector<double> fd_gradient(const Objective& f, std::span<const double> x, const Box& box,
                                double h_rel) {
    const std::size_t d = x.size();
    std::vector<double> g(d, 0.0);
    std::vector<double> probe(x.begin(), x.end());

    double fx = std::numeric_limits<double>::quiet_NaN();
    auto base = [&]() {
        if (std::isnan(fx))
            fx = f(x);
        return fx;
    };

    for (std::size_t i = 0; i < d; ++i) {
        if (box.lo[i] == box.hi[i])
            continue;  // frozen dimension
        const double h = h_rel * std::max(1.0, std::abs(x[i]));
        const double up_room = box.hi[i] - x[i];
        const double down_room = x[i] - box.lo[i];
        double deriv = 0.0;
        if (up_room >= h && down_room >= h) {
            probe[i] = x[i] + h;
            const double fp = f(probe);
            probe[i] = x[i] - h;
            const double fm = f(probe);
            deriv = (fp - fm) / (2.0 * h);
        } else {
            // second-order one-sided stencil on whichever side has room;
            // a first-order difference here would leak O(h) error into the
            // quasi-Newton steps taken off active bounds
            const double sign = up_room >= down_room ? 1.0 : -1.0;
            const double room = std::max(up_room, down_room);
            const double hh = std::min(h, room / 2.0);
            if (hh > 0.0) {
                probe[i] = x[i] + sign * hh;
                const double f1 = f(probe);
                probe[i] = x[i] + sign * 2.0 * hh;
                const double f2 = f(probe);
                deriv = sign * (-3.0 * base() + 4.0 * f1 - f2) / (2.0 * hh);
            }
        }
        probe[i] = x[i];
        g[i] = deriv;
    }
    return g;
}

OptResult minimize(const Objective& f, std::span<const double> x0, const Box& box,
                   const OptConfig& cfg) {
    return minimize(f, x0, box, cfg, AcceptObserver());
}

OptResult minimize(const Objective& f, std::span<const double> x0, const Box& box,
                   const OptConfig& cfg, const AcceptObserver& on_accept) {
    if (x0.size() != box.dim())
        throw std::invalid_argument("minimize: x0 dimension does not match box");

    const std::size_t d = x0.size();
    std::vector<double> x(x0.begin(), x0.end());
    clamp_into(box, x);

    OptResult result;
    result.x_best = x;
    result.f_best = f(x);
    result.status = OptStatus::MaxIterations;

    double fx = result.f_best;
    if (!std::isfinite(fx)) {
        result.status = OptStatus::LineSearchFailure;
        return result;
    }
    if (on_accept)
        on_accept(x, fx);

    std::vector<double> g = fd_gradient(f, x, box, cfg.fd_step);
    std::deque<CurvaturePair> history;

    auto projected_gradient = [&](const std::vector<double>& grad) {
        std::vector<double> pg = grad;
        for (std::size_t i = 0; i < d; ++i) {
            if (box.lo[i] == box.hi[i])
                pg[i] = 0.0;
            else if (x[i] <= box.lo[i] && pg[i] > 0.0)
                pg[i] = 0.0;
            else if (x[i] >= box.hi[i] && pg[i] < 0.0)
                pg[i] = 0.0;
        }
        return pg;
    };

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        std::vector<double> pg = projected_gradient(g);
        if (inf_norm(pg) <= cfg.grad_tolerance) {
            result.status = OptStatus::Converged;
            break;
        }

        std::vector<double> dir = two_loop_direction(g, history);
        // drop components that push against an active bound or move a frozen dim
        for (std::size_t i = 0; i < d; ++i) {
            if (box.lo[i] == box.hi[i])
                dir[i] = 0.0;
            else if (x[i] <= box.lo[i] && dir[i] < 0.0)
                dir[i] = 0.0;
            else if (x[i] >= box.hi[i] && dir[i] > 0.0)
                dir[i] = 0.0;
        }
        double descent = kernels::dot(g.data(), dir.data(), d);
        if (!(descent < 0.0)) {
            // quasi-Newton direction unusable; fall back to steepest descent
            for (std::size_t i = 0; i < d; ++i)
                dir[i] = -pg[i];
            descent = kernels::dot(g.data(), dir.data(), d);
            if (!(descent < 0.0)) {
                result.status = OptStatus::LineSearchFailure;
                break;
            }
        }

        // line search along the projected path x(a) = P(x + a*dir): sufficient
        // decrease via Armijo backtracking, doubling while the objective keeps
        // falling (unit quasi-Newton steps can be far too short when the
        // history poorly scales a stiff direction), then one parabolic polish
        std::vector<double> xa(d), xt(d), dx(d);
        auto trial_point = [&](double a, std::vector<double>& out) {
            for (std::size_t i = 0; i < d; ++i)
                out[i] = x[i] + a * dir[i];
            clamp_into(box, out);
        };
        auto armijo_ok = [&](double fa_, const std::vector<double>& xa_) {
            kernels::sub(xa_.data(), x.data(), dx.data(), d);
            if (inf_norm(dx) == 0.0)
                return false;
            const double gTdx = kernels::dot(g.data(), dx.data(), d);
            return gTdx < 0.0 ? fa_ <= fx + kArmijoC1 * gTdx : fa_ < fx;
        };

        double step = 1.0;
        double fa = std::numeric_limits<double>::infinity();
        bool accepted = false;
        trial_point(step, xa);
        kernels::sub(xa.data(), x.data(), dx.data(), d);
        if (inf_norm(dx) != 0.0) {
            fa = f(xa);
            accepted = armijo_ok(fa, xa);
        }
        if (accepted) {
            for (double grow = 2.0; grow < 1e9; grow *= 2.0) {
                trial_point(grow, xt);
                if (xt == xa)
                    break;  // projection saturated every coordinate
                const double ft = f(xt);
                if (ft < fa && armijo_ok(ft, xt)) {
                    fa = ft;
                    xa.swap(xt);
                    step = grow;
                } else {
                    break;
                }
            }
        } else {
            for (int bt = 0; bt < kMaxBacktracks; ++bt) {
                step *= 0.5;
                trial_point(step, xa);
                kernels::sub(xa.data(), x.data(), dx.data(), d);
                if (inf_norm(dx) == 0.0)
                    continue;
                fa = f(xa);
                if (armijo_ok(fa, xa)) {
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted) {
            result.status = OptStatus::LineSearchFailure;
            break;
        }

        // parabolic polish along the chord x -> xa (feasible by convexity of
        // the box); lands exactly on the 1-d minimizer of quadratic objectives
        {
            kernels::sub(xa.data(), x.data(), dx.data(), d);
            const double slope = kernels::dot(g.data(), dx.data(), d);
            const double curv = fa - fx - slope;
            if (slope < 0.0 && curv > 0.0) {
                const double t = -slope / (2.0 * curv);
                if (t > 0.0 && t < 1e6 && t != 1.0) {
                    for (std::size_t i = 0; i < d; ++i)
                        xt[i] = x[i] + t * dx[i];
                    clamp_into(box, xt);
                    if (xt != xa) {
                        const double ft = f(xt);
                        if (ft < fa) {
                            fa = ft;
                            xa.swap(xt);
                        }
                    }
                }
            }
        }

        std::vector<double> gnew = fd_gradient(f, xa, box, cfg.fd_step);
        CurvaturePair pair;
        pair.s.resize(d);
        pair.y.resize(d);
        kernels::sub(xa.data(), x.data(), pair.s.data(), d);
        kernels::sub(gnew.data(), g.data(), pair.y.data(), d);
        const double sy = kernels::dot(pair.s.data(), pair.y.data(), d);
        if (sy > kCurvatureSkip * norm2(pair.s) * norm2(pair.y)) {
            pair.rho = 1.0 / sy;
            history.push_back(std::move(pair));
            while (history.size() > static_cast<std::size_t>(std::max(1, cfg.memory)))
                history.pop_front();
        }

        const double drop = fx - fa;
        x = xa;
        fx = fa;
        g = std::move(gnew);
        result.iterations = iter + 1;
        if (fx < result.f_best) {
            result.f_best = fx;
            result.x_best = x;
        }
        if (on_accept)
            on_accept(x, fx);

        if (drop <= cfg.f_tolerance * std::max({1.0, std::abs(fx), std::abs(fx + drop)})) {
            result.status = OptStatus::Converged;
            break;
        }
    }

    return result;
}

}  // namespace boxverify
