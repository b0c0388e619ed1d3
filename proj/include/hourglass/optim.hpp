// Projected nonlinear conjugate-gradient minimizer shared by the curve,
// fiber and chain solvers: Polak-Ribiere directions with clipping,
// Barzilai-Borwein step seeding, Armijo backtracking, steepest-descent
// retry before declaring stationarity.

#ifndef HOURGLASS_OPTIM_HPP
#define HOURGLASS_OPTIM_HPP

#include <algorithm>
#include <cmath>
#include <vector>

namespace hourglass {

struct CgOptions {
    double tol = 1e-8;      // projected-gradient infinity norm target
    long max_iters = 100000;
};

struct CgOutcome {
    double f = 0.0;
    double grad_norm = 0.0;
    long iters = 0;
    bool converged = false;
};

namespace detail {

inline double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

/// Minimize value(q) in place. `gradient` must return the *projected*
/// gradient (components blocked by an active bound zeroed); `project`
/// clamps a trial point back into the feasible set.
template <class Value, class Grad, class Project>
CgOutcome cg_minimize(std::vector<double>& q, Value value, Grad gradient, Project project,
                      const CgOptions& opts) {
    using detail::dot;
    using detail::inf_norm;
    CgOutcome out;
    project(q);
    if (q.empty()) {
        out.f = value(q);
        out.converged = true;
        return out;
    }
    std::vector<double> g, g_new, d(q.size()), qt, q_prev, g_prev;
    double f = value(q);
    gradient(q, g);
    for (std::size_t i = 0; i < q.size(); ++i) d[i] = -g[i];
    double alpha_prev = 0.0;

    auto line_search = [&](const std::vector<double>& dir, double slope, double alpha0, double& f_out,
                           double& alpha_out) {
        double alpha = alpha0;
        for (int bt = 0; bt < 60; ++bt) {
            qt = q;
            for (std::size_t i = 0; i < q.size(); ++i) qt[i] += alpha * dir[i];
            project(qt);
            double ft = value(qt);
            if (ft <= f + 1e-4 * alpha * slope) {
                f_out = ft;
                alpha_out = alpha;
                return true;
            }
            alpha *= 0.5;
        }
        return false;
    };

    long it = 0;
    for (; it < opts.max_iters; ++it) {
        if (inf_norm(g) < opts.tol) {
            out.converged = true;
            break;
        }
        double slope = dot(g, d);
        if (slope >= 0.0) {
            for (std::size_t i = 0; i < q.size(); ++i) d[i] = -g[i];
            slope = -dot(g, g);
        }
        double alpha0;
        if (!q_prev.empty()) {
            double ss = 0.0, sy = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                double s = q[i] - q_prev[i];
                ss += s * s;
                sy += s * (g[i] - g_prev[i]);
            }
            alpha0 = (sy > 0.0) ? std::clamp(ss / sy, 1e-12, 1e6) : std::max(alpha_prev, 1e-6);
        } else {
            alpha0 = 0.25 / (inf_norm(d) + 1e-30);
        }
        double f_trial = 0.0, alpha = 0.0;
        bool ok = line_search(d, slope, alpha0, f_trial, alpha);
        if (!ok) {
            for (std::size_t i = 0; i < q.size(); ++i) d[i] = -g[i];
            slope = -dot(g, g);
            ok = line_search(d, slope, alpha0, f_trial, alpha);
            if (!ok) break;  // stationary at line-search resolution
        }
        q_prev = q;
        g_prev = g;
        q = qt;
        f = f_trial;
        alpha_prev = alpha;
        gradient(q, g_new);
        double beta = 0.0;
        if (it % 50 != 49) {
            double denom = dot(g, g);
            if (denom > 0.0) beta = std::max(0.0, (dot(g_new, g_new) - dot(g_new, g)) / denom);
        }
        for (std::size_t i = 0; i < q.size(); ++i) d[i] = -g_new[i] + beta * d[i];
        g.swap(g_new);
    }
    gradient(q, g);
    out.f = f;
    out.grad_norm = inf_norm(g);
    out.iters = it;
    if (out.grad_norm < opts.tol) out.converged = true;
    return out;
}

}  // namespace hourglass

#endif
