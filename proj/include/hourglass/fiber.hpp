// Distances inside one fiber {x = const} and the fiber diameter B.
//
// The fiber is the sphere with metric (1+y^2) (dy^2 + |dz|^2). Paths are
// optimized in the polar-angle chart psi = asin(y), where the speed
//     (1 + sin^2 psi) sqrt(vpsi^2 + cos^2 psi vsigma^2)
// is smooth through the poles: a transpolar route is just a straight
// line continuing past |psi| = pi/2 (the longitude picks up the fold).

#ifndef HOURGLASS_FIBER_HPP
#define HOURGLASS_FIBER_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "hourglass/errors.hpp"
#include "hourglass/manifold.hpp"
#include "hourglass/optim.hpp"
#include "hourglass/quadrature.hpp"

namespace hourglass {

namespace detail {

struct FiberSpeedDerivs {
    double S, dS_dpsi, dS_ddpsi, dS_ddsigma;
};

inline FiberSpeedDerivs fiber_speed_derivs(double psi, double dpsi, double dsig) {
    FiberSpeedDerivs o{};
    const double sn = std::sin(psi), cs = std::cos(psi);
    const double c = 1.0 + sn * sn;
    const double W2 = dpsi * dpsi + cs * cs * dsig * dsig;
    const double W = std::sqrt(W2);
    o.S = c * W;
    if (W < 1e-12) return o;  // metrically collapsed: treat as stationary
    o.dS_dpsi = sn * cs * (2.0 * W - c * dsig * dsig / W);
    o.dS_ddpsi = c * dpsi / W;
    o.dS_ddsigma = c * cs * cs * dsig / W;
    return o;
}

inline double fiber_polyline_length(const std::vector<double>& q, double psi_a, double sig_a, double psi_b,
                                    double sig_b, const Quadrature& quad) {
    const std::size_t n_int = q.size() / 2;
    double len = 0.0;
    double p0 = psi_a, s0 = sig_a;
    for (std::size_t i = 0; i <= n_int; ++i) {
        double p1 = (i < n_int) ? q[2 * i] : psi_b;
        double s1 = (i < n_int) ? q[2 * i + 1] : sig_b;
        double dp = p1 - p0, dsg = s1 - s0;
        for (std::size_t k = 0; k < quad.size(); ++k)
            len += quad.weights[k] * fiber_speed_derivs(p0 + quad.nodes[k] * dp, dp, dsg).S;
        p0 = p1;
        s0 = s1;
    }
    return len;
}

inline void fiber_polyline_grad(const std::vector<double>& q, double psi_a, double sig_a, double psi_b,
                                double sig_b, const Quadrature& quad, std::vector<double>& g) {
    const std::size_t n_int = q.size() / 2;
    g.assign(q.size(), 0.0);
    double p0 = psi_a, s0 = sig_a;
    for (std::size_t i = 0; i <= n_int; ++i) {
        double p1 = (i < n_int) ? q[2 * i] : psi_b;
        double s1 = (i < n_int) ? q[2 * i + 1] : sig_b;
        double dp = p1 - p0, dsg = s1 - s0;
        for (std::size_t k = 0; k < quad.size(); ++k) {
            double s = quad.nodes[k], w = quad.weights[k];
            FiberSpeedDerivs d = fiber_speed_derivs(p0 + s * dp, dp, dsg);
            if (i > 0) {  // left endpoint is q[2(i-1)..]
                g[2 * (i - 1)] += w * ((1.0 - s) * d.dS_dpsi - d.dS_ddpsi);
                g[2 * (i - 1) + 1] += w * (-d.dS_ddsigma);
            }
            if (i < n_int) {
                g[2 * i] += w * (s * d.dS_dpsi + d.dS_ddpsi);
                g[2 * i + 1] += w * d.dS_ddsigma;
            }
        }
        p0 = p1;
        s0 = s1;
    }
}

}  // namespace detail

/// Geodesic distance between two points of one fiber (paths constrained
/// to the fiber). Points are (y, sigma) on the sphere; seeds cover the
/// direct, wrapped and transpolar representations of the target. The
/// gradient tolerance governs stationarity of the node distribution; the
/// distance itself settles several orders of magnitude tighter.
inline double fiber_distance(double y_a, double sigma_a, double y_b, double sigma_b,
                             const ManifoldParams& params = ManifoldParams{}, double tol = 1e-5,
                             bool* converged_out = nullptr) {
    if (std::abs(y_a) > 1.0 || std::abs(y_b) > 1.0) throw DomainError("fiber_distance: |y| > 1");
    const Quadrature quad = gauss_legendre(params.quadrature_points);
    const double psi_a = std::asin(y_a);
    const double psi_b0 = std::asin(y_b);
    const bool a_pole = std::abs(y_a) >= 1.0, b_pole = std::abs(y_b) >= 1.0;
    const int n_nodes = 33;

    struct Rep {
        double psi, sigma;
    };
    std::vector<Rep> reps;
    if (b_pole) {
        // longitude is arbitrary at a pole: no twist is needed
        reps.push_back({psi_b0, a_pole ? 0.0 : sigma_a});
    } else {
        for (int j = -1; j <= 1; ++j) {
            double sj = sigma_b + 2.0 * M_PI * j;
            reps.push_back({psi_b0, sj});                // direct
            reps.push_back({M_PI - psi_b0, sj + M_PI});  // over the north pole
            reps.push_back({-M_PI - psi_b0, sj + M_PI}); // over the south pole
        }
    }

    auto solve_rep = [&](const Rep& r, double sa, std::vector<double>& q, long iters) {
        CgOptions opts;
        opts.tol = tol;
        opts.max_iters = iters;
        return cg_minimize(
            q,
            [&](const std::vector<double>& qq) {
                return detail::fiber_polyline_length(qq, psi_a, sa, r.psi, r.sigma, quad);
            },
            [&](const std::vector<double>& qq, std::vector<double>& g) {
                detail::fiber_polyline_grad(qq, psi_a, sa, r.psi, r.sigma, quad, g);
            },
            [](std::vector<double>&) {}, opts);
    };

    // screen every representation cheaply, then polish only the winner
    double best = std::numeric_limits<double>::infinity();
    bool best_conv = false;
    Rep best_rep{};
    double best_sa = sigma_a;
    std::vector<double> best_q;
    for (const Rep& r : reps) {
        double sa = a_pole ? r.sigma : sigma_a;
        std::vector<double> q(2 * (n_nodes - 2));
        for (int i = 1; i + 1 < n_nodes; ++i) {
            double f = static_cast<double>(i) / (n_nodes - 1);
            q[2 * (i - 1)] = psi_a + f * (r.psi - psi_a);
            q[2 * (i - 1) + 1] = sa + f * (r.sigma - sa);
        }
        CgOutcome got = solve_rep(r, sa, q, 1500);
        if (got.f < best) {
            best = got.f;
            best_conv = got.converged;
            best_rep = r;
            best_sa = sa;
            best_q = std::move(q);
        }
    }
    if (!best_conv) {
        CgOutcome got = solve_rep(best_rep, best_sa, best_q, 8000);
        best = got.f;
        best_conv = got.converged;
    }
    if (converged_out) *converged_out = best_conv;
    return best;
}

/// The fiber diameter B = max over sampled point pairs of the
/// fiber-internal distance. Realized by the pole pair (a full meridian,
/// length 3 pi / 2); the sampled maximization confirms it rather than
/// assuming it. Bounds: the equator antipode pair forces B >= pi, the
/// meridian upper bound forces B <= 3 pi / 2. The solve realizing the
/// maximum must converge; shorter pairs cannot move the maximum and only
/// their values enter.
inline double compute_fiber_diameter(const ManifoldParams& params = ManifoldParams{}, double tol = 1e-5) {
    static const double ys[] = {-1.0, -0.9, -0.5, 0.0, 0.5, 0.9, 1.0};
    static const double dsigmas[] = {0.0, M_PI / 2.0, M_PI};
    double best = 0.0;
    bool best_conv = false;
    for (double ya : ys)
        for (double yb : ys) {
            if (yb < ya) continue;
            for (double ds : dsigmas) {
                if (ya == yb && ds == 0.0) continue;
                bool conv = false;
                double d = fiber_distance(ya, 0.0, yb, ds, params, tol, &conv);
                if (d > best) {
                    best = d;
                    best_conv = conv;
                }
            }
        }
    if (!best_conv) throw ConvergenceError("compute_fiber_diameter: the realizing pair did not converge");
    if (!(best > 0.0) || best > 1.5 * M_PI + 1e-6)
        throw ConvergenceError("compute_fiber_diameter: result outside (0, 3 pi / 2]");
    return best;
}

/// Copy of params with the fiber diameter computed and cached.
inline ManifoldParams with_fiber_diameter(const ManifoldParams& params, double tol = 1e-5) {
    ManifoldParams p = params;
    if (!(p.fiber_diameter_B > 0.0)) p.fiber_diameter_B = compute_fiber_diameter(params, tol);
    return p;
}

}  // namespace hourglass

#endif
