// Discrete curves on the universal cover and the variational machinery:
// quadrature length, its exact gradient, a projected nonlinear-CG
// minimizer, point-to-point geodesic solves and per-class Tonelli
// minimization.
//
// A curve is a chart polyline; segment lengths are Gauss-Legendre
// quadratures of the metric speed along the straight chart interpolation.
// Closed curves of class m satisfy last = deck(first, m) as points of the
// cover (sigma compared modulo the full turn); the stored sigma lift of
// the last node fixes which longitude branch the polyline represents, and
// the minimizer keeps that branch by construction.

#ifndef HOURGLASS_CURVE_HPP
#define HOURGLASS_CURVE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hourglass/errors.hpp"
#include "hourglass/geodesic.hpp"
#include "hourglass/manifold.hpp"
#include "hourglass/optim.hpp"
#include "hourglass/quadrature.hpp"
#include "hourglass/rotation.hpp"

namespace hourglass {

/// Winding in the S^1 factor; the only homotopy of the manifold.
struct HomotopyClass {
    long long m = 0;
};

enum class BoundaryKind { ClosedInClass, FixedEnds };

constexpr double kMaxNodeSpacing = 0.5;  // refinement invariant, chart distance

/// Polyline lift of a curve with its boundary contract.
struct DiscreteCurve {
    std::vector<ChartPoint> nodes;
    BoundaryKind boundary = BoundaryKind::FixedEnds;
    long long class_m = 0;         // ClosedInClass only
    double sigma_holonomy = 0.0;   // ClosedInClass: sigma_last - sigma_first
    double length_cache = -1.0;    // advisory; refreshed by the solvers

    std::size_t size() const { return nodes.size(); }
};

inline double chart_distance(const ChartPoint& a, const ChartPoint& b) {
    return std::sqrt((b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y) +
                     (b.sigma - a.sigma) * (b.sigma - a.sigma));
}

/// Check the structural invariants of a curve; throws DomainError.
inline void validate_curve(const DiscreteCurve& c, const ManifoldParams& params) {
    if (c.nodes.size() < 2) throw DomainError("curve: needs at least two nodes");
    for (const ChartPoint& p : c.nodes)
        if (p.y * p.y > 1.0 + 1e-15) throw DomainError("curve: node with |y| > 1");
    for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i)
        if (chart_distance(c.nodes[i], c.nodes[i + 1]) >= kMaxNodeSpacing + 1e-9)
            throw DomainError("curve: node spacing violates the refinement invariant");
    if (c.boundary == BoundaryKind::ClosedInClass) {
        const ChartPoint& a = c.nodes.front();
        const ChartPoint& b = c.nodes.back();
        double scale = std::max(1.0, std::abs(static_cast<double>(c.class_m) * params.omega) * 2.0 * M_PI);
        if (std::abs(b.x - (a.x + static_cast<double>(c.class_m))) > 1e-12 * scale ||
            std::abs(b.y - a.y) > 1e-12)
            throw DomainError("curve: closed-in-class endpoint mismatch in (x, y)");
        double want = -2.0 * M_PI * static_cast<double>(c.class_m) * params.omega;
        if (std::abs(principal_angle((b.sigma - a.sigma) - want)) > 1e-11 * scale)
            throw DomainError("curve: closed-in-class endpoint mismatch in sigma (mod 2 pi)");
    }
}

namespace detail {

struct SpeedDerivs {
    double S;        // integrand value
    double dS_dy;    // w.r.t. the height at the quadrature node
    double dS_ddx;   // w.r.t. the segment increments
    double dS_ddy;
    double dS_dds;
};

inline SpeedDerivs speed_derivs(double y, double dx, double dy, double ds) {
    SpeedDerivs o{};
    const double c = 1.0 + y * y;
    const double r2 = 1.0 - y * y;
    if (r2 <= 0.0) {
        // pole-running segment (dy = 0 there by construction)
        double W = std::abs(dx);
        o.S = c * W;
        if (W > 0.0) {
            o.dS_ddx = c * (dx > 0 ? 1.0 : -1.0);
            o.dS_dy = 2.0 * y * W - c * y * ds * ds / W;
        }
        return o;
    }
    const double W2 = dx * dx + dy * dy / r2 + r2 * ds * ds;
    const double W = std::sqrt(W2);
    o.S = c * W;
    if (W < 1e-12) return o;  // metrically collapsed: treat as stationary
    o.dS_ddx = c * dx / W;
    o.dS_ddy = c * dy / (r2 * W);
    o.dS_dds = c * r2 * ds / W;
    o.dS_dy = 2.0 * y * W + c * y * (dy * dy / (r2 * r2) - ds * ds) / W;
    return o;
}

inline double segment_length(const ChartPoint& a, const ChartPoint& b, const Quadrature& q) {
    const double dx = b.x - a.x, dy = b.y - a.y, ds = b.sigma - a.sigma;
    if (dy == 0.0) return speed_derivs(a.y, dx, 0.0, ds).S;  // constant integrand, exact
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        double y = a.y + q.nodes[i] * dy;
        acc += q.weights[i] * speed_derivs(y, dx, dy, ds).S;
    }
    return acc;
}

// gradient of segment_length with respect to both endpoints
inline void segment_length_grad(const ChartPoint& a, const ChartPoint& b, const Quadrature& q,
                                std::array<double, 3>& ga, std::array<double, 3>& gb) {
    const double dx = b.x - a.x, dy = b.y - a.y, ds = b.sigma - a.sigma;
    ga = {0.0, 0.0, 0.0};
    gb = {0.0, 0.0, 0.0};
    if (dy == 0.0 && std::abs(a.y) >= 1.0) {
        // segment running exactly along a pole. The integrand there is
        // c |dx|; tilting an endpoint into the manifold activates the
        // meridian term, whose one-sided derivative c / (4 W (1-s)) [resp.
        // c / (4 W s)] survives the r2 -> 0 limit and opposes the
        // conformal pull. Without it a pole line would look falsely
        // non-stationary to the optimizer.
        const double c = 1.0 + a.y * a.y;
        const double W = std::abs(dx);
        if (W == 0.0) return;  // zero-length sigma slide: stationary
        double rigid = 2.0 * a.y * W - c * a.y * ds * ds / W;
        double tilt_a = 0.0, tilt_b = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            tilt_a += q.weights[i] * c / (4.0 * W * (1.0 - q.nodes[i]));
            tilt_b += q.weights[i] * c / (4.0 * W * q.nodes[i]);
        }
        double sgn = a.y > 0 ? 1.0 : -1.0;
        ga = {-c * (dx > 0 ? 1.0 : -1.0), 0.5 * rigid - sgn * tilt_a, 0.0};
        gb = {c * (dx > 0 ? 1.0 : -1.0), 0.5 * rigid - sgn * tilt_b, 0.0};
        return;
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double s = q.nodes[i], w = q.weights[i];
        SpeedDerivs d = speed_derivs(a.y + s * dy, dx, dy, ds);
        ga[0] -= w * d.dS_ddx;
        gb[0] += w * d.dS_ddx;
        ga[1] += w * ((1.0 - s) * d.dS_dy - d.dS_ddy);
        gb[1] += w * (s * d.dS_dy + d.dS_ddy);
        ga[2] -= w * d.dS_dds;
        gb[2] += w * d.dS_dds;
    }
}

}  // namespace detail

/// Metric length of the polyline (sum of per-segment quadratures).
inline double curve_length(const DiscreteCurve& c, const ManifoldParams& params = ManifoldParams{}) {
    Quadrature q = gauss_legendre(params.quadrature_points);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i)
        acc += detail::segment_length(c.nodes[i], c.nodes[i + 1], q);
    return acc;
}

/// Exact gradient of curve_length with respect to node chart coordinates.
/// Boundary conventions: fixed endpoints report zero rows; for a closed
/// curve the last node is slaved to the first (it moves rigidly with it),
/// so its contribution is folded into row zero and its own row is zero.
inline std::vector<std::array<double, 3>> length_gradient(const DiscreteCurve& c,
                                                          const ManifoldParams& params = ManifoldParams{}) {
    Quadrature q = gauss_legendre(params.quadrature_points);
    const std::size_t n = c.nodes.size();
    std::vector<std::array<double, 3>> g(n, {0.0, 0.0, 0.0});
    std::array<double, 3> ga, gb;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        detail::segment_length_grad(c.nodes[i], c.nodes[i + 1], q, ga, gb);
        for (int k = 0; k < 3; ++k) {
            g[i][k] += ga[k];
            g[i + 1][k] += gb[k];
        }
    }
    if (c.boundary == BoundaryKind::ClosedInClass) {
        for (int k = 0; k < 3; ++k) {
            g[0][k] += g[n - 1][k];
            g[n - 1][k] = 0.0;
        }
    } else {
        g[0] = {0.0, 0.0, 0.0};
        g[n - 1] = {0.0, 0.0, 0.0};
    }
    return g;
}

// ---------------------------------------------------------------------------
// minimization

struct MinimizeOptions {
    double tol = 1e-8;          // projected-gradient infinity norm target
    long max_iters = 100000;
    bool freeze_x = false;      // keep every x coordinate fixed (fiber problems)
    bool slice_free_ends = false;  // FixedEnds only: endpoints free in (y, sigma)
};

struct MinimizeOutcome {
    DiscreteCurve curve;
    double length = 0.0;
    double grad_norm = 0.0;
    long iters = 0;
    bool converged = false;
};

namespace detail {

struct CurveProblem {
    DiscreteCurve curve;
    ManifoldParams params;
    Quadrature quad;
    MinimizeOptions opts;
    std::vector<std::pair<int, int>> dof;  // (node, coord)

    explicit CurveProblem(const DiscreteCurve& seed, const MinimizeOptions& o, const ManifoldParams& p)
        : curve(seed), params(p), quad(gauss_legendre(p.quadrature_points)), opts(o) {
        const int n = static_cast<int>(curve.nodes.size());
        const bool closed = curve.boundary == BoundaryKind::ClosedInClass;
        int lo = closed ? 0 : 1;
        int hi = closed ? n - 2 : n - 2;
        for (int i = lo; i <= hi; ++i)
            for (int k = 0; k < 3; ++k) {
                if (k == 0 && opts.freeze_x) continue;
                dof.emplace_back(i, k);
            }
        if (!closed && opts.slice_free_ends)
            for (int i : {0, n - 1})
                for (int k : {1, 2}) dof.emplace_back(i, k);
    }

    void get(std::vector<double>& q) const {
        q.resize(dof.size());
        for (std::size_t j = 0; j < dof.size(); ++j) {
            const ChartPoint& p = curve.nodes[dof[j].first];
            q[j] = dof[j].second == 0 ? p.x : dof[j].second == 1 ? p.y : p.sigma;
        }
    }

    void set(const std::vector<double>& q) {
        for (std::size_t j = 0; j < dof.size(); ++j) {
            ChartPoint& p = curve.nodes[dof[j].first];
            double v = q[j];
            if (dof[j].second == 1) v = std::clamp(v, -1.0, 1.0);
            (dof[j].second == 0 ? p.x : dof[j].second == 1 ? p.y : p.sigma) = v;
        }
        if (curve.boundary == BoundaryKind::ClosedInClass) {
            ChartPoint& last = curve.nodes.back();
            const ChartPoint& first = curve.nodes.front();
            last.x = first.x + static_cast<double>(curve.class_m);
            last.y = first.y;
            last.sigma = first.sigma + curve.sigma_holonomy;
        }
    }

    double value() const { return curve_length(curve, params); }

    // gradient in DOF layout, with box projection at |y| = 1
    void gradient(std::vector<double>& g) const {
        auto full = length_gradient(curve, params);
        g.resize(dof.size());
        for (std::size_t j = 0; j < dof.size(); ++j) {
            const auto [i, k] = dof[j];
            double v = full[i][k];
            if (k == 1) {
                double y = curve.nodes[i].y;
                if ((y >= 1.0 && v < 0.0) || (y <= -1.0 && v > 0.0)) v = 0.0;
            }
            g[j] = v;
        }
    }
};

inline MinimizeOutcome minimize_curve_impl(const DiscreteCurve& seed, const MinimizeOptions& opts,
                                           const ManifoldParams& params) {
    CurveProblem prob(seed, opts, params);
    std::vector<double> q;
    prob.get(q);
    CgOptions copts;
    copts.tol = opts.tol;
    copts.max_iters = opts.max_iters;
    CgOutcome got = cg_minimize(
        q,
        [&](const std::vector<double>& qq) {
            prob.set(qq);
            return prob.value();
        },
        [&](const std::vector<double>& qq, std::vector<double>& g) {
            prob.set(qq);
            prob.gradient(g);
        },
        [&](std::vector<double>& qq) {
            for (std::size_t j = 0; j < prob.dof.size(); ++j)
                if (prob.dof[j].second == 1) qq[j] = std::clamp(qq[j], -1.0, 1.0);
        },
        copts);
    prob.set(q);
    MinimizeOutcome out;
    out.curve = prob.curve;
    out.length = got.f;
    out.grad_norm = got.grad_norm;
    out.iters = got.iters;
    out.converged = got.converged;
    out.curve.length_cache = out.length;
    return out;
}

}  // namespace detail

/// Minimize length over the curve's free nodes; returns the best iterate
/// together with its projected gradient norm and a convergence flag.
inline MinimizeOutcome minimize_curve(const DiscreteCurve& seed, const MinimizeOptions& opts,
                                      const ManifoldParams& params = ManifoldParams{}) {
    return detail::minimize_curve_impl(seed, opts, params);
}

// ---------------------------------------------------------------------------
// construction helpers

namespace detail {

// resample a polyline to n nodes, keeping the endpoints bit-exact. The
// default measure is chart arclength; with `metric` given, the measure is
// the metric arclength blended with a sliver of chart arclength, so
// meridian legs come out graded towards the poles (where the integrand
// peaks) while degenerate pole plateaus still retain nodes.
inline std::vector<ChartPoint> resample_polyline(const std::vector<ChartPoint>& nodes, int n,
                                                 const ManifoldParams* metric = nullptr) {
    Quadrature quad = metric ? gauss_legendre(metric->quadrature_points) : Quadrature{};
    std::vector<double> cum(nodes.size(), 0.0);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        double w = chart_distance(nodes[i - 1], nodes[i]);
        if (metric) w = segment_length(nodes[i - 1], nodes[i], quad) + 0.05 * w;
        cum[i] = cum[i - 1] + std::max(w, 1e-300);
    }
    double total = cum.back();
    std::vector<ChartPoint> out;
    out.reserve(n);
    out.push_back(nodes.front());
    std::size_t seg = 0;
    for (int j = 1; j < n - 1; ++j) {
        double target = total * j / (n - 1);
        while (seg + 2 < nodes.size() && cum[seg + 1] < target) ++seg;
        double f = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
        const ChartPoint& a = nodes[seg];
        const ChartPoint& b = nodes[seg + 1];
        out.push_back({a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), a.sigma + f * (b.sigma - a.sigma)});
    }
    out.push_back(nodes.back());
    return out;
}

// append a graded meridian arc (uniform in the polar angle) from y0 to y1
// at fixed x, sigma; the grading resolves the integrable pole singularity
inline void append_meridian(std::vector<ChartPoint>& nodes, double x, double sigma, double y0, double y1,
                            int steps) {
    double p0 = std::asin(std::clamp(y0, -1.0, 1.0));
    double p1 = std::asin(std::clamp(y1, -1.0, 1.0));
    for (int i = 1; i <= steps; ++i) {
        double p = p0 + (p1 - p0) * i / steps;
        nodes.push_back({x, std::sin(p), sigma});
    }
}

inline void append_linear(std::vector<ChartPoint>& nodes, const ChartPoint& to, int steps) {
    ChartPoint from = nodes.back();
    for (int i = 1; i <= steps; ++i) {
        double f = static_cast<double>(i) / steps;
        nodes.push_back(
            {from.x + f * (to.x - from.x), from.y + f * (to.y - from.y), from.sigma + f * (to.sigma - from.sigma)});
    }
}

inline int leg_steps(double chart_len, double target_spacing = 0.12) {
    return std::max(4, static_cast<int>(std::ceil(chart_len / target_spacing)));
}

}  // namespace detail

/// n-fold cover of a closed class-m curve: the curve continued through n
/// periods of its own holonomy. Length is exactly n times the base length.
inline DiscreteCurve n_cover(const DiscreteCurve& c, int n) {
    if (c.boundary != BoundaryKind::ClosedInClass) throw DomainError("n_cover: needs a closed-in-class curve");
    if (n < 1) throw DomainError("n_cover: n must be >= 1");
    DiscreteCurve out;
    out.boundary = BoundaryKind::ClosedInClass;
    out.class_m = c.class_m * n;
    out.sigma_holonomy = c.sigma_holonomy * n;
    out.nodes.reserve((c.nodes.size() - 1) * n + 1);
    for (int i = 0; i < n; ++i) {
        double shift_x = static_cast<double>(c.class_m) * i;
        double shift_s = c.sigma_holonomy * i;
        std::size_t start = (i == 0) ? 0 : 1;  // joints coincide
        for (std::size_t j = start; j < c.nodes.size(); ++j)
            out.nodes.push_back({c.nodes[j].x + shift_x, c.nodes[j].y, c.nodes[j].sigma + shift_s});
    }
    return out;
}

namespace detail {

inline bool lex_less(const ChartPoint& a, const ChartPoint& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.sigma < b.sigma;
}

// multi-start driver: screen every seed on a capped budget, then polish
// only the shortest survivor to the full tolerance
inline MinimizeOutcome screen_and_polish(const std::vector<DiscreteCurve>& seeds, const MinimizeOptions& opts,
                                         const ManifoldParams& params, int* tried = nullptr) {
    MinimizeOptions screen = opts;
    screen.max_iters = std::min<long>(opts.max_iters, 4000);
    std::optional<MinimizeOutcome> best;
    for (const DiscreteCurve& s : seeds) {
        MinimizeOutcome got = minimize_curve_impl(s, screen, params);
        if (tried) ++*tried;
        if (!best || got.length < best->length - 1e-10 ||
            (std::abs(got.length - best->length) <= 1e-10 &&
             lex_less(got.curve.nodes.front(), best->curve.nodes.front())))
            best = std::move(got);
    }
    if (!best->converged) *best = minimize_curve_impl(best->curve, opts, params);
    return *best;
}

}  // namespace detail

/// Fixed-endpoint geodesic between two cover points. Multi-seeded: the
/// straight chart line and the equator-routed path, each over the nearby
/// longitude branches. The projected descent is free to climb over a pole
/// (nodes may touch |y| = 1), so transpolar routes are reachable from
/// these seeds. The returned curve ends at q up to a full sigma turn
/// (the same point of the cover).
inline MinimizeOutcome geodesic_bvp_full(const ChartPoint& p, const ChartPoint& q, int n_nodes, double tol,
                                         const ManifoldParams& params = ManifoldParams{}) {
    if (n_nodes < 4) n_nodes = 4;
    MinimizeOptions opts;
    opts.tol = tol;
    if (p.x == q.x && p.y == q.y && p.sigma == q.sigma) {
        DiscreteCurve c;
        c.nodes = {p, q};
        c.boundary = BoundaryKind::FixedEnds;
        MinimizeOutcome out;
        out.curve = c;
        out.curve.length_cache = 0.0;
        out.converged = true;
        return out;
    }

    std::vector<DiscreteCurve> seeds;
    auto add = [&](std::vector<ChartPoint> raw) {
        DiscreteCurve c;
        c.nodes = detail::resample_polyline(raw, n_nodes, &params);
        c.boundary = BoundaryKind::FixedEnds;
        seeds.push_back(std::move(c));
    };
    double ds_raw = q.sigma - p.sigma;
    long long j0 = static_cast<long long>(std::llround(ds_raw / (2.0 * M_PI)));
    for (long long j : {j0, j0 - 1, j0 + 1}) {
        ChartPoint qq = q;
        qq.sigma = q.sigma - 2.0 * M_PI * static_cast<double>(j);
        {
            std::vector<ChartPoint> s{p};
            detail::append_linear(s, qq, detail::leg_steps(chart_distance(p, qq)));
            add(std::move(s));
        }
        {
            std::vector<ChartPoint> s{p};
            detail::append_meridian(s, p.x, p.sigma, p.y, 0.0, detail::leg_steps(std::abs(p.y) * 2.0));
            detail::append_linear(s, {qq.x, 0.0, qq.sigma},
                                  detail::leg_steps(std::hypot(qq.x - p.x, qq.sigma - p.sigma)));
            detail::append_meridian(s, qq.x, qq.sigma, 0.0, qq.y, detail::leg_steps(std::abs(qq.y) * 2.0));
            add(std::move(s));
        }
    }
    return detail::screen_and_polish(seeds, opts, params);
}

inline DiscreteCurve geodesic_bvp(const ChartPoint& p, const ChartPoint& q, int n_nodes, double tol,
                                  const ManifoldParams& params = ManifoldParams{}) {
    MinimizeOutcome out = geodesic_bvp_full(p, q, n_nodes, tol, params);
    if (!out.converged) throw ConvergenceError("geodesic_bvp: solver did not converge");
    return out.curve;
}

// ---------------------------------------------------------------------------
// Tonelli minimization per homotopy class

struct TonelliResult {
    DiscreteCurve curve;
    double length = 0.0;
    double grad_norm = 0.0;
    int seeds_tried = 0;
    bool converged = false;
};

namespace detail {

inline DiscreteCurve close_in_class(std::vector<ChartPoint> nodes, long long m, int n_nodes) {
    DiscreteCurve c;
    c.nodes = resample_polyline(nodes, n_nodes);
    c.boundary = BoundaryKind::ClosedInClass;
    c.class_m = m;
    c.sigma_holonomy = c.nodes.back().sigma - c.nodes.front().sigma;
    return c;
}

// the flat equator loop whose longitude drifts by theta_k = -2 pi m omega + 2 pi k
inline DiscreteCurve chord_seed(long long m, long long k, int n_nodes, const ManifoldParams& params) {
    double theta = -2.0 * M_PI * static_cast<double>(m) * params.omega + 2.0 * M_PI * static_cast<double>(k);
    std::vector<ChartPoint> nodes{{0.0, 0.0, 0.0}};
    append_linear(nodes, {static_cast<double>(m), 0.0, theta},
                  leg_steps(std::hypot(static_cast<double>(m), theta)));
    return close_in_class(std::move(nodes), m, n_nodes);
}

// x advances through the class while y dips over the north pole; the
// longitude constraint is absorbed on the degenerate parallel
inline DiscreteCurve pole_route_seed(long long m, int n_nodes, const ManifoldParams& params) {
    double dm = static_cast<double>(m);
    double twist = -2.0 * M_PI * dm * params.omega;
    std::vector<ChartPoint> nodes{{0.0, 0.0, 0.0}};
    int climb = leg_steps(2.2);
    for (int i = 1; i <= climb; ++i) {
        double f = static_cast<double>(i) / climb;
        nodes.push_back({0.25 * dm * f, std::sin(f * M_PI / 2.0), 0.0});
    }
    append_linear(nodes, {0.75 * dm, 1.0, twist}, leg_steps(std::hypot(0.5 * dm, twist)));
    int drop = leg_steps(2.2);
    for (int i = 1; i <= drop; ++i) {
        double f = static_cast<double>(i) / drop;
        nodes.push_back({0.75 * dm + 0.25 * dm * f, std::cos(f * M_PI / 2.0), twist});
    }
    nodes.back() = {dm, 0.0, twist};
    return close_in_class(std::move(nodes), m, n_nodes);
}

// constant-height loop close to the pole, longitude branch k
inline DiscreteCurve high_loop_seed(long long m, long long k, int n_nodes, const ManifoldParams& params) {
    double theta = -2.0 * M_PI * static_cast<double>(m) * params.omega + 2.0 * M_PI * static_cast<double>(k);
    std::vector<ChartPoint> nodes{{0.0, 0.98, 0.0}};
    append_linear(nodes, {static_cast<double>(m), 0.98, theta},
                  leg_steps(std::hypot(static_cast<double>(m), theta)));
    return close_in_class(std::move(nodes), m, n_nodes);
}

}  // namespace detail

/// Minimize length in homotopy class m over closed curves with n_nodes
/// nodes, restarting from several structurally distinct seeds (equator
/// loops over the nearby longitude branches, a pole route, a near-pole
/// loop, plus the caller's seed when given). Shortest result wins; exact
/// ties resolve to the lexicographically smallest first node.
inline TonelliResult tonelli_minimize(HomotopyClass cls, int n_nodes, double tol,
                                      const ManifoldParams& params = ManifoldParams{},
                                      const DiscreteCurve* user_seed = nullptr) {
    const long long m = cls.m;
    if (!(tol > 0.0)) throw DomainError("tonelli_minimize: tol must be positive");
    long long need = 16 * std::max<long long>(1, std::llabs(m));
    if (n_nodes < need) throw DomainError("tonelli_minimize: n_nodes must be at least 16 max(1,|m|)");

    TonelliResult res;
    if (m == 0) {
        DiscreteCurve c;
        c.nodes.assign(static_cast<std::size_t>(n_nodes), ChartPoint{0.0, 0.0, 0.0});
        c.boundary = BoundaryKind::ClosedInClass;
        c.class_m = 0;
        c.sigma_holonomy = 0.0;
        c.length_cache = 0.0;
        res.curve = std::move(c);
        res.converged = true;
        res.seeds_tried = 1;
        return res;
    }

    long long k_star = std::llround(static_cast<double>(m) * params.omega);
    std::vector<DiscreteCurve> seeds;
    for (long long k : {k_star, k_star - 1, k_star + 1})
        seeds.push_back(detail::chord_seed(m, k, n_nodes, params));
    seeds.push_back(detail::pole_route_seed(m, n_nodes, params));
    seeds.push_back(detail::high_loop_seed(m, k_star, n_nodes, params));
    if (user_seed) seeds.push_back(*user_seed);

    MinimizeOptions opts;
    opts.tol = tol;
    MinimizeOutcome best = detail::screen_and_polish(seeds, opts, params, &res.seeds_tried);
    res.curve = best.curve;
    res.length = best.length;
    res.grad_norm = best.grad_norm;
    res.converged = best.converged;
    return res;
}

}  // namespace hourglass

#endif
