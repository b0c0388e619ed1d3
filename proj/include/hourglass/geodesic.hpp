// Euler-Lagrange flow of L2 = g(v, v) on the universal cover, with the
// Noether invariants (E, P, L) monitored along trajectories.
//
// In the sigma chart, L2 = A(y) vx^2 + B(y) vy^2 + C(y) vsigma^2 with
//   A = (1+y^2)^2,  B = (1+y^2)^2/(1-y^2),  C = (1+y^2)^2 (1-y^2),
// and the equations of motion reduce to
//   ax     = -(A'/A) vy vx
//   asigma = -(C'/C) vy vsigma
//   ay     = (A' vx^2 + C' vsigma^2 - B' vy^2) / (2B).
// Near the poles the flow continues in ambient sphere coordinates
// u = (y, z1, z2), |u| = 1, where the constrained Euler-Lagrange system of
// L2 = phi(u)^2 (vx^2 + |du|^2), phi = 1 + y^2, reads
//   ax = -2 (grad phi . du) vx / phi
//   au = -2 (grad phi . du) du / phi
//        + ((vx^2 + |du|^2)/phi) (grad phi - (grad phi . u) u) - |du|^2 u.
// The integrator is an adaptive embedded Runge-Kutta 5(4) pair with PI
// step-size control; chart switches are located with the dense output and
// refined to land on the threshold within 1e-10.

#ifndef HOURGLASS_GEODESIC_HPP
#define HOURGLASS_GEODESIC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "hourglass/errors.hpp"
#include "hourglass/manifold.hpp"

namespace hourglass {

/// The Noether triple: energy E (the metric speed), momentum
/// P = (1+y^2)^2 vx / E from x-translation, and angular momentum
/// L = (1+y^2)^2 (1-y^2) vsigma / E from rotation about the poles.
struct Invariants {
    double E = 0.0;
    double P = 0.0;
    double L = 0.0;
};

/// The quadratic Lagrangian L2 = g(v, v) = speed^2.
inline double lagrangian_L2(const TangentState& s) {
    double v = speed(s);
    return v * v;
}

/// Conserved quantities of a state. A zero-velocity state maps to the
/// all-zero triple (P and L are defined through E > 0 only).
inline Invariants conserved_quantities(const TangentState& s) {
    Invariants inv;
    inv.E = speed(s);
    if (inv.E == 0.0) return inv;
    const double y = s.point.y;
    const double c2 = (1.0 + y * y) * (1.0 + y * y);
    inv.P = c2 * s.vx / inv.E;
    if (s.ambient) {
        const AmbientState& a = *s.ambient;
        inv.L = c2 * (a.u[1] * a.du[2] - a.u[2] * a.du[1]) / inv.E;
    } else {
        inv.L = c2 * (1.0 - y * y) * s.vsigma / inv.E;
    }
    return inv;
}

/// |dy/dt| at height y on the invariant set (E, P, L), solved from
///   E^2/(1+y^2)^2 = vx^2 + vy^2/(1-y^2) + (1-y^2) vsigma^2
/// with vx, vsigma eliminated through P and L. Values within
/// 1e-12 E^2 below zero clamp to zero (turning points).
inline double ydot_from_invariants(double y, const Invariants& inv) {
    if (std::abs(y) >= 1.0) throw DomainError("ydot_from_invariants: requires |y| < 1");
    if (!(inv.E > 0.0)) throw DomainError("ydot_from_invariants: requires E > 0");
    const double c = 1.0 + y * y;
    const double c2 = c * c;
    const double E2 = inv.E * inv.E;
    double v2 = (1.0 - y * y) * (E2 / c2) * (1.0 - inv.P * inv.P / c2) - inv.L * inv.L * E2 / (c2 * c2);
    const double clamp = 1e-12 * E2;
    if (v2 < 0.0) {
        if (v2 < -clamp)
            throw InconsistentInvariantsError("ydot_from_invariants: state unreachable at this height");
        v2 = 0.0;
    }
    return std::sqrt(v2);
}

/// One integration sample.
struct TrajectorySample {
    double t = 0.0;
    TangentState state;
};

/// An integrated orbit with the worst relative drift of each invariant.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    double tolerance_used = 0.0;
    Invariants invariant_drift;  // max |Q(t)-Q(0)| / max(|Q(0)|, 1) per component

    const TangentState& front() const { return samples.front().state; }
    const TangentState& back() const { return samples.back().state; }
    double duration() const { return samples.empty() ? 0.0 : samples.back().t - samples.front().t; }
};

namespace detail {

// ---- right-hand sides ----------------------------------------------------

inline void rhs_chart(const double* u, double* f) {
    const double y = u[1], vx = u[3], vy = u[4], vs = u[5];
    const double c = 1.0 + y * y;
    const double r2 = 1.0 - y * y;
    f[0] = vx;
    f[1] = vy;
    f[2] = vs;
    f[3] = -4.0 * y * vy * vx / c;
    f[4] = (2.0 * y * r2 * vx * vx + y * (1.0 - 3.0 * y * y) * r2 * vs * vs -
            y * (3.0 - y * y) * vy * vy / r2) /
           c;
    f[5] = -2.0 * y * (1.0 - 3.0 * y * y) * vy * vs / (c * r2);
}

inline void rhs_ambient(const double* u, double* f) {
    // u = (x, y, z1, z2, vx, vy, vz1, vz2)
    const double y = u[1];
    const double phi = 1.0 + y * y;
    const double* q = u + 1;
    const double* v = u + 5;
    const double vx = u[4];
    const double gdotv = 2.0 * y * v[0];          // grad phi . du
    const double vv = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    const double common = (vx * vx + vv) / phi;
    f[0] = vx;
    f[1] = v[0];
    f[2] = v[1];
    f[3] = v[2];
    f[4] = -2.0 * gdotv * vx / phi;
    // grad phi - (grad phi . u) u = 2y (1 - y^2, -y z1, -y z2)
    f[5] = -2.0 * gdotv * v[0] / phi + common * 2.0 * y * (1.0 - y * y) - vv * q[0];
    f[6] = -2.0 * gdotv * v[1] / phi - common * 2.0 * y * y * q[1] - vv * q[1];
    f[7] = -2.0 * gdotv * v[2] / phi - common * 2.0 * y * y * q[2] - vv * q[2];
}

// ---- Dormand-Prince 5(4) pair with dense output ---------------------------

struct Rk45Step {
    static constexpr int kMaxDim = 8;
    int dim = 6;
    void (*rhs)(const double*, double*) = nullptr;
    double k[7][kMaxDim];
    double u0[kMaxDim], u1[kMaxDim];
    double err = 0.0;
    double h = 0.0;

    // attempt one step from u with size h; fills u1, err (scaled RMS)
    void attempt(const double* u, double hh, double tol) {
        static const double a21 = 1.0 / 5;
        static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
        static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static const double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
        static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        h = hh;
        double w[kMaxDim];
        for (int i = 0; i < dim; ++i) u0[i] = u[i];
        rhs(u, k[0]);
        for (int i = 0; i < dim; ++i) w[i] = u[i] + h * a21 * k[0][i];
        rhs(w, k[1]);
        for (int i = 0; i < dim; ++i) w[i] = u[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
        rhs(w, k[2]);
        for (int i = 0; i < dim; ++i) w[i] = u[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
        rhs(w, k[3]);
        for (int i = 0; i < dim; ++i)
            w[i] = u[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
        rhs(w, k[4]);
        for (int i = 0; i < dim; ++i)
            w[i] = u[i] +
                   h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] + a65 * k[4][i]);
        rhs(w, k[5]);
        for (int i = 0; i < dim; ++i)
            u1[i] = u[i] +
                    h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i]);
        rhs(u1, k[6]);
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            double e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                            e7 * k[6][i]);
            double sc = tol + tol * std::max(std::abs(u0[i]), std::abs(u1[i]));
            double r = e / sc;
            s += r * r;
        }
        err = std::sqrt(s / dim);
    }

    // dense output at fraction theta in [0,1] of the accepted step
    void dense(double theta, double* out) const {
        static const double d1 = -12715105075.0 / 11282082432.0;
        static const double d3 = 87487479700.0 / 32700410799.0;
        static const double d4 = -10690763975.0 / 1880347072.0;
        static const double d5 = 701980252875.0 / 199316789632.0;
        static const double d6 = -1453857185.0 / 822651844.0;
        static const double d7 = 69997945.0 / 29380423.0;
        for (int i = 0; i < dim; ++i) {
            double ydiff = u1[i] - u0[i];
            double r1 = u0[i];
            double r2 = ydiff;
            double r3 = h * k[0][i] - ydiff;
            double r4 = ydiff - h * k[6][i] - r3;
            double r5 = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                             d6 * k[5][i] + d7 * k[6][i]);
            out[i] = r1 + theta * (r2 + (1.0 - theta) * (r3 + theta * (r4 + (1.0 - theta) * r5)));
        }
    }
};

inline void pack_chart(const TangentState& s, double* u) {
    u[0] = s.point.x;
    u[1] = s.point.y;
    u[2] = s.point.sigma;
    u[3] = s.vx;
    u[4] = s.vy;
    u[5] = s.vsigma;
}

inline TangentState unpack_chart(const double* u) {
    TangentState s;
    s.point = {u[0], u[1], u[2]};
    s.vx = u[3];
    s.vy = u[4];
    s.vsigma = u[5];
    return s;
}

inline void pack_ambient(const TangentState& s, double* u) {
    AmbientState a = s.ambient ? *s.ambient : to_ambient(s);
    u[0] = s.point.x;
    u[1] = a.u[0];
    u[2] = a.u[1];
    u[3] = a.u[2];
    u[4] = s.vx;
    u[5] = a.du[0];
    u[6] = a.du[1];
    u[7] = a.du[2];
}

inline TangentState unpack_ambient(const double* u, double sigma_hint) {
    AmbientState a;
    a.u = {u[1], u[2], u[3]};
    a.du = {u[5], u[6], u[7]};
    return from_ambient(u[0], u[4], a, sigma_hint);
}

// renormalize the sphere constraint after an ambient step
inline void project_sphere(double* u) {
    double n = std::sqrt(u[1] * u[1] + u[2] * u[2] + u[3] * u[3]);
    if (n > 0.0) {
        u[1] /= n;
        u[2] /= n;
        u[3] /= n;
    }
    double dot = u[1] * u[5] + u[2] * u[6] + u[3] * u[7];
    u[5] -= dot * u[1];
    u[6] -= dot * u[2];
    u[7] -= dot * u[3];
}

}  // namespace detail

/// Integrate the geodesic through `initial` for parameter time t_end >= 0.
/// `tol` is the per-step local error tolerance of the embedded pair.
/// Samples are recorded at every accepted step, including exact
/// chart-switch landings.
inline Trajectory integrate_geodesic(const TangentState& initial, double t_end, double tol,
                                     const ManifoldParams& params = ManifoldParams{}) {
    if (!(tol > 0.0)) throw DomainError("integrate_geodesic: tol must be positive");
    if (t_end < 0.0) throw DomainError("integrate_geodesic: t_end must be nonnegative");

    Trajectory traj;
    traj.tolerance_used = tol;

    const double y_hi = params.pole_switch;          // abandon sigma chart above
    const double y_lo = params.pole_switch - 0.02;   // re-adopt below (hysteresis)

    TangentState s0 = initial;
    bool ambient_mode = std::abs(s0.point.y) > y_hi;
    if (ambient_mode && !s0.ambient) s0.ambient = to_ambient(s0);
    traj.samples.push_back({0.0, s0});
    if (t_end == 0.0) return traj;

    const Invariants inv0 = conserved_quantities(s0);
    auto scale = [](double q) { return std::max(std::abs(q), 1.0); };
    auto track_drift = [&](const TangentState& s) {
        Invariants q = conserved_quantities(s);
        traj.invariant_drift.E = std::max(traj.invariant_drift.E, std::abs(q.E - inv0.E) / scale(inv0.E));
        traj.invariant_drift.P = std::max(traj.invariant_drift.P, std::abs(q.P - inv0.P) / scale(inv0.P));
        traj.invariant_drift.L = std::max(traj.invariant_drift.L, std::abs(q.L - inv0.L) / scale(inv0.L));
    };

    detail::Rk45Step step;
    double u[detail::Rk45Step::kMaxDim];
    double t = 0.0;
    double sigma_hint = s0.point.sigma;

    auto load = [&](const TangentState& s) {
        if (ambient_mode) {
            step.dim = 8;
            step.rhs = detail::rhs_ambient;
            detail::pack_ambient(s, u);
        } else {
            step.dim = 6;
            step.rhs = detail::rhs_chart;
            detail::pack_chart(s, u);
        }
    };
    auto current_state = [&](const double* w) {
        return ambient_mode ? detail::unpack_ambient(w, sigma_hint) : detail::unpack_chart(w);
    };

    load(s0);
    double h = std::min(0.01, t_end);
    double err_old = 1.0;
    const int kMaxSteps = 50'000'000;

    for (int nstep = 0; nstep < kMaxSteps && t < t_end; ++nstep) {
        h = std::min(h, t_end - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw IntegrationError("integrate_geodesic: step size underflow");
        step.attempt(u, h, tol);
        if (step.err > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(step.err, -0.2));
            continue;
        }

        // chart-switch event inside the accepted step?
        double y_new = step.u1[1];
        bool want_switch = ambient_mode ? (std::abs(y_new) < y_lo) : (std::abs(y_new) > y_hi);
        if (want_switch) {
            const double thr = ambient_mode ? y_lo : y_hi;
            // bracket the first |y| = thr crossing with the dense output,
            // then refine with genuine sub-steps so the landing is exact
            double lo = 0.0, hi = 1.0;
            double probe[detail::Rk45Step::kMaxDim];
            for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
                double mid = 0.5 * (lo + hi);
                step.dense(mid, probe);
                bool crossed = ambient_mode ? (std::abs(probe[1]) < thr) : (std::abs(probe[1]) > thr);
                (crossed ? hi : lo) = mid;
            }
            double h_cross = hi * h;
            detail::Rk45Step sub;
            sub.dim = step.dim;
            sub.rhs = step.rhs;
            for (int polish = 0; polish < 8; ++polish) {
                sub.attempt(u, h_cross, tol);
                double dy = std::abs(sub.u1[1]) - thr;
                if (std::abs(dy) < 1e-12) break;
                // Newton on y(t) using the end-point derivative
                double yd = sub.k[6][1] * (sub.u1[1] > 0 ? 1.0 : -1.0);
                if (yd == 0.0) break;
                h_cross -= dy / yd;
                h_cross = std::clamp(h_cross, 0.0, h);
            }
            sub.attempt(u, h_cross, tol);
            if (std::abs(std::abs(sub.u1[1]) - thr) > 1e-9)
                throw IntegrationError("integrate_geodesic: chart switch localization failed");
            for (int i = 0; i < sub.dim; ++i) u[i] = sub.u1[i];
            if (ambient_mode) detail::project_sphere(u);
            t += h_cross;
            TangentState sw = current_state(u);
            sigma_hint = sw.point.sigma;
            track_drift(sw);
            traj.samples.push_back({t, sw});
            ambient_mode = !ambient_mode;
            load(sw);
            // keep the suggested step from before the event
            continue;
        }

        // accept
        for (int i = 0; i < step.dim; ++i) u[i] = step.u1[i];
        if (ambient_mode) detail::project_sphere(u);
        t += h;
        TangentState sn = current_state(u);
        sigma_hint = sn.point.sigma;
        track_drift(sn);
        traj.samples.push_back({t, sn});
        double fac = 0.9 * std::pow(std::max(step.err, 1e-10), -0.7 / 5.0) *
                     std::pow(std::max(err_old, 1e-10), 0.4 / 5.0);
        h *= std::clamp(fac, 0.2, 5.0);
        err_old = std::max(step.err, 1e-10);
    }
    if (t < t_end) throw IntegrationError("integrate_geodesic: step budget exhausted");
    return traj;
}

/// Max deviation of L2 from its initial value along a trajectory. L2 is a
/// first integral of its own flow, which is exactly why the length (L1) and
/// energy (L2) functionals share geodesics; this measures that claim.
inline double reparametrization_check(const Trajectory& traj) {
    if (traj.samples.empty()) return 0.0;
    double l0 = lagrangian_L2(traj.samples.front().state);
    double worst = 0.0;
    for (const auto& smp : traj.samples) worst = std::max(worst, std::abs(lagrangian_L2(smp.state) - l0));
    return worst;
}

}  // namespace hourglass

#endif
