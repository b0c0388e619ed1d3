// Numerical case against periodic minimizers being globally minimizing:
// covers of per-class minimizers get strictly shortened once the gluing
// rotation nearly returns, the oscillation budget confines excursions
// from the equator, rearrangement and crossing clamps shorten off-equator
// bands, rotating orbits lose to equator competitors, and the free-slice
// limit construction recovers the straight equator lines.

#ifndef HOURGLASS_AUDIT_HPP
#define HOURGLASS_AUDIT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <vector>

#include "hourglass/curve.hpp"
#include "hourglass/errors.hpp"
#include "hourglass/fiber.hpp"
#include "hourglass/geodesic.hpp"
#include "hourglass/manifold.hpp"
#include "hourglass/rotation.hpp"

namespace hourglass {

/// Flat-cylinder geodesic distance between an equator point and its m-th
/// deck translate: theta is the principal representative of 2 pi m omega,
/// the length is sqrt(m^2 + theta^2). Strictly greater than m whenever
/// theta != 0.
struct ChordResult {
    double length = 0.0;
    double theta = 0.0;
};

inline ChordResult equator_chord_length(long long m, double omega) {
    ChordResult r;
    r.theta = principal_angle(2.0 * M_PI * static_cast<double>(m) * omega);
    r.length = std::hypot(static_cast<double>(m), r.theta);
    return r;
}

/// Near-return times of the gluing rotation: continued-fraction
/// convergent denominators n of m omega, in convergent order (so the
/// twist |theta_{nm}| is strictly decreasing along the list).
struct ReturnTimes {
    std::vector<std::pair<std::int64_t, double>> rows;  // (n, |theta_{n m}|)
    bool omega_rational_diagnostic = false;
};

inline ReturnTimes best_return_times(long long m, double omega, int count,
                                     std::int64_t denominator_cap = 1000000) {
    if (count < 1) throw DomainError("best_return_times: count must be >= 1");
    ReturnTimes out;
    double alpha = static_cast<double>(m) * omega;
    auto conv = continued_fraction_convergents(alpha, denominator_cap);
    std::int64_t last_q = 0;
    for (const Convergent& c : conv) {
        if (c.q == last_q) continue;
        last_q = c.q;
        double theta = principal_angle(2.0 * M_PI * static_cast<double>(c.q) * alpha);
        out.rows.emplace_back(c.q, std::abs(theta));
        if (static_cast<int>(out.rows.size()) == count) break;
    }
    if (static_cast<int>(out.rows.size()) < count &&
        rational_to_machine_precision(alpha, denominator_cap))
        out.omega_rational_diagnostic = true;
    return out;
}

namespace detail {

// the comparison path: meridian down to the equator, the flat chord with
// the principal twist, meridian back up -- built as a closed class-(n m)
// polyline so it doubles as a minimization seed
inline DiscreteCurve trial_path(long long m, int n, double y0, const ManifoldParams& params) {
    const double nm = static_cast<double>(m) * n;
    const double theta = principal_angle(-2.0 * M_PI * nm * params.omega);
    std::vector<ChartPoint> nodes{{0.0, y0, 0.0}};
    if (y0 != 0.0) append_meridian(nodes, 0.0, 0.0, y0, 0.0, leg_steps(meridian_length_from_equator(y0)));
    append_linear(nodes, {nm, 0.0, theta}, leg_steps(std::hypot(nm, theta)));
    if (y0 != 0.0) append_meridian(nodes, nm, theta, 0.0, y0, leg_steps(meridian_length_from_equator(y0)));
    DiscreteCurve c;
    c.nodes = resample_polyline(nodes, std::max<int>(48, static_cast<int>(nodes.size())), &params);
    c.boundary = BoundaryKind::ClosedInClass;
    c.class_m = m * n;
    c.sigma_holonomy = c.nodes.back().sigma - c.nodes.front().sigma;
    return c;
}

}  // namespace detail

/// Length of the meridian-equator-meridian comparison path from
/// (0, y0, sigma0) to its (n m)-th deck translate. Checks the global
/// budget: the result never exceeds n m + 2 B.
inline double trial_path_bound(long long m, int n, double y0, const ManifoldParams& params) {
    if (std::abs(y0) > 1.0) throw DomainError("trial_path_bound: |y0| > 1");
    double B = params.fiber_diameter_B;
    if (!(B > 0.0)) B = compute_fiber_diameter(params);
    DiscreteCurve c = detail::trial_path(m, n, y0, params);
    double len = curve_length(c, params);
    double cap = static_cast<double>(m) * n + 2.0 * B + 1e-9;
    if (len > cap) throw Error("trial_path_bound: comparison path exceeded the n m + 2B budget");
    return len;
}

struct AuditRow {
    int n = 0;
    double cover_length = 0.0;
    double minimized_length = 0.0;
    double trial_bound = 0.0;
    double shortening = 0.0;  // n * tonelli_length - minimized_length
    double theta = 0.0;       // principal twist of the class n m
    bool converged = true;
};

/// Per-class shortening audit. The verdict is the least n whose cover of
/// the per-class minimizer was strictly shortened.
struct AuditReport {
    long long class_m = 0;
    double omega = 0.0;
    double tol = 0.0;
    double tonelli_length = 0.0;
    double fiber_B = 0.0;
    bool fiber_internal_bound = true;  // B measured inside one fiber (see manifold notes)
    std::vector<AuditRow> rows;
    std::vector<DiscreteCurve> minimized_curves;  // parallel to rows
    std::optional<int> verdict;
};

/// Run the cover-shortening audit for homotopy class m over the given
/// cover multiplicities. Each row minimizes the class-(n m) curve seeded
/// from both the n-cover of the class minimizer and the comparison path;
/// the shorter relaxed result is recorded. Rows are independent and run
/// on `jobs` threads.
inline AuditReport audit_tonelli(long long m, std::vector<int> n_list, double tol,
                                 const ManifoldParams& params_in, int jobs = 1) {
    if (m == 0) throw DomainError("audit_tonelli: class m must be nonzero");
    if (!(tol > 0.0)) throw DomainError("audit_tonelli: tol must be positive");
    ManifoldParams params = with_fiber_diameter(params_in);

    std::sort(n_list.begin(), n_list.end());
    n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
    if (!n_list.empty() && n_list.front() < 1) throw DomainError("audit_tonelli: n must be >= 1");

    AuditReport rep;
    rep.class_m = m;
    rep.omega = params.omega;
    rep.tol = tol;
    rep.fiber_B = params.fiber_diameter_B;

    int base_nodes = static_cast<int>(std::max<long long>(48, 16 * std::llabs(m)));
    TonelliResult base = tonelli_minimize({m}, base_nodes, tol, params);
    rep.tonelli_length = base.length;

    auto run_row = [&](int n) {
        AuditRow row;
        row.n = n;
        DiscreteCurve cover = n_cover(base.curve, n);
        row.cover_length = curve_length(cover, params);
        DiscreteCurve trial = detail::trial_path(m, n, base.curve.nodes.front().y, params);
        row.trial_bound = curve_length(trial, params);
        row.theta = principal_angle(2.0 * M_PI * static_cast<double>(m) * n * params.omega);

        // seeds: the cover itself, the comparison path, and the flat
        // equator chord of the composite class (the straight line the
        // comparison path relaxes to; seeding it directly keeps rows
        // convergent when the class minimizer sits on a pole)
        long long nm = m * n;
        int row_nodes = static_cast<int>(std::min<long long>(20000, std::max<long long>(48, 16 * std::llabs(nm))));
        DiscreteCurve chord =
            detail::chord_seed(nm, std::llround(static_cast<double>(nm) * params.omega), row_nodes, params);

        MinimizeOptions opts;
        opts.tol = tol;
        opts.max_iters = 60000;
        MinimizeOutcome best = detail::screen_and_polish({cover, trial, chord}, opts, params);
        row.minimized_length = best.length;
        row.converged = best.converged;
        row.shortening = n * rep.tonelli_length - row.minimized_length;
        return std::make_pair(row, best.curve);
    };

    if (jobs > 1) {
        std::vector<std::future<std::pair<AuditRow, DiscreteCurve>>> futs;
        futs.reserve(n_list.size());
        for (int n : n_list)
            futs.push_back(std::async(std::launch::async, run_row, n));
        for (auto& f : futs) {
            auto [row, curve] = f.get();
            rep.rows.push_back(row);
            rep.minimized_curves.push_back(std::move(curve));
        }
    } else {
        for (int n : n_list) {
            auto [row, curve] = run_row(n);
            rep.rows.push_back(row);
            rep.minimized_curves.push_back(std::move(curve));
        }
    }
    for (const AuditRow& row : rep.rows)
        if (row.converged && row.shortening > 10.0 * tol) {
            rep.verdict = row.n;
            break;
        }
    return rep;
}

/// Default cover list: small multiplicities plus the best return times.
inline std::vector<int> default_audit_n_list(long long m, double omega, int n_small = 10,
                                             int n_returns = 5, int n_cap = 1000) {
    std::vector<int> ns;
    for (int n = 1; n <= n_small; ++n) ns.push_back(n);
    for (const auto& [n, theta] : best_return_times(m, omega, n_returns).rows)
        if (n <= n_cap) ns.push_back(static_cast<int>(n));
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    return ns;
}

// ---------------------------------------------------------------------------
// band rearrangement and crossing clamps

/// Rearrangement of a curve confined to the band delta <= y <= sqrt(3)/3
/// onto the parallel y = delta (longitudes kept). Inside the band every
/// metric coefficient is monotone in y, so the image is never longer.
inline DiscreteCurve rearrange_flatten(const DiscreteCurve& c, double delta) {
    if (!(delta > 0.0)) throw DomainError("rearrange_flatten: delta must be positive");
    const double band_top = std::sqrt(3.0) / 3.0;
    for (const ChartPoint& p : c.nodes)
        if (p.y < delta - 1e-12 || p.y > band_top + 1e-12)
            throw DomainError("rearrange_flatten: node outside the band [delta, sqrt(3)/3]");
    if (std::abs(c.nodes.front().y - delta) > 1e-9 || std::abs(c.nodes.back().y - delta) > 1e-9)
        throw DomainError("rearrange_flatten: endpoints must sit on y = delta");
    DiscreteCurve out = c;
    for (ChartPoint& p : out.nodes) p.y = delta;
    out.length_cache = -1.0;
    return out;
}

/// Parameter-time measure of {|y| >= delta} for the curve re-parametrized
/// proportionally to arclength, and the oscillation budget 2 B / delta^2.
struct OscillationRecord {
    double delta = 0.0;
    double measure = 0.0;
    double bound = 0.0;
};

inline OscillationRecord oscillation_measure(const DiscreteCurve& c, double delta,
                                             const ManifoldParams& params) {
    if (!(delta > 0.0)) throw DomainError("oscillation_measure: delta must be positive");
    OscillationRecord rec;
    rec.delta = delta;
    double B = params.fiber_diameter_B;
    if (!(B > 0.0)) B = compute_fiber_diameter(params);
    rec.bound = 2.0 * B / (delta * delta);
    Quadrature quad = gauss_legendre(params.quadrature_points);
    // fraction of s in [0,1] with |y_a + s (y_b - y_a)| >= delta
    auto frac_above = [delta](double ya, double yb) {
        double lo = std::min(ya, yb), hi = std::max(ya, yb);
        double dy = hi - lo;
        auto seg_above = [&](double thr) {  // measure{s: y(s) >= thr}
            if (lo >= thr) return 1.0;
            if (hi <= thr) return 0.0;
            return (hi - thr) / dy;
        };
        auto seg_below = [&](double thr) {  // measure{s: y(s) <= thr}
            if (hi <= thr) return 1.0;
            if (lo >= thr) return 0.0;
            return (thr - lo) / dy;
        };
        return seg_above(delta) + seg_below(-delta);
    };
    for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i) {
        double len = detail::segment_length(c.nodes[i], c.nodes[i + 1], quad);
        rec.measure += len * frac_above(c.nodes[i].y, c.nodes[i + 1].y);
    }
    return rec;
}

/// Crossing clamp: for a curve with y = alpha at both ends and y >= alpha
/// between, does clamping y to alpha strictly shorten it? True unless the
/// curve already runs on the parallel.
inline bool crossing_flatten_check(const DiscreteCurve& c, double alpha,
                                   const ManifoldParams& params = ManifoldParams{}) {
    if (std::abs(c.nodes.front().y - alpha) > 1e-9 || std::abs(c.nodes.back().y - alpha) > 1e-9)
        throw DomainError("crossing_flatten_check: endpoints must sit on y = alpha");
    for (const ChartPoint& p : c.nodes)
        if (p.y < alpha - 1e-12) throw DomainError("crossing_flatten_check: y dips below alpha");
    DiscreteCurve clamped = c;
    for (ChartPoint& p : clamped.nodes) p.y = alpha;
    return curve_length(clamped, params) < curve_length(c, params);
}

// ---------------------------------------------------------------------------
// rotating orbits lose to equator competitors

struct NonzeroLReport {
    double sigma_star = 0.0;         // |L E| / (1 + delta^2)^2
    double min_abs_sigma_dot = 0.0;  // measured along the orbit inside the band
    bool sigma_star_ok = true;
    bool left_band = false;          // the orbit reached |y| = delta (confirms excursion)
    double left_band_time = 0.0;
    bool competitor_won = false;
    double win_time = 0.0;
    double orbit_length_at_win = 0.0;
    double competitor_length_at_win = 0.0;
};

/// Follow the orbit of the given invariants from the equator and race it
/// against the drop-run-climb competitor joining the same endpoints. A
/// nonzero angular momentum forces a winding rate of at least sigma_star,
/// and the competitor wins in finite time.
inline NonzeroLReport nonzero_L_exclusion(const Invariants& inv, double delta, bool sigma_star_check,
                                          const ManifoldParams& params = ManifoldParams{}) {
    if (!(inv.E > 0.0)) throw DomainError("nonzero_L_exclusion: requires E > 0");
    if (inv.L == 0.0) throw DomainError("nonzero_L_exclusion: requires L != 0 (planar orbits handled by the limit construction)");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("nonzero_L_exclusion: delta in (0,1)");

    NonzeroLReport rep;
    rep.sigma_star = std::abs(inv.L * inv.E) / std::pow(1.0 + delta * delta, 2);

    TangentState s0;
    s0.point = {0.0, 0.0, 0.0};
    s0.vx = inv.P * inv.E;
    s0.vy = ydot_from_invariants(0.0, inv);  // throws if the triple is not realizable on the equator
    s0.vsigma = inv.L * inv.E;

    double t_max = std::min(500.0, std::max(50.0, 20.0 * M_PI / rep.sigma_star));
    Trajectory traj = integrate_geodesic(s0, t_max, 1e-10, params);

    rep.min_abs_sigma_dot = std::numeric_limits<double>::infinity();
    for (const TrajectorySample& smp : traj.samples) {
        double t = smp.t;
        const TangentState& s = smp.state;
        if (std::abs(s.point.y) >= delta) {
            rep.left_band = true;
            rep.left_band_time = t;
            break;
        }
        rep.min_abs_sigma_dot = std::min(rep.min_abs_sigma_dot, std::abs(s.vsigma));
        if (!rep.competitor_won && t > 0.0) {
            double chord = std::hypot(s.point.x - s0.point.x, principal_angle(s.point.sigma - s0.point.sigma));
            double competitor = chord + meridian_length_from_equator(std::abs(s.point.y));
            double orbit_len = inv.E * t;
            if (competitor < orbit_len - 1e-12) {
                rep.competitor_won = true;
                rep.win_time = t;
                rep.orbit_length_at_win = orbit_len;
                rep.competitor_length_at_win = competitor;
            }
        }
    }
    if (sigma_star_check) rep.sigma_star_ok = rep.min_abs_sigma_dot >= rep.sigma_star - 1e-9;
    return rep;
}

// ---------------------------------------------------------------------------
// the limit construction: slice-to-slice minimizers converge to equator lines

struct LimitGeodesicResult {
    std::vector<double> window_distances;  // sup distance between consecutive window restrictions
    DiscreteCurve window;                  // final restriction to x in [-1, 1]
    double window_max_abs_y = 0.0;
    double window_vx_deviation = 0.0;      // max |dx/ds - 1| on the window, arclength parametrization
    double window_sigma = 0.0;             // the longitude the limit settled on
    bool converged = false;
};

namespace detail {

// restriction of an x-monotone curve to x in [-1,1], sampled on a fixed grid
inline std::vector<std::array<double, 2>> window_profile(const DiscreteCurve& c, int samples = 41) {
    std::vector<std::array<double, 2>> out;
    out.reserve(samples);
    for (int j = 0; j < samples; ++j) {
        double x = -1.0 + 2.0 * j / (samples - 1);
        std::size_t i = 0;
        while (i + 2 < c.nodes.size() && c.nodes[i + 1].x < x) ++i;
        double x0 = c.nodes[i].x, x1 = c.nodes[i + 1].x;
        double f = (x1 > x0) ? std::clamp((x - x0) / (x1 - x0), 0.0, 1.0) : 0.0;
        out.push_back({c.nodes[i].y + f * (c.nodes[i + 1].y - c.nodes[i].y),
                       c.nodes[i].sigma + f * (c.nodes[i + 1].sigma - c.nodes[i].sigma)});
    }
    return out;
}

}  // namespace detail

/// For n = 1..n_max minimize the free-boundary curve joining the slices
/// {x = -n} and {x = +n} (endpoints free on their slices), seeding each n
/// from the previous minimizer extended by straight runs. Reports the
/// Cauchy distances between consecutive restrictions to the window
/// x in [-1, 1]; the restrictions settle on an equator line y = 0,
/// sigma = const traversed at unit x-speed.
inline LimitGeodesicResult limit_geodesic(int n_max, double tol, const ManifoldParams& params,
                                          double seed_y = 0.4, double seed_sigma = 0.7) {
    if (n_max < 2) throw DomainError("limit_geodesic: n_max must be >= 2");
    LimitGeodesicResult res;
    MinimizeOptions opts;
    // the per-n solves must be tighter than the Cauchy threshold, or the
    // window distances plateau at the solver slack
    opts.tol = 0.01 * tol;
    opts.slice_free_ends = true;
    DiscreteCurve prev;
    std::vector<std::array<double, 2>> prev_window;
    for (int n = 1; n <= n_max; ++n) {
        std::vector<ChartPoint> raw;
        if (n == 1) {
            raw.push_back({-1.0, seed_y, seed_sigma});
            detail::append_linear(raw, {1.0, seed_y, seed_sigma}, 16);
        } else {
            raw.push_back({-static_cast<double>(n), prev.nodes.front().y, prev.nodes.front().sigma});
            detail::append_linear(raw, prev.nodes.front(), 8);
            raw.insert(raw.end(), prev.nodes.begin() + 1, prev.nodes.end());
            detail::append_linear(raw, {static_cast<double>(n), prev.nodes.back().y, prev.nodes.back().sigma}, 8);
        }
        DiscreteCurve seed;
        seed.nodes = detail::resample_polyline(raw, 32 * n + 1);
        seed.boundary = BoundaryKind::FixedEnds;
        MinimizeOutcome got = minimize_curve(seed, opts, params);
        prev = got.curve;
        auto win = detail::window_profile(prev);
        if (!prev_window.empty()) {
            double d = 0.0;
            for (std::size_t j = 0; j < win.size(); ++j)
                d = std::max(d, std::hypot(win[j][0] - prev_window[j][0],
                                           principal_angle(win[j][1] - prev_window[j][1])));
            res.window_distances.push_back(d);
        }
        prev_window = win;
    }
    res.converged = !res.window_distances.empty() && res.window_distances.back() < tol;

    // final window restriction and its kinematics
    DiscreteCurve win;
    win.boundary = BoundaryKind::FixedEnds;
    for (const auto& p : detail::window_profile(prev, 81)) win.nodes.push_back({0.0, p[0], p[1]});
    for (int j = 0; j < 81; ++j) win.nodes[j].x = -1.0 + 2.0 * j / 80.0;
    res.window = win;
    for (const auto& p : win.nodes) res.window_max_abs_y = std::max(res.window_max_abs_y, std::abs(p.y));
    res.window_sigma = win.nodes[40].sigma;
    Quadrature quad = gauss_legendre(params.quadrature_points);
    for (std::size_t i = 0; i + 1 < win.nodes.size(); ++i) {
        double ds = detail::segment_length(win.nodes[i], win.nodes[i + 1], quad);
        if (ds > 0.0)
            res.window_vx_deviation =
                std::max(res.window_vx_deviation, std::abs((win.nodes[i + 1].x - win.nodes[i].x) / ds - 1.0));
    }
    return res;
}

}  // namespace hourglass

#endif
