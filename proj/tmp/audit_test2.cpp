#include "hourglass/audit.hpp"
#include <cstdio>
#include <chrono>
using namespace hourglass;
static double now() { using namespace std::chrono; return duration<double>(steady_clock::now().time_since_epoch()).count(); }
int main() {
    setvbuf(stdout, nullptr, _IONBF, 0);
    ManifoldParams mg = with_fiber_diameter(ManifoldParams::make(omega_golden()));
    ManifoldParams mf = with_fiber_diameter(ManifoldParams::make(omega_federer()));
    for (auto* P : {&mf, &mg}) for (long long m : {1LL, 2LL}) {
        double t0 = now();
        auto rep = audit_tonelli(m, default_audit_n_list(m, P->omega, 10, 5, 400), 1e-8, *P, 2);
        int bad = 0; for (auto& r : rep.rows) if (!r.converged) ++bad;
        double vshort = 0; if (rep.verdict) for (auto& r : rep.rows) if (r.n == *rep.verdict) vshort = r.shortening;
        std::printf("omega %.6f m=%lld: T %.9f verdict %d shortening %.4f unconv %d rows %zu (%.1fs)\n",
            P->omega, m, rep.tonelli_length, rep.verdict ? *rep.verdict : -1, vshort, bad, rep.rows.size(), now()-t0);
    }
    {
        double t0 = now();
        auto lim = limit_geodesic(8, 1e-6, mf);
        std::printf("limit: conv %d max|y| %.2e vxdev %.2e sigma %.4f dists:", (int)lim.converged, lim.window_max_abs_y, lim.window_vx_deviation, lim.window_sigma);
        for (double d : lim.window_distances) std::printf(" %.2e", d);
        std::printf("  (%.1fs)\n", now()-t0);
    }
    {
        Invariants inv{1.0, 0.0, 1.0};  // equatorial rotation
        auto rep = nonzero_L_exclusion(inv, 0.2, true, mf);
        std::printf("L!=0: sigma* %.4f min|sdot| %.4f ok %d left_band %d won %d at t %.3f (orbit %.3f vs comp %.3f)\n",
            rep.sigma_star, rep.min_abs_sigma_dot, (int)rep.sigma_star_ok, (int)rep.left_band, (int)rep.competitor_won,
            rep.win_time, rep.orbit_length_at_win, rep.competitor_length_at_win);
    }
    return 0;
}
