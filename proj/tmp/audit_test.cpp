#include "hourglass/audit.hpp"
#include <cstdio>
#include <chrono>
using namespace hourglass;
static double now() { using namespace std::chrono; return duration<double>(steady_clock::now().time_since_epoch()).count(); }
int main() {
    setvbuf(stdout, nullptr, _IONBF, 0);
    ManifoldParams mf = with_fiber_diameter(ManifoldParams::make(omega_federer()));
    std::printf("B = %.9f\n", mf.fiber_diameter_B);
    // chord + return times
    auto ch = equator_chord_length(6, mf.omega);
    std::printf("chord m=6: len %.6f theta %.6f\n", ch.length, ch.theta);
    auto rt = best_return_times(1, mf.omega, 5);
    std::printf("returns m=1 omega=1/2pi:");
    for (auto& [n, th] : rt.rows) std::printf(" (%lld, %.4f)", (long long)n, th);
    std::printf("\n");
    auto rtg = best_return_times(1, omega_golden(), 6);
    std::printf("returns golden:");
    for (auto& [n, th] : rtg.rows) std::printf(" %lld", (long long)n);
    std::printf("\n");
    // trial bound
    std::printf("trial m=1 n=1 y0=1: %.6f <= %.6f\n", trial_path_bound(1, 1, 1.0, mf), 1 + 2*mf.fiber_diameter_B);
    // audit m=1
    double t0 = now();
    auto rep = audit_tonelli(1, default_audit_n_list(1, mf.omega, 10, 5, 300), 1e-8, mf, 2);
    std::printf("audit m=1: T = %.9f, verdict = %d  (%.1fs)\n", rep.tonelli_length, rep.verdict ? *rep.verdict : -1, now()-t0);
    for (size_t i = 0; i < rep.rows.size(); ++i) {
        auto& r = rep.rows[i];
        std::printf("  n %3d cover %9.5f min %9.5f trial %9.5f short %9.5f theta %7.4f conv %d\n",
            r.n, r.cover_length, r.minimized_length, r.trial_bound, r.shortening, r.theta, (int)r.converged);
    }
    return 0;
}
