#include "hourglass/fiber.hpp"
#include <cstdio>
#include <chrono>
using namespace hourglass;
static double now() { using namespace std::chrono; return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count(); }
int main() {
    ManifoldParams mf = ManifoldParams::make(omega_federer());
    std::printf("params made\n"); std::fflush(stdout);
    const Quadrature quad = gauss_legendre(5);
    double y_a = -1.0, sigma_a = 0.0, y_b = -1.0, sigma_b = M_PI/2;
    const double psi_a = std::asin(y_a), psi_b0 = std::asin(y_b);
    const int n_nodes = 49;
    struct Rep { double psi, sigma; };
    std::vector<Rep> reps;
    for (int j = -1; j <= 1; ++j) {
        double sj = sigma_b + 2.0 * M_PI * j;
        reps.push_back({psi_b0, sj});
        reps.push_back({M_PI - psi_b0, sj + M_PI});
        reps.push_back({-M_PI - psi_b0, sj + M_PI});
    }
    for (const Rep& r : reps) {
        std::vector<double> q(2 * (n_nodes - 2));
        for (int i = 1; i + 1 < n_nodes; ++i) {
            double f = static_cast<double>(i) / (n_nodes - 1);
            q[2*(i-1)] = psi_a + f * (r.psi - psi_a);
            q[2*(i-1)+1] = sigma_a + f * (r.sigma - sigma_a);
        }
        CgOptions opts; opts.tol = 1e-7; opts.max_iters = 20000;
        double t0 = now();
        CgOutcome got = cg_minimize(q,
            [&](const std::vector<double>& qq){ return detail::fiber_polyline_length(qq, psi_a, sigma_a, r.psi, r.sigma, quad); },
            [&](const std::vector<double>& qq, std::vector<double>& g){ detail::fiber_polyline_grad(qq, psi_a, sigma_a, r.psi, r.sigma, quad, g); },
            [](std::vector<double>&){}, opts);
        std::printf("rep (%8.4f, %8.4f): f %.9f grad %.2e iters %5ld conv %d  %.2fs\n",
                    r.psi, r.sigma, got.f, got.grad_norm, got.iters, (int)got.converged, now()-t0);
        std::fflush(stdout);
    }
    return 0;
}
