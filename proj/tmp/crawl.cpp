#include "hourglass/fiber.hpp"
#include <cstdio>
using namespace hourglass;
int main() {
    setvbuf(stdout, nullptr, _IONBF, 0);
    const Quadrature quad = gauss_legendre(5);
    double psi_a = 0.0, sigma_a = 0.0;
    double psi_b = std::asin(0.6), sigma_b = M_PI/2;
    const int n_nodes = 49;
    std::vector<double> q(2 * (n_nodes - 2));
    for (int i = 1; i + 1 < n_nodes; ++i) {
        double f = double(i) / (n_nodes - 1);
        q[2*(i-1)] = psi_a + f * (psi_b - psi_a);
        q[2*(i-1)+1] = sigma_a + f * (sigma_b - sigma_a);
    }
    for (int chunk = 0; chunk < 12; ++chunk) {
        CgOptions o; o.tol = 1e-7; o.max_iters = 2000;
        auto got = cg_minimize(q,
            [&](const std::vector<double>& qq){ return detail::fiber_polyline_length(qq, psi_a, sigma_a, psi_b, sigma_b, quad); },
            [&](const std::vector<double>& qq, std::vector<double>& g){ detail::fiber_polyline_grad(qq, psi_a, sigma_a, psi_b, sigma_b, quad, g); },
            [](std::vector<double>&){}, o);
        std::printf("chunk %2d: f %.12f grad %.3e iters %ld conv %d\n", chunk, got.f, got.grad_norm, got.iters, (int)got.converged);
        if (got.converged) break;
    }
    return 0;
}
