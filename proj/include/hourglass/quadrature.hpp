// Gauss-Legendre quadrature rules on [0,1].

#ifndef HOURGLASS_QUADRATURE_HPP
#define HOURGLASS_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hourglass {

/// A Gauss-Legendre rule mapped to the unit interval.
struct Quadrature {
    std::vector<double> nodes;    // in (0,1), symmetric
    std::vector<double> weights;  // sum to 1

    std::size_t size() const { return nodes.size(); }
};

/// Build the n-point Gauss-Legendre rule on [0,1]. Nodes are found by
/// Newton iteration on P_n starting from the Chebyshev estimates; the
/// iteration converges to machine precision in a handful of steps.
inline Quadrature gauss_legendre(int n) {
    if (n < 1 || n > 64) throw std::domain_error("gauss_legendre: order out of range [1,64]");
    Quadrature q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // root of P_n on [-1,1], Chebyshev initial guess
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // evaluate P_n(x) and P_n'(x) by the three-term recurrence
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        q.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * pp * pp);
    }
    return q;
}

}  // namespace hourglass

#endif
