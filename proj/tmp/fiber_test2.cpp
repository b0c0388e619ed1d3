#include "hourglass/fiber.hpp"
#include <cstdio>
using namespace hourglass;
int main() {
    setvbuf(stdout, nullptr, _IONBF, 0);
    ManifoldParams mf = ManifoldParams::make(omega_federer());
    bool cv;
    double pp = fiber_distance(1.0, 0.0, -1.0, 0.0, mf, 1e-7, &cv);
    std::printf("pole-pole: %.9f conv %d\n", pp, (int)cv);
    static const double ys[] = {-1.0, -0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9, 1.0};
    static const double dsg[] = {0.0, M_PI/2.0, M_PI};
    double best = 0;
    for (double ya : ys) for (double yb : ys) { if (yb < ya) continue;
      for (double ds : dsg) { if (ya == yb && ds == 0.0) continue;
        bool c2; double d = fiber_distance(ya, 0.0, yb, ds, mf, 1e-7, &c2);
        if (!c2) std::printf("UNCONV (%5.2f, %5.2f, %.2f): %.6f\n", ya, yb, ds, d);
        if (d > best) best = d;
      }}
    std::printf("max = %.9f\n", best);
    return 0;
}
