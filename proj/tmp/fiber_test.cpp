#include "hourglass/fiber.hpp"
#include <cstdio>
#include <chrono>
using namespace hourglass;
static double now() { using namespace std::chrono; return duration<double>(steady_clock::now().time_since_epoch()).count(); }
int main() {
    ManifoldParams mf = ManifoldParams::make(omega_federer());
    bool cv;
    double pp = fiber_distance(1.0, 0.0, -1.0, 0.0, mf, 1e-7, &cv);
    std::printf("pole-pole: %.9f (3pi/2 %.9f) conv %d\n", pp, 1.5*M_PI, (int)cv);
    double eq = fiber_distance(0.0, 0.0, 0.0, M_PI, mf, 1e-7, &cv);
    std::printf("equator:   %.9f (pi   %.9f) conv %d\n", eq, M_PI, (int)cv);
    double np = fiber_distance(0.9, 0.0, 0.9, M_PI, mf, 1e-7, &cv);
    std::printf("near-pole: %.9f conv %d\n", np, (int)cv);
    double t0 = now();
    double B = compute_fiber_diameter(mf);
    std::printf("B = %.9f  (3pi/2 = %.9f)  %.1fs\n", B, 1.5*M_PI, now()-t0);
    return 0;
}
