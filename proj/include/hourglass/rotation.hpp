// Circle-rotation helpers: principal angles and continued-fraction
// convergents of the rotation number.

#ifndef HOURGLASS_ROTATION_HPP
#define HOURGLASS_ROTATION_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace hourglass {

/// Reduce an angle to its principal representative in (-pi, pi].
/// Ties at the branch cut resolve to +pi.
inline double principal_angle(double a) {
    double r = std::remainder(a, 2.0 * M_PI);
    if (r <= -M_PI) r += 2.0 * M_PI;
    return r;
}

/// One continued-fraction convergent p/q of a real number.
struct Convergent {
    std::int64_t p = 0;
    std::int64_t q = 1;
    double error = 0.0;  // alpha - p/q
};

/// Continued-fraction convergents of alpha with denominators up to
/// `denominator_cap`. The expansion stops early when the remainder is
/// exhausted at machine precision (alpha rational as a double).
inline std::vector<Convergent> continued_fraction_convergents(double alpha,
                                                              std::int64_t denominator_cap = 1000000) {
    std::vector<Convergent> out;
    double x = alpha;
    std::int64_t p0 = 1, q0 = 0;  // p_{-1}/q_{-1}
    std::int64_t p1 = 0, q1 = 1;  // p_0/q_0 seeded below by a0
    double a0 = std::floor(x);
    p1 = static_cast<std::int64_t>(a0);
    x -= a0;
    out.push_back({p1, 1, alpha - static_cast<double>(p1)});
    for (int k = 0; k < 64; ++k) {
        if (x < 1e-15) break;  // remainder exhausted: rational to machine precision
        double inv = 1.0 / x;
        double af = std::floor(inv);
        if (af > 9.0e18) break;
        std::int64_t a = static_cast<std::int64_t>(af);
        x = inv - af;
        std::int64_t p2 = a * p1 + p0;
        std::int64_t q2 = a * q1 + q0;
        if (q2 > denominator_cap || q2 <= 0) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        out.push_back({p1, q1, alpha - static_cast<double>(p1) / static_cast<double>(q1)});
    }
    return out;
}

/// True when alpha is indistinguishable from a fraction with denominator
/// under the cap, i.e. its continued fraction terminates at double
/// precision. The gluing construction assumes an irrational rotation, so
/// callers surface this as a diagnostic.
inline bool rational_to_machine_precision(double alpha, std::int64_t denominator_cap = 1000000) {
    auto conv = continued_fraction_convergents(alpha, denominator_cap);
    if (conv.empty()) return true;
    const Convergent& last = conv.back();
    return std::abs(last.error) <= 4e-16 * std::max(1.0, std::abs(alpha));
}

}  // namespace hourglass

#endif
