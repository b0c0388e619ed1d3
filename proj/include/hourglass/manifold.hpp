// The twisted product R x S^2 with the hourglass metric
//
//     ds = (1 + y^2) (dx^2 + dy^2 + |dz|^2)^{1/2},
//
// quotiented by (x+1, y, z) ~ (x, y, z e^{2 pi i omega}).  Points are kept
// in longitude coordinates (x, y, sigma) with z = sqrt(1-y^2) e^{i sigma};
// near the poles states carry an ambient (y, z1, z2) representation since
// the sigma chart degenerates there.

#ifndef HOURGLASS_MANIFOLD_HPP
#define HOURGLASS_MANIFOLD_HPP

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "hourglass/errors.hpp"
#include "hourglass/rotation.hpp"

namespace hourglass {

constexpr double kDefaultPoleSwitch = 0.9;

/// Rotation number omega = 1/(2 pi): the classical choice for the gluing.
inline double omega_federer() { return 1.0 / (2.0 * M_PI); }

/// Golden-mean rotation number (sqrt(5)-1)/2, a preset with the slowest
/// rational approximations and hence the cleanest return times.
inline double omega_golden() { return (std::sqrt(5.0) - 1.0) / 2.0; }

/// Global parameters of the manifold.
struct ManifoldParams {
    double omega = 1.0 / (2.0 * M_PI);
    double pole_switch = kDefaultPoleSwitch;  // |y| above which the sigma chart is abandoned
    int quadrature_points = 5;                // Gauss-Legendre points per curve segment
    double fiber_diameter_B = std::numeric_limits<double>::quiet_NaN();  // cached, see fiber.hpp
    bool omega_rational_flag = false;         // diagnostic: omega rational at machine precision

    static ManifoldParams make(double omega_value) {
        ManifoldParams p;
        p.omega = omega_value;
        if (!std::isfinite(omega_value)) throw DomainError("ManifoldParams: omega must be finite");
        p.omega_rational_flag = rational_to_machine_precision(omega_value);
        return p;
    }
};

/// A point of the universal cover in longitude coordinates. x is the cover
/// coordinate (unwrapped), y in [-1,1], sigma a continuous lift of the
/// longitude. At the poles (|y| = 1) sigma carries no geometric content.
struct ChartPoint {
    double x = 0.0;
    double y = 0.0;
    double sigma = 0.0;

    bool at_pole() const { return std::abs(y) >= 1.0; }
};

/// Ambient representation of a sphere position/velocity, used near poles:
/// u = (y, z1, z2) with |u| = 1 and u . du = 0.
struct AmbientState {
    std::array<double, 3> u{0.0, 1.0, 0.0};
    std::array<double, 3> du{0.0, 0.0, 0.0};
};

inline std::array<double, 2> chart_to_z(const ChartPoint& p) {
    double r = std::sqrt(std::max(0.0, 1.0 - p.y * p.y));
    return {r * std::cos(p.sigma), r * std::sin(p.sigma)};
}

/// Tangent vector at a chart point, components per unit parameter time.
struct TangentState {
    ChartPoint point;
    double vx = 0.0;
    double vy = 0.0;
    double vsigma = 0.0;
    std::optional<AmbientState> ambient;  // required when |y| > pole_switch

    bool valid_chart() const { return std::abs(point.y) < 1.0; }
};

/// Ambient sphere representation of the (y, sigma) part of a state.
inline AmbientState to_ambient(const TangentState& s) {
    const double y = s.point.y;
    const double r2 = 1.0 - y * y;
    const double r = std::sqrt(std::max(0.0, r2));
    const double c = std::cos(s.point.sigma), sn = std::sin(s.point.sigma);
    AmbientState a;
    a.u = {y, r * c, r * sn};
    // dz = d(sqrt(1-y^2)) e^{i sigma} + sqrt(1-y^2) i e^{i sigma} dsigma
    double dr = (r > 0.0) ? -y * s.vy / r : 0.0;
    a.du = {s.vy, dr * c - r * sn * s.vsigma, dr * sn + r * c * s.vsigma};
    return a;
}

/// Chart state from an ambient one; sigma_hint anchors the lift branch.
inline TangentState from_ambient(double x, double vx, const AmbientState& a, double sigma_hint) {
    TangentState s;
    s.point.x = x;
    s.point.y = a.u[0];
    double raw = std::atan2(a.u[2], a.u[1]);
    s.point.sigma = sigma_hint + principal_angle(raw - sigma_hint);
    s.vx = vx;
    s.vy = a.du[0];
    const double r2 = std::max(1e-300, 1.0 - a.u[0] * a.u[0]);
    s.vsigma = (a.u[1] * a.du[2] - a.u[2] * a.du[1]) / r2;
    s.ambient = a;
    return s;
}

/// Chart speed (1+y^2) sqrt(vx^2 + vy^2/(1-y^2) + (1-y^2) vsigma^2).
/// At an exact pole the meridian term is defined only for vy = 0 (the
/// sigma term vanishes with the parallel); otherwise the chart is
/// genuinely degenerate and the caller must supply an ambient state.
inline double speed_chart(double y, double vx, double vy, double vsigma) {
    const double c = 1.0 + y * y;
    const double r2 = 1.0 - y * y;
    if (r2 <= 0.0) {
        if (vy == 0.0) return c * std::abs(vx);
        throw PoleChartError("speed: sigma chart degenerate at |y| = 1 with vy != 0");
    }
    return c * std::sqrt(vx * vx + vy * vy / r2 + r2 * vsigma * vsigma);
}

/// Metric speed ds/dt of a tangent state.
inline double speed(const TangentState& s) {
    if (s.ambient) {
        const AmbientState& a = *s.ambient;
        const double y = a.u[0];
        double q = s.vx * s.vx + a.du[0] * a.du[0] + a.du[1] * a.du[1] + a.du[2] * a.du[2];
        return (1.0 + y * y) * std::sqrt(q);
    }
    if (s.point.at_pole() && s.vy != 0.0)
        throw PoleChartError("speed: pole point without ambient representation");
    return speed_chart(s.point.y, s.vx, s.vy, s.vsigma);
}

/// m-th deck transformation: (x, y, sigma) -> (x + m, y, sigma - 2 pi m omega),
/// realizing the identification (x+1, y, z) ~ (x, y, z e^{2 pi i omega}).
inline ChartPoint deck_transform(const ChartPoint& p, long long m, const ManifoldParams& params) {
    ChartPoint q = p;
    q.x += static_cast<double>(m);
    q.sigma -= 2.0 * M_PI * static_cast<double>(m) * params.omega;
    return q;
}

/// Length of the parallel at height y: 2 pi (1+y^2) sqrt(1-y^2).
inline double parallel_circumference(double y) {
    if (std::abs(y) > 1.0) throw DomainError("parallel_circumference: |y| > 1");
    return 2.0 * M_PI * (1.0 + y * y) * std::sqrt(std::max(0.0, 1.0 - y * y));
}

/// The hourglass profile f(u) = (1+u) sqrt(1-u) with u = y^2 (parallel
/// circumference over 2 pi) and its slope indicator
/// sqrt(1-u) (1/2 - 3u/2), which carries the sign of f' and stays finite
/// at the pole. f peaks at u = 1/3.
inline std::pair<double, double> hourglass_profile(double u) {
    if (u < 0.0 || u > 1.0) throw DomainError("hourglass_profile: u outside [0,1]");
    const double root = std::sqrt(1.0 - u);
    return {(1.0 + u) * root, root * (0.5 - 1.5 * u)};
}

/// Arclength of a constant-sigma meridian from the equator up to height y:
/// int_0^y (1+t^2)/sqrt(1-t^2) dt = (3/2) asin(y) - (y/2) sqrt(1-y^2).
inline double meridian_length_from_equator(double y) {
    if (std::abs(y) > 1.0) throw DomainError("meridian_length_from_equator: |y| > 1");
    return std::abs(1.5 * std::asin(y) - 0.5 * y * std::sqrt(std::max(0.0, 1.0 - y * y)));
}

}  // namespace hourglass

#endif
