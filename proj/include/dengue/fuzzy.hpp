#pragma once

#include <vector>

namespace dengue {

struct Breakpoint {
    double x;
    double y;
    bool operator==(const Breakpoint &) const = default;
};

/// Piecewise-linear membership function. Linear between breakpoints,
/// constant (first/last y) outside them.
class PiecewiseLinearMF {
public:
    /// Neutral membership: 1 everywhere.
    PiecewiseLinearMF() : points_{{0.0, 1.0}, {1.0, 1.0}} {}
    /// Needs >= 2 breakpoints, strictly increasing finite x, y in [0,1].
    /// Throws ParameterError otherwise.
    explicit PiecewiseLinearMF(std::vector<Breakpoint> breakpoints);

    /// Membership degree of x. Throws ParameterError on NaN.
    [[nodiscard]] double evaluate(double x) const;
    [[nodiscard]] double operator()(double x) const { return evaluate(x); }

    [[nodiscard]] const std::vector<Breakpoint> &breakpoints() const noexcept { return points_; }

    bool operator==(const PiecewiseLinearMF &) const = default;

private:
    std::vector<Breakpoint> points_;
};

/// 0 below 15 °C and above 36 °C, 1 on [20, 30] °C.
[[nodiscard]] PiecewiseLinearMF temperature_mf_default();

/// Trapezoid [(40,0),(60,1),(90,1),(100,0.8)] on relative humidity (%).
[[nodiscard]] PiecewiseLinearMF humidity_mf_default();

inline constexpr double kDefaultRainShoulder = 0.25;

/// Full membership on [r_min, r_max] mm with linear shoulders of relative
/// width `shoulder` on each side. With r_min == 0 the left shoulder is
/// dropped (membership is 1 down to 0 mm).
/// Throws ParameterError unless 0 <= r_min < r_max and shoulder > 0.
[[nodiscard]] PiecewiseLinearMF rainfall_mf_from_cutoffs(double r_min, double r_max,
                                                         double shoulder = kDefaultRainShoulder);

/// Ramp from (0,0) to (c_max,1); saturates at 1 above c_max.
[[nodiscard]] PiecewiseLinearMF mobility_mf(double c_max);

/// The four factor memberships feeding the regional risk product.
struct MembershipSet {
    PiecewiseLinearMF rainfall;
    PiecewiseLinearMF temperature;
    PiecewiseLinearMF humidity;
    PiecewiseLinearMF mobility;
};

} // namespace dengue
