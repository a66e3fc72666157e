#include "dengue/fuzzy.hpp"

#include "dengue/error.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace dengue {

PiecewiseLinearMF::PiecewiseLinearMF(std::vector<Breakpoint> breakpoints) : points_{std::move(breakpoints)}
{
    if (points_.size() < 2) {
        throw ParameterError(fmt::format("membership function needs >= 2 breakpoints, got {}", points_.size()));
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto &p = points_[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.y < 0.0 || p.y > 1.0) {
            throw ParameterError(fmt::format("breakpoint ({}, {}) must have finite x and y in [0,1]", p.x, p.y));
        }
        if (i > 0 && !(points_[i - 1].x < p.x)) {
            throw ParameterError(fmt::format("breakpoint x must be strictly increasing ({} then {})",
                                             points_[i - 1].x, p.x));
        }
    }
}

double PiecewiseLinearMF::evaluate(double x) const
{
    if (std::isnan(x)) {
        throw ParameterError("membership evaluated at NaN");
    }
    if (x <= points_.front().x) {
        return points_.front().y;
    }
    if (x >= points_.back().x) {
        return points_.back().y;
    }
    // First breakpoint strictly greater than x; x lies in [lo.x, hi.x).
    auto hi = std::upper_bound(points_.begin(), points_.end(), x,
                               [](double v, const Breakpoint &b) { return v < b.x; });
    auto lo = hi - 1;
    if (x == lo->x) {
        return lo->y;
    }
    double frac = (x - lo->x) / (hi->x - lo->x);
    double y = lo->y + frac * (hi->y - lo->y);
    return std::clamp(y, 0.0, 1.0);
}

PiecewiseLinearMF temperature_mf_default()
{
    return PiecewiseLinearMF({{15.0, 0.0}, {20.0, 1.0}, {30.0, 1.0}, {36.0, 0.0}});
}

PiecewiseLinearMF humidity_mf_default()
{
    return PiecewiseLinearMF({{40.0, 0.0}, {60.0, 1.0}, {90.0, 1.0}, {100.0, 0.8}});
}

PiecewiseLinearMF rainfall_mf_from_cutoffs(double r_min, double r_max, double shoulder)
{
    if (!(r_min >= 0.0) || !(r_min < r_max) || !std::isfinite(r_max)) {
        throw ParameterError(fmt::format("rainfall cutoffs need 0 <= r_min < r_max, got ({}, {})", r_min, r_max));
    }
    if (!(shoulder > 0.0) || !std::isfinite(shoulder)) {
        throw ParameterError(fmt::format("rainfall shoulder width must be > 0, got {}", shoulder));
    }
    std::vector<Breakpoint> pts;
    double left_foot = r_min * (1.0 - shoulder);
    if (r_min > 0.0 && left_foot < r_min) {
        pts.push_back({left_foot, 0.0});
    }
    pts.push_back({r_min, 1.0});
    pts.push_back({r_max, 1.0});
    pts.push_back({r_max * (1.0 + shoulder), 0.0});
    return PiecewiseLinearMF(std::move(pts));
}

PiecewiseLinearMF mobility_mf(double c_max)
{
    if (!(c_max > 0.0) || !std::isfinite(c_max)) {
        throw ParameterError(fmt::format("mobility normalizer C must be > 0, got {}", c_max));
    }
    return PiecewiseLinearMF({{0.0, 0.0}, {c_max, 1.0}});
}

} // namespace dengue
