#include "dengue/calibrate.hpp"

#include "dengue/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace dengue {

namespace {

double pearson_complete(std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = x.size();
    if (n < 3) {
        throw CorrelationError(fmt::format("correlation needs >= 3 complete pairs, got {}", n));
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw CorrelationError("correlation undefined: zero variance");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

bool is_constant(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

/// Present pairs (x(t), y(t)) over the months of y.
void paired(const MonthlySeries &x, const MonthlySeries &y, std::vector<double> &xs, std::vector<double> &ys)
{
    xs.clear();
    ys.clear();
    for (std::size_t i = 0; i < y.size(); ++i) {
        auto t = y.start() + static_cast<long>(i);
        auto a = x.at(t);
        const auto &b = y.values()[i];
        if (a && b) {
            xs.push_back(*a);
            ys.push_back(*b);
        }
    }
}

} // namespace

double pearson(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw ParameterError(fmt::format("pearson: length mismatch {} vs {}", x.size(), y.size()));
    }
    return pearson_complete(x, y);
}

double pearson(std::span<const Value> x, std::span<const Value> y)
{
    if (x.size() != y.size()) {
        throw ParameterError(fmt::format("pearson: length mismatch {} vs {}", x.size(), y.size()));
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && y[i]) {
            xs.push_back(*x[i]);
            ys.push_back(*y[i]);
        }
    }
    return pearson_complete(xs, ys);
}

double pearson(const MonthlySeries &x, const MonthlySeries &y)
{
    std::vector<double> xs;
    std::vector<double> ys;
    paired(x, y, xs, ys);
    return pearson_complete(xs, ys);
}

LagResult best_lag(const MonthlySeries &factor, const MonthlySeries &incidence, int max_lag)
{
    if (max_lag < 0) {
        throw ParameterError(fmt::format("max_lag must be >= 0, got {}", max_lag));
    }
    long overlap = 0;
    if (!factor.empty() && !incidence.empty()) {
        overlap = std::min(factor.end(), incidence.end()) - std::max(factor.start(), incidence.start()) + 1;
    }
    if (overlap < max_lag + 3) {
        throw CorrelationError(fmt::format("lag search for {} needs >= {} overlapping months, got {}",
                                           to_string(factor.variable()), max_lag + 3, std::max(overlap, 0L)));
    }
    LagResult best{0, 0.0};
    double best_abs = -1.0;
    for (int k = 0; k <= max_lag; ++k) {
        double r = pearson(lag_shift(factor, k), incidence);
        if (std::abs(r) > best_abs) {
            best_abs = std::abs(r);
            best = {k, r};
        }
    }
    return best;
}

CutoffResult rainfall_cutoffs(const MonthlySeries &rain, const MonthlySeries &incidence, int lag, double grid_step,
                              double shoulder)
{
    if (!(grid_step > 0.0) || !std::isfinite(grid_step)) {
        throw ParameterError(fmt::format("grid_step must be > 0, got {}", grid_step));
    }
    std::vector<double> xs;
    std::vector<double> ys;
    paired(lag_shift(rain, lag), incidence, xs, ys);
    if (xs.size() < 3) {
        throw CorrelationError(fmt::format("cutoff search needs >= 3 complete pairs, got {}", xs.size()));
    }
    auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (lo == hi) {
        throw CalibrationError("rainfall cutoff search: rainfall is constant");
    }
    if (lo < 0.0) {
        throw CalibrationError(fmt::format("rainfall cutoff search: negative rainfall {}", lo));
    }
    // Grid points are whole multiples of the step inside [lo, hi].
    std::vector<double> grid;
    for (auto k = static_cast<long>(std::ceil(lo / grid_step));; ++k) {
        double g = static_cast<double>(k) * grid_step;
        if (g > hi) {
            break;
        }
        grid.push_back(g);
    }
    if (grid.size() < 2) {
        throw CalibrationError(fmt::format("rainfall cutoff search: empty grid (step {} exceeds range {}..{})",
                                           grid_step, lo, hi));
    }

    std::optional<CutoffResult> best;
    std::vector<double> fuzzy(xs.size());
    for (std::size_t a = 0; a < grid.size(); ++a) {
        for (std::size_t b = a + 1; b < grid.size(); ++b) {
            auto mf = rainfall_mf_from_cutoffs(grid[a], grid[b], shoulder);
            std::transform(xs.begin(), xs.end(), fuzzy.begin(), [&](double x) { return mf(x); });
            if (is_constant(fuzzy)) {
                continue;
            }
            double r = pearson_complete(fuzzy, ys);
            CutoffResult cand{grid[a], grid[b], r};
            if (!best) {
                best = cand;
                continue;
            }
            double width = cand.r_max - cand.r_min;
            double best_width = best->r_max - best->r_min;
            if (r > best->correlation || (r == best->correlation && (width > best_width ||
                                                                     (width == best_width && cand.r_min < best->r_min)))) {
                best = cand;
            }
        }
    }
    if (!best) {
        throw CalibrationError("rainfall cutoff search: no cutoff pair separates the observed rainfall");
    }
    return *best;
}

Exponents exponents_from_correlations(const std::array<double, 4> &correlations)
{
    std::array<double, 4> floored{};
    bool any_above = false;
    double sum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        double a = std::abs(correlations[k]);
        if (!std::isfinite(a)) {
            throw CalibrationError(fmt::format("exponent estimation: non-finite correlation {}", correlations[k]));
        }
        any_above = any_above || a >= kExponentFloor;
        floored[k] = std::max(a, kExponentFloor);
        sum += floored[k];
    }
    if (!any_above) {
        throw CalibrationError(
            fmt::format("exponent estimation: every |r| is below the floor {}", kExponentFloor));
    }
    std::array<double, 4> c{};
    for (std::size_t k = 0; k < 4; ++k) {
        c[k] = 4.0 * floored[k] / sum;
    }
    return Exponents::from_array(c);
}

std::array<double, 4> membership_correlations(const std::array<MonthlySeries, 4> &memberships,
                                              const MonthlySeries &incidence, const Lags &lags)
{
    auto lag = lags.as_array();
    std::array<double, 4> r{};
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = 0; k < 4; ++k) {
        paired(lag_shift(memberships[k], lag[k]), incidence, xs, ys);
        if (xs.size() >= 3 && is_constant(xs)) {
            r[k] = 0.0;
            continue;
        }
        r[k] = pearson_complete(xs, ys);
    }
    return r;
}

Exponents estimate_exponents(const std::array<MonthlySeries, 4> &memberships, const MonthlySeries &incidence,
                             const Lags &lags)
{
    return exponents_from_correlations(membership_correlations(memberships, incidence, lags));
}

MonthlySeries fuzzify(const MonthlySeries &x, const PiecewiseLinearMF &mf)
{
    std::vector<Value> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x.values()[i]) {
            out[i] = mf(*x.values()[i]);
        }
    }
    return {x.region(), Variable::membership, x.start(), std::move(out)};
}

// -- whole-panel calibration -------------------------------------------------

RiskParams Calibration::risk_params(double r_ideal, double l_ideal) const
{
    RiskParams p;
    p.lags = lags();
    p.exponents = exponents;
    p.r_ideal = r_ideal;
    p.l_ideal = l_ideal;
    p.mobility_c = mobility_c;
    p.incidence_peak = incidence_peak;
    return p;
}

Calibration calibrate_panel(const Panel &panel, const std::string &region, const CalibrationOptions &options)
{
    if (!panel.span()) {
        throw PipelineError("calibration needs an aligned panel");
    }
    const auto &rain = panel.get(region, Variable::rainfall_mm);
    const auto &temp = panel.get(region, Variable::temperature_c);
    const auto &hum = panel.get(region, Variable::humidity_pct);
    const auto &inc = panel.get(region, Variable::incidence_count);
    const auto mob = mobility_risk_series(panel, region);

    Calibration cal;
    cal.region = region;
    auto search = [&](const MonthlySeries &factor, const char *name) {
        try {
            auto res = best_lag(factor, inc, options.max_lag);
            return FactorCalibration{res.lag_months, res.correlation};
        } catch (const CorrelationError &e) {
            throw CorrelationError(fmt::format("{} lag search: {}", name, e.what()));
        }
    };
    if (options.search_lags) {
        cal.rainfall = search(rain, "rainfall");
        cal.temperature = search(temp, "temperature");
        cal.humidity = search(hum, "humidity");
        cal.mobility = search(mob, "mobility");
    } else {
        cal.rainfall.lag = options.fixed_lags.rainfall;
        cal.temperature.lag = options.fixed_lags.temperature;
        cal.humidity.lag = options.fixed_lags.humidity;
        cal.mobility.lag = options.fixed_lags.mobility;
    }

    RiskParams probe;
    probe.mobility_c = options.mobility_c;
    probe.incidence_peak = options.incidence_peak;
    cal.mobility_c = resolve_mobility_c(panel, probe, region);
    cal.incidence_peak = resolve_incidence_peak(panel, probe, region);

    if (options.rainfall_mf) {
        cal.mfs.rainfall = *options.rainfall_mf;
    } else {
        cal.cutoffs = rainfall_cutoffs(rain, inc, cal.rainfall.lag, options.rain_grid_step, options.rain_shoulder);
        cal.mfs.rainfall = rainfall_mf_from_cutoffs(cal.cutoffs->r_min, cal.cutoffs->r_max, options.rain_shoulder);
    }
    cal.mfs.temperature = options.temperature_mf.value_or(temperature_mf_default());
    cal.mfs.humidity = options.humidity_mf.value_or(humidity_mf_default());
    cal.mfs.mobility = options.mobility_mf.value_or(mobility_mf(cal.mobility_c));

    if (options.exponents) {
        cal.exponents = *options.exponents;
    } else {
        std::array<MonthlySeries, 4> memberships{fuzzify(rain, cal.mfs.rainfall), fuzzify(temp, cal.mfs.temperature),
                                                 fuzzify(hum, cal.mfs.humidity), fuzzify(mob, cal.mfs.mobility)};
        cal.membership_correlations = membership_correlations(memberships, inc, cal.lags());
        cal.exponents = exponents_from_correlations(*cal.membership_correlations);
    }
    return cal;
}

} // namespace dengue
