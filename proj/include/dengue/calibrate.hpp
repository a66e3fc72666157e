#pragma once

#include "dengue/fuzzy.hpp"
#include "dengue/panel.hpp"
#include "dengue/risk.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dengue {

struct LagResult {
    int lag_months = 0;
    /// Signed Pearson r at the chosen lag.
    double correlation = 0.0;
};

struct CutoffResult {
    double r_min = 0.0;
    double r_max = 0.0;
    double correlation = 0.0;
};

/// Sample Pearson correlation with pairwise deletion of missing entries.
/// Throws ParameterError on length mismatch, CorrelationError with fewer
/// than 3 complete pairs or zero variance.
[[nodiscard]] double pearson(std::span<const Value> x, std::span<const Value> y);
[[nodiscard]] double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of two series over the months where both are present.
[[nodiscard]] double pearson(const MonthlySeries &x, const MonthlySeries &y);

inline constexpr int kDefaultMaxLag = 6;

/// Lag k in [0, max_lag] maximizing |pearson(lag_shift(factor, k), incidence)|;
/// ties go to the smaller lag. Throws CorrelationError when the overlapping
/// span is shorter than max_lag + 3 months.
[[nodiscard]] LagResult best_lag(const MonthlySeries &factor, const MonthlySeries &incidence,
                                 int max_lag = kDefaultMaxLag);

inline constexpr double kDefaultRainGridStep = 10.0;

/// Exhaustive search over cutoff pairs on the multiples of grid_step lying
/// in [min(rain), max(rain)] for the plateau whose fuzzified lagged rainfall
/// correlates best with incidence. Ties prefer the wider plateau, then the smaller r_min.
[[nodiscard]] CutoffResult rainfall_cutoffs(const MonthlySeries &rain, const MonthlySeries &incidence, int lag,
                                            double grid_step = kDefaultRainGridStep,
                                            double shoulder = kDefaultRainShoulder);

inline constexpr double kExponentFloor = 0.05;

/// c_k = 4 |r_k| / sum_j |r_j| after flooring every |r_k| at 0.05. Throws
/// CalibrationError when every |r_k| is below the floor.
[[nodiscard]] Exponents exponents_from_correlations(const std::array<double, 4> &correlations);

/// Pearson r of each membership series, lagged by its factor lag, against
/// incidence. A constant membership series counts as uncorrelated (r = 0).
[[nodiscard]] std::array<double, 4> membership_correlations(const std::array<MonthlySeries, 4> &memberships,
                                                            const MonthlySeries &incidence, const Lags &lags);

/// exponents_from_correlations(membership_correlations(...)).
[[nodiscard]] Exponents estimate_exponents(const std::array<MonthlySeries, 4> &memberships,
                                           const MonthlySeries &incidence, const Lags &lags);

/// Series of y = mf(x(t)), same grid as x.
[[nodiscard]] MonthlySeries fuzzify(const MonthlySeries &x, const PiecewiseLinearMF &mf);

// -- whole-panel calibration -------------------------------------------------

struct CalibrationOptions {
    int max_lag = kDefaultMaxLag;
    double rain_grid_step = kDefaultRainGridStep;
    double rain_shoulder = kDefaultRainShoulder;
    /// When false the fixed lags below are used instead of searching.
    bool search_lags = true;
    Lags fixed_lags;
    /// Overrides; each one skips the matching estimation step.
    std::optional<Exponents> exponents;
    std::optional<double> mobility_c;
    std::optional<double> incidence_peak;
    std::optional<PiecewiseLinearMF> rainfall_mf;
    std::optional<PiecewiseLinearMF> temperature_mf;
    std::optional<PiecewiseLinearMF> humidity_mf;
    std::optional<PiecewiseLinearMF> mobility_mf;
};

struct FactorCalibration {
    int lag = 0;
    /// Raw-value Pearson r at that lag; absent when the lag was fixed.
    std::optional<double> correlation;
};

struct Calibration {
    std::string region;
    FactorCalibration rainfall;
    FactorCalibration temperature;
    FactorCalibration humidity;
    FactorCalibration mobility;
    std::optional<CutoffResult> cutoffs;
    Exponents exponents;
    /// Membership-level correlations behind the exponents, when estimated.
    std::optional<std::array<double, 4>> membership_correlations;
    double mobility_c = 0.0;
    double incidence_peak = 0.0;
    MembershipSet mfs;

    [[nodiscard]] Lags lags() const noexcept
    {
        return {rainfall.lag, temperature.lag, humidity.lag, mobility.lag};
    }
    [[nodiscard]] RiskParams risk_params(double r_ideal = 1.0, double l_ideal = 1.0) const;
};

/// Lags, rainfall cutoffs, exponents and normalizers for one region of an
/// aligned panel.
[[nodiscard]] Calibration calibrate_panel(const Panel &panel, const std::string &region,
                                          const CalibrationOptions &options = {});

} // namespace dengue
