#pragma once

#include "dengue/month.hpp"
#include "dengue/panel.hpp"
#include "dengue/risk.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace dengue {

inline constexpr std::array<std::string_view, 7> kDesignColumns{
    "intercept", "rainfall", "temperature", "humidity", "mobility_risk", "incidence_lag1", "susceptible_lag1"};

/// Regression rows for the linear baseline, one per retained month.
struct Design {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<MonthIndex> months;
};

/// Columns [1, rain(t-lr), temp(t-lT), humid(t-lH), R_mob(t-lm), I(t-1), S(t-1)]
/// against response I(t). Rows with any missing regressor are dropped.
/// Throws UnderdeterminedError with fewer than 8 complete rows.
[[nodiscard]] Design build_design(const Panel &panel, const std::string &region, const Lags &lags);

struct GlmCoefficients {
    std::array<double, 7> b{};

    [[nodiscard]] double predict(const Eigen::Ref<const Eigen::RowVectorXd> &row) const;
};

/// Least squares via column-pivoted Householder QR. Throws ParameterError
/// unless X has 7 columns and at least 7 rows; SingularDesignError naming the
/// dependent columns when X is rank deficient.
[[nodiscard]] GlmCoefficients fit_ols(const Eigen::MatrixXd &X, const Eigen::VectorXd &y);

[[nodiscard]] Eigen::VectorXd fitted_values(const GlmCoefficients &coeffs, const Eigen::MatrixXd &X);

inline constexpr double kDefaultThresholdQuantile = 0.85;

/// Linear-interpolation sample quantile (R type 7).
[[nodiscard]] double quantile(std::vector<double> values, double q);

struct BaselineMonth {
    MonthIndex t;
    double fitted = 0.0;
    bool predicted = false;
};

/// A month is a predicted outbreak iff its fitted value exceeds the
/// threshold quantile of all fitted values and is a local maximum over the
/// adjacent calendar months (strictly above the previous, at least the next).
[[nodiscard]] std::vector<BaselineMonth> predict_and_extract(const GlmCoefficients &coeffs, const Design &design,
                                                             double threshold_quantile = kDefaultThresholdQuantile);

/// Same rule applied to precomputed values; input must be in calendar order.
[[nodiscard]] std::vector<bool> extract_peaks(const std::vector<MonthIndex> &months, const std::vector<double> &values,
                                              double threshold_quantile = kDefaultThresholdQuantile);

[[nodiscard]] std::vector<MonthIndex> predicted_months(const std::vector<BaselineMonth> &rows);

} // namespace dengue
