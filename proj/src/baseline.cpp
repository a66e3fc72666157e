#include "dengue/baseline.hpp"

#include "dengue/error.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace dengue {

Design build_design(const Panel &panel, const std::string &region, const Lags &lags)
{
    if (!panel.span()) {
        throw PipelineError("baseline design needs an aligned panel");
    }
    const auto &rain = panel.get(region, Variable::rainfall_mm);
    const auto &temp = panel.get(region, Variable::temperature_c);
    const auto &hum = panel.get(region, Variable::humidity_pct);
    const auto &inc = panel.get(region, Variable::incidence_count);
    const auto &sus = panel.get(region, Variable::susceptible_count);
    const auto mob = mobility_risk_series(panel, region);

    std::vector<std::array<double, 7>> rows;
    std::vector<double> response;
    std::vector<MonthIndex> months;
    const auto span = *panel.span();
    for (MonthIndex t = span.first; t <= span.last; ++t) {
        std::array<Value, 7> r{1.0,
                               rain.at(t - lags.rainfall),
                               temp.at(t - lags.temperature),
                               hum.at(t - lags.humidity),
                               mob.at(t - lags.mobility),
                               inc.at(t - 1),
                               sus.at(t - 1)};
        auto y = inc.at(t);
        if (!y || std::any_of(r.begin(), r.end(), [](const Value &v) { return !v.has_value(); })) {
            continue;
        }
        std::array<double, 7> row{};
        std::transform(r.begin(), r.end(), row.begin(), [](const Value &v) { return *v; });
        rows.push_back(row);
        response.push_back(*y);
        months.push_back(t);
    }
    if (rows.size() < 8) {
        throw UnderdeterminedError(
            fmt::format("baseline design for '{}' has {} complete rows; need >= 8", region, rows.size()));
    }
    Design d;
    d.X.resize(static_cast<Eigen::Index>(rows.size()), 7);
    d.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < 7; ++j) {
            d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
        d.y(static_cast<Eigen::Index>(i)) = response[i];
    }
    d.months = std::move(months);
    return d;
}

double GlmCoefficients::predict(const Eigen::Ref<const Eigen::RowVectorXd> &row) const
{
    double s = 0.0;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
        s += b[static_cast<std::size_t>(j)] * row(j);
    }
    return s;
}

GlmCoefficients fit_ols(const Eigen::MatrixXd &X, const Eigen::VectorXd &y)
{
    if (X.cols() != 7) {
        throw ParameterError(fmt::format("design must have 7 columns, got {}", X.cols()));
    }
    if (X.rows() < 7 || X.rows() != y.size()) {
        throw ParameterError(fmt::format("design has {} rows for {} responses; need >= 7 matching rows", X.rows(),
                                         y.size()));
    }
    if (!X.allFinite() || !y.allFinite()) {
        throw ParameterError("design contains non-finite values");
    }
    // Scale columns to unit norm so the rank test is independent of units.
    Eigen::VectorXd scale = X.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < scale.size(); ++j) {
        if (scale(j) == 0.0) {
            throw SingularDesignError(fmt::format("design column '{}' is identically zero",
                                                  kDesignColumns[static_cast<std::size_t>(j)]));
        }
    }
    Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
    qr.setThreshold(1e-10);
    if (qr.rank() < Xs.cols()) {
        std::string names;
        const auto &perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < Xs.cols(); ++k) {
            names += fmt::format("{}{}", names.empty() ? "" : ", ", kDesignColumns[static_cast<std::size_t>(perm(k))]);
        }
        throw SingularDesignError(
            fmt::format("design has rank {} < 7; collinear with earlier columns: {}", qr.rank(), names));
    }
    Eigen::VectorXd beta = qr.solve(y).cwiseQuotient(scale);
    GlmCoefficients out;
    for (std::size_t j = 0; j < 7; ++j) {
        out.b[j] = beta(static_cast<Eigen::Index>(j));
        if (!std::isfinite(out.b[j])) {
            throw SingularDesignError("least-squares solution is not finite");
        }
    }
    return out;
}

Eigen::VectorXd fitted_values(const GlmCoefficients &coeffs, const Eigen::MatrixXd &X)
{
    Eigen::Map<const Eigen::VectorXd> b(coeffs.b.data(), 7);
    return X * b;
}

double quantile(std::vector<double> values, double q)
{
    if (values.empty()) {
        throw ParameterError("quantile of an empty sample");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw ParameterError(fmt::format("quantile level must lie in [0,1], got {}", q));
    }
    std::sort(values.begin(), values.end());
    double h = q * static_cast<double>(values.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(h));
    auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<bool> extract_peaks(const std::vector<MonthIndex> &months, const std::vector<double> &values,
                                double threshold_quantile)
{
    if (!(threshold_quantile > 0.0 && threshold_quantile < 1.0)) {
        throw ParameterError(fmt::format("threshold quantile must lie in (0,1), got {}", threshold_quantile));
    }
    if (months.size() != values.size()) {
        throw ParameterError("months and values differ in length");
    }
    std::vector<bool> flags(values.size(), false);
    if (values.empty()) {
        return flags;
    }
    const double threshold = quantile(values, threshold_quantile);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > threshold)) {
            continue;
        }
        bool above_prev = i == 0 || months[i - 1] != months[i] - 1 || values[i] > values[i - 1];
        bool not_below_next =
            i + 1 == values.size() || months[i + 1] != months[i] + 1 || values[i] >= values[i + 1];
        flags[i] = above_prev && not_below_next;
    }
    return flags;
}

std::vector<BaselineMonth> predict_and_extract(const GlmCoefficients &coeffs, const Design &design,
                                               double threshold_quantile)
{
    Eigen::VectorXd fitted = fitted_values(coeffs, design.X);
    std::vector<double> values(fitted.data(), fitted.data() + fitted.size());
    auto flags = extract_peaks(design.months, values, threshold_quantile);
    std::vector<BaselineMonth> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.push_back({design.months[i], values[i], flags[i]});
    }
    return out;
}

std::vector<MonthIndex> predicted_months(const std::vector<BaselineMonth> &rows)
{
    std::vector<MonthIndex> out;
    for (const auto &r : rows) {
        if (r.predicted) {
            out.push_back(r.t);
        }
    }
    return out;
}

} // namespace dengue
