#pragma once

#include "dengue/fuzzy.hpp"
#include "dengue/panel.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dengue {

/// Month offsets applied to each factor before it enters the risk product.
struct Lags {
    int rainfall = 2;
    int temperature = 3;
    int humidity = 2;
    int mobility = 1;

    [[nodiscard]] int max() const noexcept;
    [[nodiscard]] std::array<int, 4> as_array() const noexcept { return {rainfall, temperature, humidity, mobility}; }
    bool operator==(const Lags &) const = default;
};

/// Powers c1..c4 of the rainfall, temperature, humidity and mobility memberships.
struct Exponents {
    double rainfall = 1.0;
    double temperature = 1.0;
    double humidity = 1.0;
    double mobility = 1.0;

    [[nodiscard]] std::array<double, 4> as_array() const noexcept { return {rainfall, temperature, humidity, mobility}; }
    static Exponents from_array(const std::array<double, 4> &c) noexcept { return {c[0], c[1], c[2], c[3]}; }
    bool operator==(const Exponents &) const = default;
};

struct RiskParams {
    Lags lags;
    Exponents exponents;
    double r_ideal = 1.0;
    double l_ideal = 1.0;
    /// Mobility normalizer C. Defaults to max R_mob over the panel span.
    std::optional<double> mobility_c;
    /// Peak infected count used to scale Y_I. Defaults to the max over the panel span.
    std::optional<double> incidence_peak;

    /// Throws ParameterError when a field violates its range.
    void validate() const;
};

/// One admissible month of the objective space.
struct RiskMonth {
    MonthIndex t;
    /// Memberships at the lagged inputs, in rainfall/temperature/humidity/mobility order.
    std::array<double, 4> memberships{};
    double R = 0.0;
    double L = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

struct RiskSeries {
    std::string region;
    std::vector<RiskMonth> months;
    /// Months inside the span left out because a lagged input was missing.
    std::vector<MonthIndex> omitted;
};

// -- mobility ----------------------------------------------------------------

/// Infected density I(j,t) = incidence / population for every region with both series.
[[nodiscard]] std::map<std::string, MonthlySeries> infected_densities(const Panel &panel);

/// R_mob(i,t) = sum_j X_m(i,j) I(j,t). Throws MissingDataError naming (j,t)
/// when a positively weighted neighbour has no density at t.
[[nodiscard]] double mobility_risk(const MobilityMatrix &mobility,
                                   const std::map<std::string, MonthlySeries> &infected_density,
                                   const std::string &region, MonthIndex t);

/// R_mob over the panel span; months with a missing neighbour are missing.
[[nodiscard]] MonthlySeries mobility_risk_series(const Panel &panel, const std::string &region);

// -- risk terms --------------------------------------------------------------

/// Product of memberships raised to their exponents.
[[nodiscard]] double combine_memberships(const std::array<double, 4> &memberships, const Exponents &exponents);

/// Lagged memberships at t, or nullopt when any lagged input is missing.
[[nodiscard]] std::optional<std::array<double, 4>> lagged_memberships(const Panel &panel, const MembershipSet &mfs,
                                                                      const RiskParams &params,
                                                                      const std::string &region, MonthIndex t);

/// Regional potential risk R(i,t); nullopt when the month is not admissible.
[[nodiscard]] std::optional<double> regional_risk(const Panel &panel, const MembershipSet &mfs,
                                                  const RiskParams &params, const std::string &region, MonthIndex t);

/// Local variation L(i,t) = (S(i,t-1)/N(i,t-1)) * (I(i,t-1)/I_peak); nullopt
/// when an input is missing. Throws DegenerateRegionError for N = 0 or I_peak = 0.
[[nodiscard]] std::optional<double> local_variation(const Panel &panel, const RiskParams &params,
                                                    const std::string &region, MonthIndex t);

/// C from params, else the maximum of R_mob over the panel span. Throws
/// DegenerateRegionError when that maximum is not positive.
[[nodiscard]] double resolve_mobility_c(const Panel &panel, const RiskParams &params, const std::string &region);
/// I_peak from params, else the maximum infected count over the panel span.
[[nodiscard]] double resolve_incidence_peak(const Panel &panel, const RiskParams &params, const std::string &region);

/// Maps every admissible month of the panel span into (d1, d2). Months are
/// in calendar order. `mfs.mobility` must already carry the normalizer C.
/// Throws PipelineError when no month is admissible.
[[nodiscard]] RiskSeries objective_space(const Panel &panel, const MembershipSet &mfs, const RiskParams &params,
                                         const std::string &region);

/// clamp(1 - value / ideal, 0, 1).
[[nodiscard]] double closeness(double value, double ideal) noexcept;

} // namespace dengue
