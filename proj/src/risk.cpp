#include "dengue/risk.hpp"

#include "dengue/error.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace dengue {

int Lags::max() const noexcept { return std::max({rainfall, temperature, humidity, mobility}); }

void RiskParams::validate() const
{
    for (int lag : lags.as_array()) {
        if (lag < 0) {
            throw ParameterError(fmt::format("lags must be >= 0, got {}", lag));
        }
    }
    for (double c : exponents.as_array()) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw ParameterError(fmt::format("exponents must be finite and > 0, got {}", c));
        }
    }
    if (!(r_ideal > 0.0 && r_ideal <= 1.0)) {
        throw ParameterError(fmt::format("r_ideal must lie in (0,1], got {}", r_ideal));
    }
    if (!(l_ideal > 0.0 && l_ideal <= 1.0)) {
        throw ParameterError(fmt::format("l_ideal must lie in (0,1], got {}", l_ideal));
    }
    if (mobility_c && !(*mobility_c > 0.0 && std::isfinite(*mobility_c))) {
        throw ParameterError(fmt::format("mobility_c must be > 0, got {}", *mobility_c));
    }
    if (incidence_peak && !(*incidence_peak > 0.0 && std::isfinite(*incidence_peak))) {
        throw ParameterError(fmt::format("incidence_peak must be > 0, got {}", *incidence_peak));
    }
}

double closeness(double value, double ideal) noexcept { return std::clamp(1.0 - value / ideal, 0.0, 1.0); }

// -- mobility ----------------------------------------------------------------

std::map<std::string, MonthlySeries> infected_densities(const Panel &panel)
{
    std::map<std::string, MonthlySeries> out;
    for (const auto &region : panel.regions()) {
        const auto *inc = panel.find(region, Variable::incidence_count);
        const auto *pop = panel.find(region, Variable::population_count);
        if (inc && pop) {
            out.emplace(region, divide(*inc, *pop, Variable::infected_density));
        }
    }
    return out;
}

double mobility_risk(const MobilityMatrix &mobility, const std::map<std::string, MonthlySeries> &infected_density,
                     const std::string &region, MonthIndex t)
{
    auto i = mobility.index_of(region);
    if (!i) {
        return 0.0;
    }
    double sum = 0.0;
    const auto &regions = mobility.regions();
    for (std::size_t j = 0; j < regions.size(); ++j) {
        double w = mobility.weight(*i, j);
        if (w == 0.0) {
            continue;
        }
        auto it = infected_density.find(regions[j]);
        Value density = it == infected_density.end() ? Value{} : it->second.at(t);
        if (!density) {
            throw MissingDataError(fmt::format("no infected density for ({}, {})", regions[j], t.to_string()));
        }
        sum += w * *density;
    }
    return sum;
}

MonthlySeries mobility_risk_series(const Panel &panel, const std::string &region)
{
    if (!panel.span()) {
        throw PipelineError("mobility risk needs an aligned panel");
    }
    auto densities = infected_densities(panel);
    const auto span = *panel.span();
    std::vector<Value> values(static_cast<std::size_t>(span.length()));
    for (std::size_t k = 0; k < values.size(); ++k) {
        try {
            values[k] = mobility_risk(panel.mobility(), densities, region, span.first + static_cast<long>(k));
        } catch (const MissingDataError &) {
        }
    }
    return {region, Variable::mobility_risk, span.first, std::move(values)};
}

double resolve_mobility_c(const Panel &panel, const RiskParams &params, const std::string &region)
{
    if (params.mobility_c) {
        return *params.mobility_c;
    }
    auto series = mobility_risk_series(panel, region);
    double c = 0.0;
    for (const auto &v : series.values()) {
        if (v) {
            c = std::max(c, *v);
        }
    }
    if (!(c > 0.0)) {
        throw DegenerateRegionError(
            fmt::format("region '{}' has no positive mobility risk in the span; set mobility_c explicitly", region));
    }
    return c;
}

double resolve_incidence_peak(const Panel &panel, const RiskParams &params, const std::string &region)
{
    if (params.incidence_peak) {
        return *params.incidence_peak;
    }
    const auto &inc = panel.get(region, Variable::incidence_count);
    double peak = 0.0;
    for (const auto &v : inc.values()) {
        if (v) {
            peak = std::max(peak, *v);
        }
    }
    if (!(peak > 0.0)) {
        throw DegenerateRegionError(fmt::format("region '{}' has no infected cases in the span (I_peak = 0)", region));
    }
    return peak;
}

// -- risk terms --------------------------------------------------------------

double combine_memberships(const std::array<double, 4> &memberships, const Exponents &exponents)
{
    auto c = exponents.as_array();
    double r = 1.0;
    for (std::size_t k = 0; k < 4; ++k) {
        r *= std::pow(memberships[k], c[k]);
    }
    return std::clamp(r, 0.0, 1.0);
}

namespace {

/// Inputs shared by the per-month evaluations of one region.
struct RegionInputs {
    const MonthlySeries &rain;
    const MonthlySeries &temperature;
    const MonthlySeries &humidity;
    std::map<std::string, MonthlySeries> densities;
};

RegionInputs gather(const Panel &panel, const std::string &region)
{
    return {panel.get(region, Variable::rainfall_mm), panel.get(region, Variable::temperature_c),
            panel.get(region, Variable::humidity_pct), infected_densities(panel)};
}

std::optional<std::array<double, 4>> memberships_at(const Panel &panel, const RegionInputs &in,
                                                    const MembershipSet &mfs, const Lags &lags,
                                                    const std::string &region, MonthIndex t)
{
    auto rain = in.rain.at(t - lags.rainfall);
    auto temp = in.temperature.at(t - lags.temperature);
    auto hum = in.humidity.at(t - lags.humidity);
    if (!rain || !temp || !hum) {
        return std::nullopt;
    }
    MonthIndex mob_t = t - lags.mobility;
    if (panel.span() && !panel.span()->contains(mob_t)) {
        return std::nullopt;
    }
    double mob = 0.0;
    try {
        mob = mobility_risk(panel.mobility(), in.densities, region, mob_t);
    } catch (const MissingDataError &) {
        return std::nullopt;
    }
    return std::array<double, 4>{mfs.rainfall(*rain), mfs.temperature(*temp), mfs.humidity(*hum), mfs.mobility(mob)};
}

struct LocalInputs {
    const MonthlySeries &susceptible;
    const MonthlySeries &population;
    const MonthlySeries &incidence;
    double incidence_peak;
};

std::optional<double> local_at(const LocalInputs &in, const std::string &region, MonthIndex t)
{
    MonthIndex prev = t - 1;
    auto s = in.susceptible.at(prev);
    auto n = in.population.at(prev);
    auto i = in.incidence.at(prev);
    if (!s || !n || !i) {
        return std::nullopt;
    }
    if (!(*n > 0.0)) {
        throw DegenerateRegionError(fmt::format("region '{}' has zero population at {}", region, prev.to_string()));
    }
    double ys = std::clamp(*s / *n, 0.0, 1.0);
    double yi = std::clamp(*i / in.incidence_peak, 0.0, 1.0);
    return ys * yi;
}

LocalInputs gather_local(const Panel &panel, const RiskParams &params, const std::string &region)
{
    return {panel.get(region, Variable::susceptible_count), panel.get(region, Variable::population_count),
            panel.get(region, Variable::incidence_count), resolve_incidence_peak(panel, params, region)};
}

} // namespace

std::optional<std::array<double, 4>> lagged_memberships(const Panel &panel, const MembershipSet &mfs,
                                                        const RiskParams &params, const std::string &region,
                                                        MonthIndex t)
{
    return memberships_at(panel, gather(panel, region), mfs, params.lags, region, t);
}

std::optional<double> regional_risk(const Panel &panel, const MembershipSet &mfs, const RiskParams &params,
                                    const std::string &region, MonthIndex t)
{
    auto y = lagged_memberships(panel, mfs, params, region, t);
    if (!y) {
        return std::nullopt;
    }
    return combine_memberships(*y, params.exponents);
}

std::optional<double> local_variation(const Panel &panel, const RiskParams &params, const std::string &region,
                                      MonthIndex t)
{
    return local_at(gather_local(panel, params, region), region, t);
}

RiskSeries objective_space(const Panel &panel, const MembershipSet &mfs, const RiskParams &params,
                           const std::string &region)
{
    params.validate();
    if (!panel.span()) {
        throw PipelineError("objective space needs an aligned panel");
    }
    auto inputs = gather(panel, region);
    auto local = gather_local(panel, params, region);

    RiskSeries out;
    out.region = region;
    const auto span = *panel.span();
    for (MonthIndex t = span.first; t <= span.last; ++t) {
        auto y = memberships_at(panel, inputs, mfs, params.lags, region, t);
        auto l = local_at(local, region, t);
        if (!y || !l) {
            out.omitted.push_back(t);
            continue;
        }
        RiskMonth m;
        m.t = t;
        m.memberships = *y;
        m.R = combine_memberships(*y, params.exponents);
        m.L = *l;
        m.d1 = closeness(m.R, params.r_ideal);
        m.d2 = closeness(m.L, params.l_ideal);
        out.months.push_back(m);
    }
    if (out.months.empty()) {
        throw PipelineError(fmt::format("no admissible month for region '{}' in {}", region, span.to_string()));
    }
    return out;
}

} // namespace dengue
