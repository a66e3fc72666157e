#include "dengue/synth.hpp"

#include "dengue/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include <fmt/format.h>

namespace dengue {

SynthRng::SynthRng(std::uint64_t seed) : engine_{seed} {}

double SynthRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SynthRng::normal()
{
    double u1 = 1.0 - uniform(); // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

constexpr int kMaxPlantedLag = 6;
// Months generated before `start` so lagged inputs exist for the first month.
constexpr int kBurnIn = kMaxPlantedLag + 1;

struct Neighbour {
    const char *region;
    double population;
    double base_density;
    double weight_from_target;
};

constexpr Neighbour kNeighbours[] = {
    {"CP", 2'571'557.0, 2.0e-4, 0.35},
    {"SP", 2'477'285.0, 1.5e-4, 0.25},
    {"NW", 2'380'861.0, 1.0e-4, 0.25},
    {"SG", 1'918'880.0, 1.2e-4, 0.15},
};
constexpr double kTargetPopulation = 5'821'710.0;

// Values written at lagged months feeding an outbreak; each lies in the
// full-membership band of its factor.
constexpr double kForcedTemperature = 30.0;
constexpr double kForcedHumidity = 90.0;

double seasonal(int calendar_month, int peak_month)
{
    return std::sin(2.0 * std::numbers::pi * (calendar_month - peak_month + 3) / 12.0);
}

} // namespace

std::vector<MonthIndex> default_synth_outbreaks()
{
    return {MonthIndex(2011, 7), MonthIndex(2012, 12), MonthIndex(2014, 6), MonthIndex(2016, 1), MonthIndex(2017, 7)};
}

std::vector<MonthIndex> SynthConfig::resolved_outbreaks() const
{
    auto out = outbreak_months.empty() ? default_synth_outbreaks() : outbreak_months;
    std::sort(out.begin(), out.end());
    return out;
}

void SynthConfig::validate() const
{
    if (months < 24) {
        throw ConfigError(fmt::format("synthetic panel needs >= 24 months, got {}", months));
    }
    for (int lag : planted_lags.as_array()) {
        if (lag < 0 || lag > kMaxPlantedLag) {
            throw ConfigError(fmt::format("planted lags must lie in 0..{}, got {}", kMaxPlantedLag, lag));
        }
    }
    if (!(rain_band_min >= 0.0 && rain_band_min < rain_band_max)) {
        throw ConfigError(fmt::format("rain band needs 0 <= min < max, got ({}, {})", rain_band_min, rain_band_max));
    }
    if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
        throw ConfigError(fmt::format("noise_scale must be >= 0, got {}", noise_scale));
    }
    if (region.empty()) {
        throw ConfigError("synthetic target region must be named");
    }
    const MonthIndex end = start + (months - 1);
    const MonthIndex earliest = start + (planted_lags.max() + 1);
    auto outbreaks = resolved_outbreaks();
    for (std::size_t i = 0; i < outbreaks.size(); ++i) {
        auto o = outbreaks[i];
        if (o < earliest || end < o) {
            throw ConfigError(fmt::format("outbreak month {} must lie in {}..{} (after the largest lag)",
                                          o.to_string(), earliest.to_string(), end.to_string()));
        }
        if (i > 0 && o - outbreaks[i - 1] < 3) {
            throw ConfigError(fmt::format("outbreak months {} and {} are closer than 3 months",
                                          outbreaks[i - 1].to_string(), o.to_string()));
        }
    }
}

SynthData generate(const SynthConfig &config)
{
    config.validate();
    const auto outbreaks = config.resolved_outbreaks();
    const int total = config.months + kBurnIn;
    const MonthIndex first = config.start - kBurnIn;
    auto idx = [&](MonthIndex m) { return static_cast<int>(m - first); };

    auto forced_for = [&](int lag) {
        std::set<int> s;
        for (auto o : outbreaks) {
            s.insert(idx(o) - lag - 1);
            s.insert(idx(o) - lag);
        }
        return s;
    };
    const auto forced_rain = forced_for(config.planted_lags.rainfall);
    const auto forced_temp = forced_for(config.planted_lags.temperature);
    const auto forced_hum = forced_for(config.planted_lags.humidity);
    const auto forced_mob = forced_for(config.planted_lags.mobility);
    const auto pulse = forced_for(0);

    const double band_lo = config.rain_band_min;
    const double band_hi = config.rain_band_max;
    const double forced_rain_value = band_lo + 0.75 * (band_hi - band_lo);

    SynthRng rng(config.seed);
    std::vector<double> rain(total), temp(total), hum(total), mobility(total);
    for (int k = 0; k < total; ++k) {
        int cm = (first + k).month();
        double r = 200.0 + 50.0 * seasonal(cm, 6) + rng.uniform(-200.0, 200.0);
        double tc = 25.0 + 1.0 * seasonal(cm, 4) + rng.uniform(-3.5, 3.5);
        double h = 74.0 + 3.0 * seasonal(cm, 6) + rng.uniform(-11.0, 11.0);
        double m = rng.uniform(0.15, 0.75);
        rain[k] = forced_rain.contains(k) ? forced_rain_value : std::clamp(r, 3.2, 794.8);
        temp[k] = forced_temp.contains(k) ? kForcedTemperature : std::clamp(tc, 22.0, 33.0);
        hum[k] = forced_hum.contains(k) ? kForcedHumidity : std::clamp(h, 62.0, 95.0);
        mobility[k] = forced_mob.contains(k) ? 1.0 : m;
    }

    // Neighbour incidence follows the shared mobility signal; only forced
    // months reach the maximum density.
    std::vector<std::vector<double>> neighbour_inc;
    std::vector<double> rmob(total, 0.0);
    for (const auto &nb : kNeighbours) {
        std::vector<double> inc(total);
        for (int k = 0; k < total; ++k) {
            double level = forced_mob.contains(k) ? 1.0 : std::clamp(mobility[k] + rng.uniform(-0.08, 0.08), 0.05, 0.9);
            inc[k] = std::round(nb.population * nb.base_density * level);
            rmob[k] += nb.weight_from_target * (inc[k] / nb.population);
        }
        neighbour_inc.push_back(std::move(inc));
    }
    const double rmob_max = *std::max_element(rmob.begin(), rmob.end());

    const auto band = rainfall_mf_from_cutoffs(band_lo, band_hi);
    const auto &lags = config.planted_lags;
    std::vector<double> incidence(total, 0.0);
    double driven_max = 0.0;
    for (int k = kBurnIn; k < total; ++k) {
        double d = 150.0 + 2600.0 * band(rain[k - lags.rainfall]) + 2000.0 * (temp[k - lags.temperature] - 22.0) / 11.0 +
                   1500.0 * (hum[k - lags.humidity] - 62.0) / 33.0 + 1200.0 * rmob[k - lags.mobility] / rmob_max;
        incidence[k] = std::round(d);
        if (!pulse.contains(k)) {
            driven_max = std::max(driven_max, d);
        }
    }
    const double pulse_level = std::round(1.1 * driven_max);
    for (int k : pulse) {
        incidence[k] = pulse_level;
    }
    if (config.noise_scale > 0.0) {
        double mean = 0.0;
        for (int k = kBurnIn; k < total; ++k) {
            mean += incidence[k];
        }
        mean /= config.months;
        double var = 0.0;
        for (int k = kBurnIn; k < total; ++k) {
            var += (incidence[k] - mean) * (incidence[k] - mean);
        }
        double sd = std::sqrt(var / (config.months - 1));
        for (int k = kBurnIn; k < total; ++k) {
            incidence[k] = std::max(0.0, std::round(incidence[k] + config.noise_scale * sd * rng.normal()));
        }
    }

    std::vector<double> susceptible(total);
    for (int k = 0; k < total; ++k) {
        double share = pulse.contains(k) ? 0.96 : rng.uniform(0.90, 0.95);
        susceptible[k] = std::round(kTargetPopulation * share);
    }

    auto emit = [&](const std::string &region, Variable v, const std::vector<double> &values) {
        std::vector<Value> out(values.begin() + kBurnIn, values.end());
        return MonthlySeries(region, v, config.start, std::move(out));
    };
    const std::string &target = config.region;
    std::vector<MonthlySeries> series{
        emit(target, Variable::rainfall_mm, rain),
        emit(target, Variable::temperature_c, temp),
        emit(target, Variable::humidity_pct, hum),
        emit(target, Variable::incidence_count, incidence),
        emit(target, Variable::susceptible_count, susceptible),
        emit(target, Variable::population_count, std::vector<double>(total, kTargetPopulation)),
    };
    std::vector<std::string> regions{target};
    for (std::size_t j = 0; j < std::size(kNeighbours); ++j) {
        const auto &nb = kNeighbours[j];
        series.push_back(emit(nb.region, Variable::incidence_count, neighbour_inc[j]));
        series.push_back(emit(nb.region, Variable::population_count, std::vector<double>(total, nb.population)));
        regions.emplace_back(nb.region);
    }
    std::vector<double> weights(regions.size() * regions.size(), 0.0);
    for (std::size_t j = 0; j < std::size(kNeighbours); ++j) {
        weights[0 * regions.size() + (j + 1)] = kNeighbours[j].weight_from_target;
        weights[(j + 1) * regions.size() + 0] = 0.3;
    }

    SynthData data{align(Panel(std::move(series), MobilityMatrix(regions, std::move(weights)))),
                   OutbreakCalendar(outbreaks)};
    return data;
}

std::vector<std::filesystem::path> write_synth(const SynthData &data, const std::filesystem::path &dir)
{
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto collect = [&](Variable v) {
        std::vector<MonthlySeries> out;
        for (const auto &[key, s] : data.panel.series()) {
            if (key.second == v) {
                out.push_back(s);
            }
        }
        return out;
    };
    auto series = [&](const char *name, Variable v) {
        written.push_back(dir / name);
        write_series(written.back(), collect(v));
    };
    auto text = [&](const char *name, const std::string &body) {
        written.push_back(dir / name);
        std::ofstream out(written.back(), std::ios::binary);
        out << body;
        if (!out) {
            throw IngestError(fmt::format("cannot write '{}'", written.back().string()));
        }
    };
    series("rainfall.csv", Variable::rainfall_mm);
    series("temperature.csv", Variable::temperature_c);
    series("humidity.csv", Variable::humidity_pct);
    series("incidence.csv", Variable::incidence_count);
    series("susceptible.csv", Variable::susceptible_count);
    series("population.csv", Variable::population_count);
    text("mobility.csv", format_mobility_csv(data.panel.mobility()));
    text("outbreaks.csv", format_month_list_csv(data.outbreaks.months()));
    return written;
}

} // namespace dengue
