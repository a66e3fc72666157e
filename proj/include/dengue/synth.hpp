#pragma once

#include "dengue/evaluation.hpp"
#include "dengue/month.hpp"
#include "dengue/panel.hpp"
#include "dengue/risk.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace dengue {

/// Seeded generator with a pinned algorithm: std::mt19937_64 output mapped
/// to doubles as (x >> 11) * 2^-53, normals by Box-Muller. The standard
/// library's distributions are avoided because their algorithms are not
/// specified across implementations.
class SynthRng {
public:
    explicit SynthRng(std::uint64_t seed);
    /// Uniform on [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

private:
    std::mt19937_64 engine_;
};

struct SynthConfig {
    MonthIndex start{2010, 1};
    int months = 108;
    std::uint64_t seed = 20100101;
    Lags planted_lags;
    double rain_band_min = 150.0;
    double rain_band_max = 350.0;
    /// Defaults to five well separated months when empty.
    std::vector<MonthIndex> outbreak_months;
    /// Gaussian noise on target incidence, as a fraction of its standard deviation.
    double noise_scale = 0.0;
    std::string region = "WP";

    /// Throws ConfigError for infeasible settings.
    void validate() const;
    [[nodiscard]] std::vector<MonthIndex> resolved_outbreaks() const;
};

[[nodiscard]] std::vector<MonthIndex> default_synth_outbreaks();

struct SynthData {
    Panel panel;
    OutbreakCalendar outbreaks;
};

/// Seasonal climate, mobility-linked neighbour incidence and a target
/// incidence that follows the factors at the planted lags, with two-month
/// pulses ending at each planted outbreak month.
[[nodiscard]] SynthData generate(const SynthConfig &config);

/// Writes rainfall/temperature/humidity/incidence/susceptible/population/
/// mobility/outbreaks CSVs into `dir` (created if needed) and returns their paths.
std::vector<std::filesystem::path> write_synth(const SynthData &data, const std::filesystem::path &dir);

} // namespace dengue
