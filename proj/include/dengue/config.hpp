#pragma once

#include "dengue/baseline.hpp"
#include "dengue/calibrate.hpp"
#include "dengue/evaluation.hpp"
#include "dengue/month.hpp"
#include "dengue/pareto.hpp"
#include "dengue/synth.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace dengue {

/// Per-input path overrides; unset entries fall back to `data_dir/<name>.csv`.
struct InputPaths {
    std::optional<std::filesystem::path> rainfall;
    std::optional<std::filesystem::path> temperature;
    std::optional<std::filesystem::path> humidity;
    std::optional<std::filesystem::path> incidence;
    std::optional<std::filesystem::path> susceptible;
    std::optional<std::filesystem::path> population;
    std::optional<std::filesystem::path> mobility;
    std::optional<std::filesystem::path> outbreaks;
    /// Month list scored by `evaluate`; never derived from data_dir.
    std::optional<std::filesystem::path> predicted;
};

enum class InputKind {
    rainfall,
    temperature,
    humidity,
    incidence,
    susceptible,
    population,
    mobility,
    outbreaks,
    predicted,
};

[[nodiscard]] std::string_view to_string(InputKind kind) noexcept;

struct RunConfig {
    std::string region = "WP";
    std::optional<std::filesystem::path> data_dir;
    InputPaths inputs;
    std::filesystem::path output_dir = "out";

    CalibrationOptions calibration;
    double r_ideal = 1.0;
    double l_ideal = 1.0;

    int rank_threshold = kDefaultRankThreshold;
    double threshold_quantile = kDefaultThresholdQuantile;
    int match_window = kDefaultMatchWindow;
    /// Months scored by `evaluate` and `report`. `report` defaults to the
    /// span of admissible objective-space months.
    std::optional<MonthSpan> evaluation_span;

    SynthConfig synth;

    /// Throws ConfigError when a value is outside its module's range.
    void validate() const;
};

/// Parses a JSON config. Keys absent from the document keep their defaults;
/// unknown keys are rejected. Relative paths resolve against `base_dir`.
/// Throws ConfigError.
[[nodiscard]] RunConfig parse_config(std::string_view text, const std::filesystem::path &base_dir = {},
                                     std::string_view source = "<memory>");
/// Reads and parses a config file. A missing file raises UsageError.
[[nodiscard]] RunConfig load_config(const std::filesystem::path &path);

/// Every default as a JSON document accepted by parse_config.
[[nodiscard]] std::string format_defaults();

/// Path of one input. Throws UsageError when neither an explicit path nor a
/// data directory is configured (`predicted` needs an explicit path).
[[nodiscard]] std::filesystem::path input_path(const RunConfig &config, InputKind kind);

} // namespace dengue
