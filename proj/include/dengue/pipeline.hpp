#pragma once

#include "dengue/baseline.hpp"
#include "dengue/calibrate.hpp"
#include "dengue/config.hpp"
#include "dengue/evaluation.hpp"
#include "dengue/pareto.hpp"
#include "dengue/risk.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dengue {

enum class Command { synth, calibrate, detect, baseline, evaluate, report };

[[nodiscard]] std::string_view to_string(Command command) noexcept;
[[nodiscard]] std::optional<Command> parse_command(std::string_view text) noexcept;

/// Loads every configured series plus the mobility matrix and aligns them.
/// A missing file raises UsageError naming the path.
[[nodiscard]] Panel load_panel(const RunConfig &config);
[[nodiscard]] OutbreakCalendar load_actual(const RunConfig &config);

struct DetectionRun {
    Calibration calibration;
    RiskSeries risk;
    Detection detection;
};

[[nodiscard]] DetectionRun run_detection(const Panel &panel, const RunConfig &config);

struct BaselineRun {
    Lags lags;
    GlmCoefficients coefficients;
    double threshold = 0.0;
    std::vector<BaselineMonth> months;
};

[[nodiscard]] BaselineRun run_baseline(const Panel &panel, const RunConfig &config, const Lags &lags);

struct MethodScore {
    std::string name;
    std::vector<MonthIndex> predicted;
    EvalResult result;
};

/// Scores each named prediction list over `span`; months outside the span
/// are dropped from both predictions and ground truth first.
[[nodiscard]] std::vector<MethodScore> score_methods(
    const std::vector<std::pair<std::string, std::vector<MonthIndex>>> &methods, const OutbreakCalendar &actual,
    MonthSpan span, int match_window);

// -- artifacts ---------------------------------------------------------------

[[nodiscard]] std::string calibration_json(const Calibration &calibration);
/// date, R, L, d1, d2.
[[nodiscard]] std::string risk_csv(const RiskSeries &risk);
/// date, d1, d2, rank, flag, reliability.
[[nodiscard]] std::string flagged_csv(const Detection &detection);
/// date, D_fitted, predicted_flag.
[[nodiscard]] std::string baseline_csv(const BaselineRun &baseline);
[[nodiscard]] std::string baseline_json(const BaselineRun &baseline, double threshold_quantile);
[[nodiscard]] std::string evaluation_json(const std::vector<MethodScore> &scores, const OutbreakCalendar &actual,
                                          MonthSpan span, int match_window);

/// Runs one command and returns the artifacts written, in write order.
std::vector<std::filesystem::path> run(Command command, const RunConfig &config);

} // namespace dengue
