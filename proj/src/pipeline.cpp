#include "dengue/pipeline.hpp"

#include "dengue/error.hpp"
#include "dengue/svg.hpp"
#include "dengue/synth.hpp"

#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

namespace dengue {

namespace {

using nlohmann::ordered_json;

constexpr std::string_view kCalibrationFile = "calibration.json";
constexpr std::string_view kRiskFile = "risk.csv";
constexpr std::string_view kFlaggedFile = "flagged.csv";
constexpr std::string_view kPlaneFile = "objective_plane.svg";
constexpr std::string_view kBaselineFile = "baseline.csv";
constexpr std::string_view kBaselineModelFile = "baseline.json";
constexpr std::string_view kEvaluationFile = "evaluation.json";

std::filesystem::path existing_input(const RunConfig &config, InputKind kind)
{
    auto path = input_path(config, kind);
    if (!std::filesystem::is_regular_file(path)) {
        throw UsageError(fmt::format("{} input '{}' does not exist", to_string(kind), path.string()));
    }
    return path;
}

class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir))
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) {
            throw IngestError(fmt::format("cannot create output directory '{}': {}", dir_.string(), ec.message()));
        }
    }

    void write(std::string_view name, const std::string &text)
    {
        auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        out << text;
        if (!out) {
            throw IngestError(fmt::format("cannot write '{}'", path.string()));
        }
        written_.push_back(std::move(path));
    }

    std::vector<std::filesystem::path> take() { return std::move(written_); }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
};

ordered_json months_json(const std::vector<MonthIndex> &months)
{
    ordered_json out = ordered_json::array();
    for (auto m : months) {
        out.push_back(m.to_string());
    }
    return out;
}

ordered_json mf_json(const PiecewiseLinearMF &mf)
{
    ordered_json out = ordered_json::array();
    for (const auto &p : mf.breakpoints()) {
        out.push_back({p.x, p.y});
    }
    return out;
}

ordered_json optional_json(const std::optional<double> &v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

MonthSpan risk_span(const RiskSeries &risk) { return {risk.months.front().t, risk.months.back().t}; }

} // namespace

std::string_view to_string(Command command) noexcept
{
    switch (command) {
    case Command::synth: return "synth";
    case Command::calibrate: return "calibrate";
    case Command::detect: return "detect";
    case Command::baseline: return "baseline";
    case Command::evaluate: return "evaluate";
    case Command::report: return "report";
    }
    return "?";
}

std::optional<Command> parse_command(std::string_view text) noexcept
{
    for (auto c : {Command::synth, Command::calibrate, Command::detect, Command::baseline, Command::evaluate,
                   Command::report}) {
        if (to_string(c) == text) {
            return c;
        }
    }
    return std::nullopt;
}

Panel load_panel(const RunConfig &config)
{
    std::vector<MonthlySeries> series;
    auto add = [&](InputKind kind, Variable variable) {
        for (auto &s : load_series_all(existing_input(config, kind), variable)) {
            series.push_back(std::move(s));
        }
    };
    add(InputKind::rainfall, Variable::rainfall_mm);
    add(InputKind::temperature, Variable::temperature_c);
    add(InputKind::humidity, Variable::humidity_pct);
    add(InputKind::incidence, Variable::incidence_count);
    add(InputKind::susceptible, Variable::susceptible_count);
    add(InputKind::population, Variable::population_count);
    auto mobility = load_mobility(existing_input(config, InputKind::mobility));
    return align(Panel(std::move(series), std::move(mobility)));
}

OutbreakCalendar load_actual(const RunConfig &config)
{
    return OutbreakCalendar(load_month_list(existing_input(config, InputKind::outbreaks)));
}

DetectionRun run_detection(const Panel &panel, const RunConfig &config)
{
    DetectionRun out;
    out.calibration = calibrate_panel(panel, config.region, config.calibration);
    out.risk = objective_space(panel, out.calibration.mfs, out.calibration.risk_params(config.r_ideal, config.l_ideal),
                               config.region);
    out.detection = detect_outbreaks(out.risk, config.rank_threshold);
    return out;
}

BaselineRun run_baseline(const Panel &panel, const RunConfig &config, const Lags &lags)
{
    BaselineRun out;
    out.lags = lags;
    auto design = build_design(panel, config.region, lags);
    out.coefficients = fit_ols(design.X, design.y);
    out.months = predict_and_extract(out.coefficients, design, config.threshold_quantile);
    std::vector<double> fitted;
    fitted.reserve(out.months.size());
    for (const auto &m : out.months) {
        fitted.push_back(m.fitted);
    }
    out.threshold = quantile(std::move(fitted), config.threshold_quantile);
    return out;
}

std::vector<MethodScore> score_methods(const std::vector<std::pair<std::string, std::vector<MonthIndex>>> &methods,
                                       const OutbreakCalendar &actual, MonthSpan span, int match_window)
{
    auto inside = [&](const std::vector<MonthIndex> &months) {
        std::vector<MonthIndex> out;
        for (auto m : months) {
            if (span.contains(m)) {
                out.push_back(m);
            }
        }
        return out;
    };
    const OutbreakCalendar truth(inside(actual.months()));
    std::vector<MethodScore> out;
    for (const auto &[name, predicted] : methods) {
        auto kept = inside(predicted);
        auto result = score(kept, truth, span, match_window);
        out.push_back({name, std::move(kept), result});
    }
    return out;
}

std::string calibration_json(const Calibration &cal)
{
    auto factor = [](const FactorCalibration &f) {
        return ordered_json{{"lag", f.lag}, {"r", optional_json(f.correlation)}};
    };
    ordered_json cutoffs = nullptr;
    if (cal.cutoffs) {
        cutoffs = {{"r_min", cal.cutoffs->r_min}, {"r_max", cal.cutoffs->r_max}, {"r", cal.cutoffs->correlation}};
    }
    ordered_json membership_r = nullptr;
    if (cal.membership_correlations) {
        const auto &r = *cal.membership_correlations;
        membership_r = {{"rainfall", r[0]}, {"temperature", r[1]}, {"humidity", r[2]}, {"mobility", r[3]}};
    }
    ordered_json doc = {
        {"region", cal.region},
        {"lags",
         {{"rainfall", factor(cal.rainfall)},
          {"temperature", factor(cal.temperature)},
          {"humidity", factor(cal.humidity)},
          {"mobility", factor(cal.mobility)}}},
        {"rainfall_cutoffs", cutoffs},
        {"membership_correlations", membership_r},
        {"exponents",
         {{"rainfall", cal.exponents.rainfall},
          {"temperature", cal.exponents.temperature},
          {"humidity", cal.exponents.humidity},
          {"mobility", cal.exponents.mobility}}},
        {"mobility_c", cal.mobility_c},
        {"incidence_peak", cal.incidence_peak},
        {"membership",
         {{"rainfall", mf_json(cal.mfs.rainfall)},
          {"temperature", mf_json(cal.mfs.temperature)},
          {"humidity", mf_json(cal.mfs.humidity)},
          {"mobility", mf_json(cal.mfs.mobility)}}},
    };
    return doc.dump(2) + "\n";
}

std::string risk_csv(const RiskSeries &risk)
{
    std::string out = "date,R,L,d1,d2\n";
    for (const auto &m : risk.months) {
        out += fmt::format("{},{},{},{},{}\n", m.t.to_string(), format_number(m.R), format_number(m.L),
                           format_number(m.d1), format_number(m.d2));
    }
    return out;
}

std::string flagged_csv(const Detection &detection)
{
    std::string out = "date,d1,d2,rank,flag,reliability\n";
    for (const auto &f : detection.flagged) {
        out += fmt::format("{},{},{},{},{},{}\n", f.t.to_string(), format_number(f.d1), format_number(f.d2), f.rank,
                           to_string(f.flag), format_number(f.reliability));
    }
    return out;
}

std::string baseline_csv(const BaselineRun &baseline)
{
    std::string out = "date,D_fitted,predicted_flag\n";
    for (const auto &m : baseline.months) {
        out += fmt::format("{},{},{}\n", m.t.to_string(), format_number(m.fitted), m.predicted ? 1 : 0);
    }
    return out;
}

std::string baseline_json(const BaselineRun &baseline, double threshold_quantile)
{
    ordered_json coefficients;
    for (std::size_t i = 0; i < kDesignColumns.size(); ++i) {
        coefficients[std::string(kDesignColumns[i])] = baseline.coefficients.b[i];
    }
    const auto &l = baseline.lags;
    ordered_json doc = {
        {"lags", {{"rainfall", l.rainfall}, {"temperature", l.temperature}, {"humidity", l.humidity},
                  {"mobility", l.mobility}}},
        {"coefficients", coefficients},
        {"threshold_quantile", threshold_quantile},
        {"threshold", baseline.threshold},
        {"predicted", months_json(predicted_months(baseline.months))},
    };
    return doc.dump(2) + "\n";
}

std::string evaluation_json(const std::vector<MethodScore> &scores, const OutbreakCalendar &actual, MonthSpan span,
                            int match_window)
{
    std::vector<MonthIndex> truth;
    for (auto m : actual.months()) {
        if (span.contains(m)) {
            truth.push_back(m);
        }
    }
    ordered_json methods = ordered_json::object();
    for (const auto &s : scores) {
        methods[s.name] = {
            {"predicted", months_json(s.predicted)},
            {"matches", s.result.matches},
            {"false_positives", s.result.false_positives},
            {"false_negatives", s.result.false_negatives},
            {"error_rate", s.result.error_rate},
        };
    }
    ordered_json doc = {
        {"span", span.to_string()},
        {"total_months", span.length()},
        {"match_window", match_window},
        {"actual", months_json(truth)},
        {"methods", methods},
    };
    return doc.dump(2) + "\n";
}

std::vector<std::filesystem::path> run(Command command, const RunConfig &config)
{
    config.validate();
    ArtifactWriter out(config.output_dir);
    switch (command) {
    case Command::synth:
        return write_synth(generate(config.synth), config.output_dir);
    case Command::calibrate: {
        auto panel = load_panel(config);
        out.write(kCalibrationFile, calibration_json(calibrate_panel(panel, config.region, config.calibration)));
        break;
    }
    case Command::detect: {
        auto panel = load_panel(config);
        auto det = run_detection(panel, config);
        out.write(kRiskFile, risk_csv(det.risk));
        out.write(kFlaggedFile, flagged_csv(det.detection));
        out.write(kPlaneFile, objective_plane_svg(det.detection, fmt::format("Objective plane, region {}", config.region)));
        break;
    }
    case Command::baseline: {
        auto panel = load_panel(config);
        auto cal = calibrate_panel(panel, config.region, config.calibration);
        auto base = run_baseline(panel, config, cal.lags());
        out.write(kBaselineFile, baseline_csv(base));
        out.write(kBaselineModelFile, baseline_json(base, config.threshold_quantile));
        break;
    }
    case Command::evaluate: {
        if (!config.evaluation_span) {
            throw UsageError("evaluate needs an evaluation span (--span or evaluation.span)");
        }
        auto predicted = load_month_list(existing_input(config, InputKind::predicted));
        auto actual = load_actual(config);
        auto scores = score_methods({{"predicted", predicted}}, actual, *config.evaluation_span, config.match_window);
        out.write(kEvaluationFile, evaluation_json(scores, actual, *config.evaluation_span, config.match_window));
        break;
    }
    case Command::report: {
        auto panel = load_panel(config);
        auto actual = load_actual(config);
        auto det = run_detection(panel, config);
        auto base = run_baseline(panel, config, det.calibration.lags());
        const MonthSpan span = config.evaluation_span.value_or(risk_span(det.risk));
        auto scores = score_methods({{"multicriteria", det.detection.flagged_months()},
                                     {"regression", predicted_months(base.months)}},
                                    actual, span, config.match_window);
        out.write(kCalibrationFile, calibration_json(det.calibration));
        out.write(kRiskFile, risk_csv(det.risk));
        out.write(kFlaggedFile, flagged_csv(det.detection));
        out.write(kBaselineFile, baseline_csv(base));
        out.write(kBaselineModelFile, baseline_json(base, config.threshold_quantile));
        out.write(kEvaluationFile, evaluation_json(scores, actual, span, config.match_window));
        out.write(kPlaneFile, objective_plane_svg(det.detection, fmt::format("Objective plane, region {}", config.region)));
        break;
    }
    }
    return out.take();
}

} // namespace dengue
