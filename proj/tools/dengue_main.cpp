#include "dengue/config.hpp"
#include "dengue/error.hpp"
#include "dengue/pipeline.hpp"

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

/// Raw command-line values; applied on top of the config file.
struct Overrides {
    std::string config;
    std::string data;
    std::string out;
    std::string region;
    std::string actual;
    std::string predicted;
    std::string span;
    std::optional<int> rank_threshold;
    std::optional<int> window;
    std::optional<double> quantile;
    std::optional<std::uint64_t> seed;
    std::optional<int> months;
    std::optional<double> noise;
};

void add_common(CLI::App *cmd, Overrides &o)
{
    cmd->add_option("--config", o.config, "JSON config file");
    cmd->add_option("--data", o.data, "Directory holding the standard input CSVs");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--region", o.region, "Target region");
}

dengue::RunConfig resolve(const Overrides &o)
{
    dengue::RunConfig cfg = o.config.empty() ? dengue::RunConfig{} : dengue::load_config(o.config);
    if (!o.data.empty()) {
        cfg.data_dir = o.data;
    }
    if (!o.out.empty()) {
        cfg.output_dir = o.out;
    }
    if (!o.region.empty()) {
        cfg.region = o.region;
    }
    if (!o.actual.empty()) {
        cfg.inputs.outbreaks = o.actual;
    }
    if (!o.predicted.empty()) {
        cfg.inputs.predicted = o.predicted;
    }
    if (!o.span.empty()) {
        try {
            cfg.evaluation_span = dengue::MonthSpan::parse(o.span);
        } catch (const dengue::ParameterError &e) {
            throw dengue::UsageError(fmt::format("--span: {}", e.what()));
        }
    }
    if (o.rank_threshold) {
        cfg.rank_threshold = *o.rank_threshold;
    }
    if (o.window) {
        cfg.match_window = *o.window;
    }
    if (o.quantile) {
        cfg.threshold_quantile = *o.quantile;
    }
    if (o.seed) {
        cfg.synth.seed = *o.seed;
    }
    if (o.months) {
        cfg.synth.months = *o.months;
    }
    if (o.noise) {
        cfg.synth.noise_scale = *o.noise;
    }
    return cfg;
}

int exit_code_for(const dengue::Error &e)
{
    std::string_view kind = e.kind();
    return kind == "usage" || kind == "config" ? kExitUsage : kExitData;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Dengue outbreak detection from climate, mobility and incidence panels", "dengue"};
    app.require_subcommand(0, 1);
    bool print_defaults = false;
    app.add_flag("--print-defaults", print_defaults, "Print the default config as JSON and exit");

    Overrides o;
    auto *synth = app.add_subcommand("synth", "Write a seeded synthetic panel with planted outbreaks");
    add_common(synth, o);
    synth->add_option("--seed", o.seed, "Generator seed");
    synth->add_option("--months", o.months, "Number of months");
    synth->add_option("--noise", o.noise, "Incidence noise as a fraction of its standard deviation");

    auto *calibrate = app.add_subcommand("calibrate", "Estimate lags, rainfall cutoffs and exponents");
    add_common(calibrate, o);

    auto *detect = app.add_subcommand("detect", "Rank the objective plane and flag outbreak months");
    add_common(detect, o);
    detect->add_option("--rank-threshold", o.rank_threshold, "Largest dominance rank flagged as near-front");

    auto *baseline = app.add_subcommand("baseline", "Fit the linear regression baseline");
    add_common(baseline, o);
    baseline->add_option("--quantile", o.quantile, "Threshold quantile for predicted peaks");

    auto *evaluate = app.add_subcommand("evaluate", "Score a predicted month list against actual outbreaks");
    add_common(evaluate, o);
    evaluate->add_option("--predicted", o.predicted, "CSV with a date column (and optional predicted_flag)");
    evaluate->add_option("--actual", o.actual, "CSV of actual outbreak months");
    evaluate->add_option("--span", o.span, "Evaluated months, YYYY-MM..YYYY-MM");
    evaluate->add_option("--window", o.window, "Match window in months");

    auto *report = app.add_subcommand("report", "Run the full pipeline and write every artifact");
    add_common(report, o);
    report->add_option("--actual", o.actual, "CSV of actual outbreak months");
    report->add_option("--span", o.span, "Evaluated months, YYYY-MM..YYYY-MM");
    report->add_option("--window", o.window, "Match window in months");
    report->add_option("--rank-threshold", o.rank_threshold, "Largest dominance rank flagged as near-front");
    report->add_option("--quantile", o.quantile, "Threshold quantile for predicted peaks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::fprintf(stderr, "error[usage]: %s\n", e.what());
        return kExitUsage;
    }

    if (print_defaults) {
        std::fputs(dengue::format_defaults().c_str(), stdout);
        return 0;
    }
    auto selected = app.get_subcommands();
    if (selected.empty()) {
        std::fprintf(stderr, "error[usage]: a subcommand is required (synth, calibrate, detect, baseline, evaluate, report)\n");
        return kExitUsage;
    }
    auto command = dengue::parse_command(selected.front()->get_name());

    try {
        auto written = dengue::run(*command, resolve(o));
        for (const auto &path : written) {
            std::printf("%s\n", path.string().c_str());
        }
    } catch (const dengue::Error &e) {
        std::fprintf(stderr, "error[%s]: %s\n", e.kind(), e.what());
        return exit_code_for(e);
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error[internal]: %s\n", e.what());
        return kExitData;
    }
    return 0;
}
