#include "dengue/config.hpp"

#include "dengue/error.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace dengue {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct Context {
    std::string_view source;
    std::filesystem::path base_dir;

    [[nodiscard]] ConfigError error(const std::string &key, const std::string &what) const
    {
        return ConfigError(fmt::format("{}: '{}' {}", source, key, what));
    }
};

std::string join_key(const std::string &section, std::string_view key)
{
    return section.empty() ? std::string(key) : section + "." + std::string(key);
}

void require_object(const Context &ctx, const json &j, const std::string &key)
{
    if (!j.is_object()) {
        throw ctx.error(key.empty() ? "<root>" : key, "must be an object");
    }
}

void check_keys(const Context &ctx, const json &obj, const std::string &section,
                std::initializer_list<std::string_view> allowed)
{
    for (const auto &item : obj.items()) {
        bool known = false;
        for (auto a : allowed) {
            known = known || item.key() == a;
        }
        if (!known) {
            throw ctx.error(join_key(section, item.key()), "is not a recognized key");
        }
    }
}

double as_number(const Context &ctx, const json &j, const std::string &key)
{
    if (!j.is_number()) {
        throw ctx.error(key, "must be a number");
    }
    return j.get<double>();
}

int as_int(const Context &ctx, const json &j, const std::string &key)
{
    if (!j.is_number_integer()) {
        throw ctx.error(key, "must be an integer");
    }
    return j.get<int>();
}

bool as_bool(const Context &ctx, const json &j, const std::string &key)
{
    if (!j.is_boolean()) {
        throw ctx.error(key, "must be true or false");
    }
    return j.get<bool>();
}

std::string as_string(const Context &ctx, const json &j, const std::string &key)
{
    if (!j.is_string()) {
        throw ctx.error(key, "must be a string");
    }
    return j.get<std::string>();
}

std::filesystem::path as_path(const Context &ctx, const json &j, const std::string &key)
{
    std::filesystem::path p = as_string(ctx, j, key);
    return p.is_relative() && !ctx.base_dir.empty() ? ctx.base_dir / p : p;
}

MonthIndex as_month(const Context &ctx, const json &j, const std::string &key)
{
    try {
        return MonthIndex::parse(as_string(ctx, j, key));
    } catch (const ParameterError &e) {
        throw ctx.error(key, e.what());
    }
}

// Calls fn(value, key) for each present, non-null member of `obj` named `name`.
template <class Fn> void with(const json &obj, const std::string &section, std::string_view name, Fn &&fn)
{
    auto it = obj.find(name);
    if (it != obj.end() && !it->is_null()) {
        fn(*it, join_key(section, name));
    }
}

Lags parse_lags(const Context &ctx, const json &j, const std::string &key)
{
    require_object(ctx, j, key);
    check_keys(ctx, j, key, {"rainfall", "temperature", "humidity", "mobility"});
    Lags lags;
    with(j, key, "rainfall", [&](const json &v, const std::string &k) { lags.rainfall = as_int(ctx, v, k); });
    with(j, key, "temperature", [&](const json &v, const std::string &k) { lags.temperature = as_int(ctx, v, k); });
    with(j, key, "humidity", [&](const json &v, const std::string &k) { lags.humidity = as_int(ctx, v, k); });
    with(j, key, "mobility", [&](const json &v, const std::string &k) { lags.mobility = as_int(ctx, v, k); });
    return lags;
}

Exponents parse_exponents(const Context &ctx, const json &j, const std::string &key)
{
    require_object(ctx, j, key);
    check_keys(ctx, j, key, {"rainfall", "temperature", "humidity", "mobility"});
    Exponents c;
    with(j, key, "rainfall", [&](const json &v, const std::string &k) { c.rainfall = as_number(ctx, v, k); });
    with(j, key, "temperature", [&](const json &v, const std::string &k) { c.temperature = as_number(ctx, v, k); });
    with(j, key, "humidity", [&](const json &v, const std::string &k) { c.humidity = as_number(ctx, v, k); });
    with(j, key, "mobility", [&](const json &v, const std::string &k) { c.mobility = as_number(ctx, v, k); });
    return c;
}

PiecewiseLinearMF parse_mf(const Context &ctx, const json &j, const std::string &key)
{
    if (!j.is_array()) {
        throw ctx.error(key, "must be an array of [x, y] pairs");
    }
    std::vector<Breakpoint> points;
    for (const auto &p : j) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            throw ctx.error(key, "must be an array of [x, y] pairs");
        }
        points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    try {
        return PiecewiseLinearMF(std::move(points));
    } catch (const ParameterError &e) {
        throw ctx.error(key, e.what());
    }
}

ordered_json mf_json(const PiecewiseLinearMF &mf)
{
    ordered_json out = ordered_json::array();
    for (const auto &p : mf.breakpoints()) {
        out.push_back({p.x, p.y});
    }
    return out;
}

ordered_json lags_json(const Lags &l)
{
    return {{"rainfall", l.rainfall}, {"temperature", l.temperature}, {"humidity", l.humidity}, {"mobility", l.mobility}};
}

void parse_inputs(const Context &ctx, const json &j, RunConfig &cfg)
{
    const std::string key = "inputs";
    require_object(ctx, j, key);
    check_keys(ctx, j, key,
               {"rainfall", "temperature", "humidity", "incidence", "susceptible", "population", "mobility", "outbreaks",
                "predicted"});
    auto set = [&](std::string_view name, std::optional<std::filesystem::path> &slot) {
        with(j, key, name, [&](const json &v, const std::string &k) { slot = as_path(ctx, v, k); });
    };
    set("rainfall", cfg.inputs.rainfall);
    set("temperature", cfg.inputs.temperature);
    set("humidity", cfg.inputs.humidity);
    set("incidence", cfg.inputs.incidence);
    set("susceptible", cfg.inputs.susceptible);
    set("population", cfg.inputs.population);
    set("mobility", cfg.inputs.mobility);
    set("outbreaks", cfg.inputs.outbreaks);
    set("predicted", cfg.inputs.predicted);
}

void parse_calibration(const Context &ctx, const json &j, RunConfig &cfg)
{
    const std::string key = "calibration";
    require_object(ctx, j, key);
    check_keys(ctx, j, key, {"search_lags", "max_lag", "rain_grid_step", "rain_shoulder"});
    auto &c = cfg.calibration;
    with(j, key, "search_lags", [&](const json &v, const std::string &k) { c.search_lags = as_bool(ctx, v, k); });
    with(j, key, "max_lag", [&](const json &v, const std::string &k) { c.max_lag = as_int(ctx, v, k); });
    with(j, key, "rain_grid_step", [&](const json &v, const std::string &k) { c.rain_grid_step = as_number(ctx, v, k); });
    with(j, key, "rain_shoulder", [&](const json &v, const std::string &k) { c.rain_shoulder = as_number(ctx, v, k); });
}

void parse_risk(const Context &ctx, const json &j, RunConfig &cfg)
{
    const std::string key = "risk";
    require_object(ctx, j, key);
    check_keys(ctx, j, key, {"lags", "exponents", "r_ideal", "l_ideal", "mobility_c", "incidence_peak"});
    auto &c = cfg.calibration;
    with(j, key, "lags", [&](const json &v, const std::string &k) { c.fixed_lags = parse_lags(ctx, v, k); });
    with(j, key, "exponents", [&](const json &v, const std::string &k) { c.exponents = parse_exponents(ctx, v, k); });
    with(j, key, "r_ideal", [&](const json &v, const std::string &k) { cfg.r_ideal = as_number(ctx, v, k); });
    with(j, key, "l_ideal", [&](const json &v, const std::string &k) { cfg.l_ideal = as_number(ctx, v, k); });
    with(j, key, "mobility_c", [&](const json &v, const std::string &k) { c.mobility_c = as_number(ctx, v, k); });
    with(j, key, "incidence_peak", [&](const json &v, const std::string &k) { c.incidence_peak = as_number(ctx, v, k); });
}

void parse_membership(const Context &ctx, const json &j, RunConfig &cfg)
{
    const std::string key = "membership";
    require_object(ctx, j, key);
    check_keys(ctx, j, key, {"rainfall", "temperature", "humidity", "mobility"});
    auto &c = cfg.calibration;
    with(j, key, "rainfall", [&](const json &v, const std::string &k) { c.rainfall_mf = parse_mf(ctx, v, k); });
    with(j, key, "temperature", [&](const json &v, const std::string &k) { c.temperature_mf = parse_mf(ctx, v, k); });
    with(j, key, "humidity", [&](const json &v, const std::string &k) { c.humidity_mf = parse_mf(ctx, v, k); });
    with(j, key, "mobility", [&](const json &v, const std::string &k) { c.mobility_mf = parse_mf(ctx, v, k); });
}

void parse_synth(const Context &ctx, const json &j, RunConfig &cfg)
{
    const std::string key = "synth";
    require_object(ctx, j, key);
    check_keys(ctx, j, key,
               {"start", "months", "seed", "planted_lags", "rain_band", "outbreak_months", "noise_scale", "region"});
    auto &s = cfg.synth;
    with(j, key, "start", [&](const json &v, const std::string &k) { s.start = as_month(ctx, v, k); });
    with(j, key, "months", [&](const json &v, const std::string &k) { s.months = as_int(ctx, v, k); });
    with(j, key, "seed", [&](const json &v, const std::string &k) {
        if (!v.is_number_unsigned()) {
            throw ctx.error(k, "must be a non-negative integer");
        }
        s.seed = v.get<std::uint64_t>();
    });
    with(j, key, "planted_lags", [&](const json &v, const std::string &k) { s.planted_lags = parse_lags(ctx, v, k); });
    with(j, key, "rain_band", [&](const json &v, const std::string &k) {
        if (!v.is_array() || v.size() != 2) {
            throw ctx.error(k, "must be [r_min, r_max]");
        }
        s.rain_band_min = as_number(ctx, v[0], k);
        s.rain_band_max = as_number(ctx, v[1], k);
    });
    with(j, key, "outbreak_months", [&](const json &v, const std::string &k) {
        if (!v.is_array()) {
            throw ctx.error(k, "must be an array of YYYY-MM strings");
        }
        s.outbreak_months.clear();
        for (const auto &m : v) {
            s.outbreak_months.push_back(as_month(ctx, m, k));
        }
    });
    with(j, key, "noise_scale", [&](const json &v, const std::string &k) { s.noise_scale = as_number(ctx, v, k); });
    with(j, key, "region", [&](const json &v, const std::string &k) { s.region = as_string(ctx, v, k); });
}

} // namespace

std::string_view to_string(InputKind kind) noexcept
{
    switch (kind) {
    case InputKind::rainfall: return "rainfall";
    case InputKind::temperature: return "temperature";
    case InputKind::humidity: return "humidity";
    case InputKind::incidence: return "incidence";
    case InputKind::susceptible: return "susceptible";
    case InputKind::population: return "population";
    case InputKind::mobility: return "mobility";
    case InputKind::outbreaks: return "outbreaks";
    case InputKind::predicted: return "predicted";
    }
    return "?";
}

void RunConfig::validate() const
{
    auto fail = [](const std::string &what) { return ConfigError(what); };
    if (region.empty()) {
        throw fail("region must be named");
    }
    if (calibration.max_lag < 0) {
        throw fail(fmt::format("calibration.max_lag must be >= 0, got {}", calibration.max_lag));
    }
    if (!(calibration.rain_grid_step > 0.0)) {
        throw fail(fmt::format("calibration.rain_grid_step must be > 0, got {}", calibration.rain_grid_step));
    }
    if (!(calibration.rain_shoulder > 0.0)) {
        throw fail(fmt::format("calibration.rain_shoulder must be > 0, got {}", calibration.rain_shoulder));
    }
    for (int lag : calibration.fixed_lags.as_array()) {
        if (lag < 0) {
            throw fail(fmt::format("risk.lags must be >= 0, got {}", lag));
        }
    }
    RiskParams probe;
    probe.r_ideal = r_ideal;
    probe.l_ideal = l_ideal;
    probe.mobility_c = calibration.mobility_c;
    probe.incidence_peak = calibration.incidence_peak;
    if (calibration.exponents) {
        probe.exponents = *calibration.exponents;
    }
    try {
        probe.validate();
    } catch (const ParameterError &e) {
        throw fail(fmt::format("risk: {}", e.what()));
    }
    if (rank_threshold < 1) {
        throw fail(fmt::format("detection.rank_threshold must be >= 1, got {}", rank_threshold));
    }
    if (!(threshold_quantile > 0.0 && threshold_quantile < 1.0)) {
        throw fail(fmt::format("baseline.threshold_quantile must lie in (0, 1), got {}", threshold_quantile));
    }
    if (match_window < 0) {
        throw fail(fmt::format("evaluation.match_window must be >= 0, got {}", match_window));
    }
    synth.validate();
}

RunConfig parse_config(std::string_view text, const std::filesystem::path &base_dir, std::string_view source)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        throw ConfigError(fmt::format("{}: invalid JSON: {}", source, e.what()));
    }
    Context ctx{source, base_dir};
    require_object(ctx, doc, "");
    check_keys(ctx, doc, "",
               {"region", "data_dir", "inputs", "output_dir", "calibration", "risk", "membership", "detection",
                "baseline", "evaluation", "synth"});

    RunConfig cfg;
    with(doc, "", "region", [&](const json &v, const std::string &k) { cfg.region = as_string(ctx, v, k); });
    with(doc, "", "data_dir", [&](const json &v, const std::string &k) { cfg.data_dir = as_path(ctx, v, k); });
    with(doc, "", "output_dir", [&](const json &v, const std::string &k) { cfg.output_dir = as_path(ctx, v, k); });
    with(doc, "", "inputs", [&](const json &v, const std::string &) { parse_inputs(ctx, v, cfg); });
    with(doc, "", "calibration", [&](const json &v, const std::string &) { parse_calibration(ctx, v, cfg); });
    with(doc, "", "risk", [&](const json &v, const std::string &) { parse_risk(ctx, v, cfg); });
    with(doc, "", "membership", [&](const json &v, const std::string &) { parse_membership(ctx, v, cfg); });
    with(doc, "", "detection", [&](const json &v, const std::string &k) {
        require_object(ctx, v, k);
        check_keys(ctx, v, k, {"rank_threshold"});
        with(v, k, "rank_threshold", [&](const json &x, const std::string &kk) { cfg.rank_threshold = as_int(ctx, x, kk); });
    });
    with(doc, "", "baseline", [&](const json &v, const std::string &k) {
        require_object(ctx, v, k);
        check_keys(ctx, v, k, {"threshold_quantile"});
        with(v, k, "threshold_quantile",
             [&](const json &x, const std::string &kk) { cfg.threshold_quantile = as_number(ctx, x, kk); });
    });
    with(doc, "", "evaluation", [&](const json &v, const std::string &k) {
        require_object(ctx, v, k);
        check_keys(ctx, v, k, {"match_window", "span"});
        with(v, k, "match_window", [&](const json &x, const std::string &kk) { cfg.match_window = as_int(ctx, x, kk); });
        with(v, k, "span", [&](const json &x, const std::string &kk) {
            try {
                cfg.evaluation_span = MonthSpan::parse(as_string(ctx, x, kk));
            } catch (const ParameterError &e) {
                throw ctx.error(kk, e.what());
            }
        });
    });
    with(doc, "", "synth", [&](const json &v, const std::string &) { parse_synth(ctx, v, cfg); });

    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError(fmt::format("cannot open config '{}'", path.string()));
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path(), path.string());
}

std::string format_defaults()
{
    const RunConfig cfg;
    const SynthConfig &s = cfg.synth;
    ordered_json outbreaks = ordered_json::array();
    for (auto m : s.resolved_outbreaks()) {
        outbreaks.push_back(m.to_string());
    }
    ordered_json doc = {
        {"region", cfg.region},
        {"data_dir", nullptr},
        {"inputs",
         {{"rainfall", nullptr},
          {"temperature", nullptr},
          {"humidity", nullptr},
          {"incidence", nullptr},
          {"susceptible", nullptr},
          {"population", nullptr},
          {"mobility", nullptr},
          {"outbreaks", nullptr},
          {"predicted", nullptr}}},
        {"output_dir", cfg.output_dir.string()},
        {"calibration",
         {{"search_lags", cfg.calibration.search_lags},
          {"max_lag", cfg.calibration.max_lag},
          {"rain_grid_step", cfg.calibration.rain_grid_step},
          {"rain_shoulder", cfg.calibration.rain_shoulder}}},
        {"risk",
         {{"lags", lags_json(cfg.calibration.fixed_lags)},
          {"exponents", nullptr},
          {"r_ideal", cfg.r_ideal},
          {"l_ideal", cfg.l_ideal},
          {"mobility_c", nullptr},
          {"incidence_peak", nullptr}}},
        {"membership",
         {{"rainfall", nullptr},
          {"temperature", mf_json(temperature_mf_default())},
          {"humidity", mf_json(humidity_mf_default())},
          {"mobility", nullptr}}},
        {"detection", {{"rank_threshold", cfg.rank_threshold}}},
        {"baseline", {{"threshold_quantile", cfg.threshold_quantile}}},
        {"evaluation", {{"match_window", cfg.match_window}, {"span", nullptr}}},
        {"synth",
         {{"start", s.start.to_string()},
          {"months", s.months},
          {"seed", s.seed},
          {"planted_lags", lags_json(s.planted_lags)},
          {"rain_band", {s.rain_band_min, s.rain_band_max}},
          {"outbreak_months", outbreaks},
          {"noise_scale", s.noise_scale},
          {"region", s.region}}},
    };
    return doc.dump(2) + "\n";
}

std::filesystem::path input_path(const RunConfig &config, InputKind kind)
{
    const auto &in = config.inputs;
    const std::optional<std::filesystem::path> *slot = nullptr;
    switch (kind) {
    case InputKind::rainfall: slot = &in.rainfall; break;
    case InputKind::temperature: slot = &in.temperature; break;
    case InputKind::humidity: slot = &in.humidity; break;
    case InputKind::incidence: slot = &in.incidence; break;
    case InputKind::susceptible: slot = &in.susceptible; break;
    case InputKind::population: slot = &in.population; break;
    case InputKind::mobility: slot = &in.mobility; break;
    case InputKind::outbreaks: slot = &in.outbreaks; break;
    case InputKind::predicted: slot = &in.predicted; break;
    }
    if (slot != nullptr && *slot) {
        return **slot;
    }
    if (kind == InputKind::predicted) {
        throw UsageError("no path for the predicted months (set --predicted or inputs.predicted)");
    }
    if (!config.data_dir) {
        throw UsageError(fmt::format("no path for the {} input (set --data or inputs.{})", to_string(kind),
                                     to_string(kind)));
    }
    return *config.data_dir / (std::string(to_string(kind)) + ".csv");
}

} // namespace dengue
