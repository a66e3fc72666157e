#include "dengue/panel.hpp"

#include "dengue/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace dengue {

namespace {

constexpr std::array<std::pair<Variable, std::string_view>, 9> kVariableNames{{
    {Variable::rainfall_mm, "rainfall_mm"},
    {Variable::temperature_c, "temperature_c"},
    {Variable::humidity_pct, "humidity_pct"},
    {Variable::incidence_count, "incidence_count"},
    {Variable::susceptible_count, "susceptible_count"},
    {Variable::population_count, "population_count"},
    {Variable::infected_density, "infected_density"},
    {Variable::mobility_risk, "mobility_risk"},
    {Variable::membership, "membership"},
}};

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        auto comma = line.find(',', pos);
        fields.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return fields;
}

std::optional<double> parse_double(std::string_view text)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

/// Calls `row(line_number, fields)` for every non-blank line after the header.
template <typename RowFn>
void for_each_row(std::string_view text, std::string_view expected_header, std::string_view source, RowFn row)
{
    if (text.starts_with("\xEF\xBB\xBF")) {
        text.remove_prefix(3);
    }
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t rows = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (!header_seen) {
            auto fields = split_fields(line);
            std::string joined;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                joined += (i ? "," : "");
                joined += fields[i];
            }
            if (joined != expected_header) {
                throw IngestError(fmt::format("{}:{}: expected header '{}', got '{}'", source, line_no,
                                              expected_header, line));
            }
            header_seen = true;
            continue;
        }
        row(line_no, split_fields(line));
        ++rows;
    }
    if (rows == 0) {
        throw IngestError(fmt::format("{}: no data rows", source));
    }
}

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestError(fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

std::string_view to_string(Variable v) noexcept
{
    for (const auto &[var, name] : kVariableNames) {
        if (var == v) {
            return name;
        }
    }
    return "unknown";
}

Variable parse_variable(std::string_view name)
{
    for (const auto &[var, text] : kVariableNames) {
        if (text == name) {
            return var;
        }
    }
    throw ParameterError(fmt::format("unknown variable '{}'", name));
}

bool is_nonnegative(Variable v) noexcept
{
    switch (v) {
    case Variable::rainfall_mm:
    case Variable::temperature_c:
    case Variable::humidity_pct:
        return false;
    default:
        return true;
    }
}

std::string format_number(double x)
{
    if (x == 0.0) {
        return "0";
    }
    return fmt::format("{}", x);
}

// -- MonthlySeries -----------------------------------------------------------

MonthlySeries::MonthlySeries(std::string region, Variable variable, MonthIndex start, std::vector<Value> values)
    : region_{std::move(region)}, variable_{variable}, start_{start}, values_{std::move(values)}
{
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!values_[i]) {
            continue;
        }
        double v = *values_[i];
        if (!std::isfinite(v) || (is_nonnegative(variable_) && v < 0.0)) {
            throw ParameterError(fmt::format("{} {} at {}: invalid value {}", region_, to_string(variable_),
                                             (start_ + static_cast<long>(i)).to_string(), v));
        }
    }
}

Value MonthlySeries::at(MonthIndex t) const noexcept
{
    long offset = t - start_;
    if (offset < 0 || offset >= static_cast<long>(values_.size())) {
        return std::nullopt;
    }
    return values_[static_cast<std::size_t>(offset)];
}

std::size_t MonthlySeries::present_count() const noexcept
{
    return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](const Value &v) { return v.has_value(); }));
}

MonthlySeries MonthlySeries::slice(MonthSpan span) const
{
    if (empty() || span.first < start_ || end() < span.last || span.last < span.first) {
        throw ParameterError(fmt::format("slice {} outside series span {}", span.to_string(),
                                         empty() ? std::string("<empty>") : this->span().to_string()));
    }
    auto begin = values_.begin() + (span.first - start_);
    return {region_, variable_, span.first, std::vector<Value>(begin, begin + span.length())};
}

// -- MobilityMatrix ----------------------------------------------------------

MobilityMatrix::MobilityMatrix(std::vector<std::string> regions, std::vector<double> weights)
    : regions_{std::move(regions)}, weights_{std::move(weights)}
{
    if (weights_.size() != regions_.size() * regions_.size()) {
        throw ParameterError(fmt::format("mobility matrix needs {} weights, got {}",
                                         regions_.size() * regions_.size(), weights_.size()));
    }
    if (std::set<std::string>(regions_.begin(), regions_.end()).size() != regions_.size()) {
        throw ParameterError("mobility matrix has duplicate regions");
    }
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ParameterError(fmt::format("mobility weight {} must be finite and >= 0", w));
        }
    }
}

std::optional<std::size_t> MobilityMatrix::index_of(std::string_view region) const noexcept
{
    auto it = std::find(regions_.begin(), regions_.end(), region);
    if (it == regions_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - regions_.begin());
}

double MobilityMatrix::weight(std::string_view from, std::string_view to) const noexcept
{
    auto i = index_of(from);
    auto j = index_of(to);
    if (!i || !j) {
        return 0.0;
    }
    return weight(*i, *j);
}

// -- Panel -------------------------------------------------------------------

Panel::Panel(std::vector<MonthlySeries> series, MobilityMatrix mobility) : mobility_{std::move(mobility)}
{
    for (auto &s : series) {
        SeriesKey key{s.region(), s.variable()};
        if (series_.contains(key)) {
            throw ParameterError(fmt::format("duplicate series {} {}", key.first, to_string(key.second)));
        }
        series_.emplace(std::move(key), std::move(s));
    }
}

const MonthlySeries *Panel::find(std::string_view region, Variable v) const
{
    auto it = series_.find(SeriesKey{std::string(region), v});
    return it == series_.end() ? nullptr : &it->second;
}

const MonthlySeries &Panel::get(std::string_view region, Variable v) const
{
    if (const auto *s = find(region, v)) {
        return *s;
    }
    throw MissingDataError(fmt::format("panel has no {} series for region '{}'", to_string(v), region));
}

std::vector<std::string> Panel::regions() const
{
    std::set<std::string> names;
    for (const auto &[key, s] : series_) {
        names.insert(key.first);
    }
    return {names.begin(), names.end()};
}

// -- ingestion ---------------------------------------------------------------

std::vector<MonthlySeries> parse_series_csv(std::string_view text, Variable variable, std::string_view source)
{
    std::map<std::string, std::map<MonthIndex, Value>> rows;
    for_each_row(text, "region,date,value", source, [&](std::size_t line, const std::vector<std::string_view> &f) {
        if (f.size() != 3) {
            throw IngestError(fmt::format("{}:{}: expected 3 fields, got {}", source, line, f.size()));
        }
        if (f[0].empty()) {
            throw IngestError(fmt::format("{}:{}: empty region", source, line));
        }
        MonthIndex month;
        try {
            month = MonthIndex::parse(f[1]);
        } catch (const ParameterError &) {
            throw IngestError(fmt::format("{}:{}: malformed date '{}'", source, line, f[1]));
        }
        Value value;
        if (!f[2].empty()) {
            value = parse_double(f[2]);
            if (!value) {
                throw IngestError(fmt::format("{}:{}: non-numeric value '{}'", source, line, f[2]));
            }
            if (is_nonnegative(variable) && *value < 0.0) {
                throw IngestError(fmt::format("{}:{}: negative {} value {}", source, line, to_string(variable), f[2]));
            }
        }
        auto &by_month = rows[std::string(f[0])];
        if (!by_month.emplace(month, value).second) {
            throw IngestError(fmt::format("{}:{}: duplicate row for ({}, {})", source, line, f[0], f[1]));
        }
    });

    std::vector<MonthlySeries> out;
    for (auto &[region, by_month] : rows) {
        MonthIndex first = by_month.begin()->first;
        MonthIndex last = by_month.rbegin()->first;
        std::vector<Value> values(static_cast<std::size_t>(last - first + 1));
        for (const auto &[m, v] : by_month) {
            values[static_cast<std::size_t>(m - first)] = v;
        }
        out.emplace_back(region, variable, first, std::move(values));
    }
    return out;
}

std::vector<MonthlySeries> load_series_all(const std::filesystem::path &path, Variable variable)
{
    return parse_series_csv(read_file(path), variable, path.string());
}

MonthlySeries load_series(const std::filesystem::path &path, Variable variable)
{
    auto all = load_series_all(path, variable);
    if (all.size() != 1) {
        throw IngestError(fmt::format("{}: expected a single region, found {}", path.string(), all.size()));
    }
    return std::move(all.front());
}

MobilityMatrix parse_mobility_csv(std::string_view text, std::string_view source)
{
    std::vector<std::string> regions;
    std::map<std::pair<std::string, std::string>, double> entries;
    auto intern = [&](std::string_view name) {
        if (std::find(regions.begin(), regions.end(), name) == regions.end()) {
            regions.emplace_back(name);
        }
    };
    for_each_row(text, "from,to,weight", source, [&](std::size_t line, const std::vector<std::string_view> &f) {
        if (f.size() != 3) {
            throw IngestError(fmt::format("{}:{}: expected 3 fields, got {}", source, line, f.size()));
        }
        if (f[0].empty() || f[1].empty()) {
            throw IngestError(fmt::format("{}:{}: empty region", source, line));
        }
        auto w = parse_double(f[2]);
        if (!w) {
            throw IngestError(fmt::format("{}:{}: non-numeric weight '{}'", source, line, f[2]));
        }
        if (*w < 0.0) {
            throw IngestError(fmt::format("{}:{}: negative weight {}", source, line, f[2]));
        }
        intern(f[0]);
        intern(f[1]);
        if (!entries.emplace(std::pair{std::string(f[0]), std::string(f[1])}, *w).second) {
            throw IngestError(fmt::format("{}:{}: duplicate pair ({}, {})", source, line, f[0], f[1]));
        }
    });
    std::vector<double> weights(regions.size() * regions.size(), 0.0);
    for (const auto &[pair, w] : entries) {
        auto i = static_cast<std::size_t>(std::find(regions.begin(), regions.end(), pair.first) - regions.begin());
        auto j = static_cast<std::size_t>(std::find(regions.begin(), regions.end(), pair.second) - regions.begin());
        weights[i * regions.size() + j] = w;
    }
    return {std::move(regions), std::move(weights)};
}

MobilityMatrix load_mobility(const std::filesystem::path &path)
{
    return parse_mobility_csv(read_file(path), path.string());
}

std::string format_series_csv(const std::vector<MonthlySeries> &series)
{
    std::vector<const MonthlySeries *> sorted;
    for (const auto &s : series) {
        sorted.push_back(&s);
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const MonthlySeries *a, const MonthlySeries *b) { return a->region() < b->region(); });
    std::string out = "region,date,value\n";
    for (const auto *s : sorted) {
        for (std::size_t i = 0; i < s->size(); ++i) {
            const auto &v = s->values()[i];
            out += fmt::format("{},{},{}\n", s->region(), (s->start() + static_cast<long>(i)).to_string(),
                               v ? format_number(*v) : std::string{});
        }
    }
    return out;
}

void write_series(const std::filesystem::path &path, const std::vector<MonthlySeries> &series)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IngestError(fmt::format("cannot write '{}'", path.string()));
    }
    out << format_series_csv(series);
}

std::string format_mobility_csv(const MobilityMatrix &mobility)
{
    std::string out = "from,to,weight\n";
    const auto &regions = mobility.regions();
    for (std::size_t i = 0; i < regions.size(); ++i) {
        for (std::size_t j = 0; j < regions.size(); ++j) {
            if (double w = mobility.weight(i, j); w != 0.0) {
                out += fmt::format("{},{},{}\n", regions[i], regions[j], format_number(w));
            }
        }
    }
    return out;
}

// -- transforms --------------------------------------------------------------

Panel align(const Panel &panel)
{
    if (panel.series_.empty()) {
        throw AlignmentError("cannot align an empty panel");
    }
    MonthIndex first = panel.series_.begin()->second.start();
    MonthIndex last = panel.series_.begin()->second.end();
    for (const auto &[key, s] : panel.series_) {
        if (s.empty()) {
            throw AlignmentError(fmt::format("series {} {} is empty", key.first, to_string(key.second)));
        }
        first = std::max(first, s.start());
        last = std::min(last, s.end());
    }
    if (last < first) {
        std::string spans;
        for (const auto &[key, s] : panel.series_) {
            spans += fmt::format("{}{}/{}={}", spans.empty() ? "" : "; ", key.first, to_string(key.second),
                                 s.span().to_string());
        }
        throw AlignmentError("series spans do not intersect: " + spans);
    }
    MonthSpan span{first, last};
    Panel out;
    out.mobility_ = panel.mobility_;
    for (const auto &[key, s] : panel.series_) {
        out.series_.emplace(key, s.slice(span));
    }
    out.span_ = span;
    return out;
}

MonthlySeries lag_shift(const MonthlySeries &series, int k)
{
    if (k < 0) {
        throw ParameterError(fmt::format("lag must be >= 0, got {}", k));
    }
    const auto &in = series.values();
    std::vector<Value> out(in.size());
    for (std::size_t i = static_cast<std::size_t>(k); i < in.size(); ++i) {
        out[i] = in[i - static_cast<std::size_t>(k)];
    }
    return {series.region(), series.variable(), series.start(), std::move(out)};
}

MonthlySeries divide(const MonthlySeries &a, const MonthlySeries &b, Variable variable)
{
    std::vector<Value> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto t = a.start() + static_cast<long>(i);
        auto num = a.values()[i];
        auto den = b.at(t);
        if (num && den && *den > 0.0) {
            out[i] = *num / *den;
        }
    }
    return {a.region(), variable, a.start(), std::move(out)};
}

} // namespace dengue
