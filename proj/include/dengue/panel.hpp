#pragma once

#include "dengue/month.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dengue {

enum class Variable {
    rainfall_mm,
    temperature_c,
    humidity_pct,
    incidence_count,
    susceptible_count,
    population_count,
    // Derived series; never read from CSV.
    infected_density,
    mobility_risk,
    membership,
};

[[nodiscard]] std::string_view to_string(Variable v) noexcept;
/// Throws ParameterError for unknown names.
[[nodiscard]] Variable parse_variable(std::string_view name);
/// Counts and derived series must be non-negative; climate variables only
/// need to be finite.
[[nodiscard]] bool is_nonnegative(Variable v) noexcept;

/// Missing months are carried as std::nullopt.
using Value = std::optional<double>;

/// One variable for one region on a gap-free monthly grid.
class MonthlySeries {
public:
    MonthlySeries() = default;
    /// Validates values (finite; non-negative for counts). Throws ParameterError.
    MonthlySeries(std::string region, Variable variable, MonthIndex start, std::vector<Value> values);

    [[nodiscard]] const std::string &region() const noexcept { return region_; }
    [[nodiscard]] Variable variable() const noexcept { return variable_; }
    [[nodiscard]] MonthIndex start() const noexcept { return start_; }
    /// Last month covered. Undefined for an empty series.
    [[nodiscard]] MonthIndex end() const noexcept { return start_ + (static_cast<long>(values_.size()) - 1); }
    [[nodiscard]] MonthSpan span() const noexcept { return {start_, end()}; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] const std::vector<Value> &values() const noexcept { return values_; }

    /// Value at month t; nullopt if missing or outside the series.
    [[nodiscard]] Value at(MonthIndex t) const noexcept;
    [[nodiscard]] std::size_t present_count() const noexcept;

    /// Restriction to [span.first, span.last]; the span must lie within this series.
    [[nodiscard]] MonthlySeries slice(MonthSpan span) const;

    bool operator==(const MonthlySeries &) const = default;

private:
    std::string region_;
    Variable variable_ = Variable::rainfall_mm;
    MonthIndex start_;
    std::vector<Value> values_;
};

/// Directed travel weights; weight(i, j) is X_m(i, j). Unlisted pairs are 0.
class MobilityMatrix {
public:
    MobilityMatrix() = default;
    /// `weights` is row-major, regions.size() squared. Throws ParameterError
    /// on shape mismatch, duplicate regions, or negative/non-finite weights.
    MobilityMatrix(std::vector<std::string> regions, std::vector<double> weights);

    [[nodiscard]] const std::vector<std::string> &regions() const noexcept { return regions_; }
    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view region) const noexcept;
    /// 0 when either region is unknown.
    [[nodiscard]] double weight(std::string_view from, std::string_view to) const noexcept;
    [[nodiscard]] double weight(std::size_t from, std::size_t to) const noexcept
    {
        return weights_[from * regions_.size() + to];
    }
    [[nodiscard]] bool empty() const noexcept { return regions_.empty(); }

    bool operator==(const MobilityMatrix &) const = default;

private:
    std::vector<std::string> regions_;
    std::vector<double> weights_;
};

using SeriesKey = std::pair<std::string, Variable>;

/// All input series plus the mobility matrix. Immutable once built.
class Panel {
public:
    Panel() = default;
    /// Throws ParameterError on duplicate (region, variable) keys.
    Panel(std::vector<MonthlySeries> series, MobilityMatrix mobility);

    [[nodiscard]] const std::map<SeriesKey, MonthlySeries> &series() const noexcept { return series_; }
    [[nodiscard]] const MobilityMatrix &mobility() const noexcept { return mobility_; }
    /// Common span; set by align().
    [[nodiscard]] const std::optional<MonthSpan> &span() const noexcept { return span_; }

    [[nodiscard]] const MonthlySeries *find(std::string_view region, Variable v) const;
    /// Throws MissingDataError naming the key when absent.
    [[nodiscard]] const MonthlySeries &get(std::string_view region, Variable v) const;
    [[nodiscard]] bool has(std::string_view region, Variable v) const { return find(region, v) != nullptr; }
    /// Regions that have at least one series, sorted.
    [[nodiscard]] std::vector<std::string> regions() const;

    bool operator==(const Panel &) const = default;

private:
    friend Panel align(const Panel &panel);

    std::map<SeriesKey, MonthlySeries> series_;
    MobilityMatrix mobility_;
    std::optional<MonthSpan> span_;
};

// -- ingestion ---------------------------------------------------------------

/// Parses a `region,date,value` CSV into one series per region, sorted by
/// region. Interior gaps become missing values. Throws IngestError with the
/// offending line number.
[[nodiscard]] std::vector<MonthlySeries> parse_series_csv(std::string_view text, Variable variable,
                                                          std::string_view source = "<memory>");
[[nodiscard]] std::vector<MonthlySeries> load_series_all(const std::filesystem::path &path, Variable variable);
/// Single-region variant; throws IngestError when the file holds several regions.
[[nodiscard]] MonthlySeries load_series(const std::filesystem::path &path, Variable variable);

/// Parses `from,to,weight`; regions are ordered by first appearance.
[[nodiscard]] MobilityMatrix parse_mobility_csv(std::string_view text, std::string_view source = "<memory>");
[[nodiscard]] MobilityMatrix load_mobility(const std::filesystem::path &path);

/// Header plus rows sorted by (region, date); missing values as empty fields.
[[nodiscard]] std::string format_series_csv(const std::vector<MonthlySeries> &series);
void write_series(const std::filesystem::path &path, const std::vector<MonthlySeries> &series);
[[nodiscard]] std::string format_mobility_csv(const MobilityMatrix &mobility);

/// Shortest decimal text that parses back to the same double.
[[nodiscard]] std::string format_number(double x);

// -- transforms --------------------------------------------------------------

/// Truncates every series to the intersection of all spans. Throws
/// AlignmentError (listing each series span) when the intersection is empty
/// or the panel has no series.
[[nodiscard]] Panel align(const Panel &panel);

/// result(t) = series(t - k); first k values missing; length preserved.
/// Throws ParameterError for k < 0.
[[nodiscard]] MonthlySeries lag_shift(const MonthlySeries &series, int k);

/// Element-wise a / b where both are present and b > 0; the result keeps a's
/// region and grid and takes `variable`.
[[nodiscard]] MonthlySeries divide(const MonthlySeries &a, const MonthlySeries &b, Variable variable);

} // namespace dengue
