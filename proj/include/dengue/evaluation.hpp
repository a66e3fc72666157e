#pragma once

#include "dengue/month.hpp"

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

namespace dengue {

/// Ground-truth outbreak months, sorted and unique.
class OutbreakCalendar {
public:
    OutbreakCalendar() = default;
    explicit OutbreakCalendar(std::vector<MonthIndex> months);

    [[nodiscard]] const std::vector<MonthIndex> &months() const noexcept { return months_; }
    [[nodiscard]] bool contains(MonthIndex m) const noexcept;
    [[nodiscard]] std::size_t size() const noexcept { return months_.size(); }

    bool operator==(const OutbreakCalendar &) const = default;

private:
    std::vector<MonthIndex> months_;
};

struct EvalResult {
    int matches = 0;
    int false_positives = 0;
    int false_negatives = 0;
    int total_months = 0;
    double error_rate = 0.0;
};

/// (false_positives + false_negatives) / total_months.
[[nodiscard]] double error_rate(int mismatches, int total_months);

inline constexpr int kDefaultMatchWindow = 1;

/// One-to-one matching of predicted to actual months within +-match_window.
/// Predicted months are visited chronologically and each takes the earliest
/// unmatched actual month in its window, which yields a maximum matching.
/// Throws InputError for months outside the span or a negative window.
[[nodiscard]] EvalResult score(const std::vector<MonthIndex> &predicted, const OutbreakCalendar &actual,
                               MonthSpan span, int match_window = kDefaultMatchWindow);

/// One row of the published comparison table; an empty column is a dash.
struct Table2Row {
    MonthIndex actual;
    std::optional<MonthIndex> multicriteria;
    std::optional<MonthIndex> regression;
};

struct Table2 {
    std::vector<Table2Row> rows;

    [[nodiscard]] OutbreakCalendar actual() const;
    /// Distinct months of each prediction column, sorted.
    [[nodiscard]] std::vector<MonthIndex> multicriteria() const;
    [[nodiscard]] std::vector<MonthIndex> regression() const;
    /// Rows where the column differs from the actual month (dashes included).
    [[nodiscard]] int multicriteria_row_mismatches() const;
    [[nodiscard]] int regression_row_mismatches() const;
};

/// Apr 2010 .. Dec 2018, the span of the published comparison.
[[nodiscard]] MonthSpan table2_span();
/// The 23 rows of the published comparison table.
[[nodiscard]] Table2 table2_fixture();

// -- CSV -----------------------------------------------------------------

/// Reads a CSV whose header contains a `date` column. When a
/// `predicted_flag` column exists only rows with flag 1 are kept.
[[nodiscard]] std::vector<MonthIndex> parse_month_list_csv(std::string_view text, std::string_view source = "<memory>");
[[nodiscard]] std::vector<MonthIndex> load_month_list(const std::filesystem::path &path);
[[nodiscard]] std::string format_month_list_csv(const std::vector<MonthIndex> &months);

} // namespace dengue
