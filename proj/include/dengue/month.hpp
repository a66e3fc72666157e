#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace dengue {

/// A calendar month. Arithmetic is in whole months only.
class MonthIndex {
public:
    constexpr MonthIndex() = default;
    /// Throws ParameterError unless month is in 1..12.
    MonthIndex(int year, int month);

    /// Parses `YYYY-MM`. Throws ParameterError on anything else.
    static MonthIndex parse(std::string_view text);
    static constexpr MonthIndex from_ordinal(long ordinal) noexcept
    {
        MonthIndex m;
        long year = ordinal >= 0 ? ordinal / 12 : -((-ordinal + 11) / 12);
        m.year_ = static_cast<int>(year);
        m.month_ = static_cast<int>(ordinal - year * 12) + 1;
        return m;
    }

    [[nodiscard]] constexpr int year() const noexcept { return year_; }
    [[nodiscard]] constexpr int month() const noexcept { return month_; }
    /// Months since year 0, January.
    [[nodiscard]] constexpr long ordinal() const noexcept { return long{year_} * 12 + (month_ - 1); }

    [[nodiscard]] std::string to_string() const;

    constexpr MonthIndex operator+(long k) const noexcept { return from_ordinal(ordinal() + k); }
    constexpr MonthIndex operator-(long k) const noexcept { return from_ordinal(ordinal() - k); }
    constexpr long operator-(MonthIndex other) const noexcept { return ordinal() - other.ordinal(); }
    constexpr MonthIndex &operator++() noexcept { return *this = *this + 1; }

    constexpr auto operator<=>(const MonthIndex &) const = default;

private:
    int year_ = 1970;
    int month_ = 1;
};

/// Closed range of months [first, last].
struct MonthSpan {
    MonthIndex first;
    MonthIndex last;

    [[nodiscard]] long length() const noexcept { return last - first + 1; }
    [[nodiscard]] bool contains(MonthIndex m) const noexcept { return first <= m && m <= last; }
    [[nodiscard]] std::string to_string() const;
    /// Parses "YYYY-MM..YYYY-MM". Throws ParameterError when malformed or
    /// when last precedes first.
    static MonthSpan parse(std::string_view text);

    bool operator==(const MonthSpan &) const = default;
};

} // namespace dengue
