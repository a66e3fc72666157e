#include "dengue/month.hpp"

#include "dengue/error.hpp"

#include <charconv>

#include <fmt/format.h>

namespace dengue {

MonthIndex::MonthIndex(int year, int month) : year_{year}, month_{month}
{
    if (month < 1 || month > 12) {
        throw ParameterError(fmt::format("month {} outside 1..12", month));
    }
}

MonthIndex MonthIndex::parse(std::string_view text)
{
    auto fail = [&] { return ParameterError(fmt::format("malformed date '{}' (expected YYYY-MM)", text)); };
    if (text.size() != 7 || text[4] != '-') {
        throw fail();
    }
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (i != 4 && (text[i] < '0' || text[i] > '9')) {
            throw fail();
        }
    }
    int year = 0;
    int month = 0;
    auto [py, ey] = std::from_chars(text.data(), text.data() + 4, year);
    auto [pm, em] = std::from_chars(text.data() + 5, text.data() + 7, month);
    if (ey != std::errc{} || py != text.data() + 4 || em != std::errc{} || pm != text.data() + 7) {
        throw fail();
    }
    if (month < 1 || month > 12) {
        throw fail();
    }
    return {year, month};
}

std::string MonthIndex::to_string() const { return fmt::format("{:04d}-{:02d}", year_, month_); }

std::string MonthSpan::to_string() const { return first.to_string() + ".." + last.to_string(); }

MonthSpan MonthSpan::parse(std::string_view text)
{
    auto sep = text.find("..");
    if (sep == std::string_view::npos) {
        throw ParameterError(fmt::format("malformed span '{}' (expected YYYY-MM..YYYY-MM)", text));
    }
    MonthSpan span{MonthIndex::parse(text.substr(0, sep)), MonthIndex::parse(text.substr(sep + 2))};
    if (span.last < span.first) {
        throw ParameterError(fmt::format("span '{}' ends before it starts", text));
    }
    return span;
}

} // namespace dengue
