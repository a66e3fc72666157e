#include "dengue/evaluation.hpp"

#include "dengue/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace dengue {

OutbreakCalendar::OutbreakCalendar(std::vector<MonthIndex> months) : months_{std::move(months)}
{
    std::sort(months_.begin(), months_.end());
    months_.erase(std::unique(months_.begin(), months_.end()), months_.end());
}

bool OutbreakCalendar::contains(MonthIndex m) const noexcept
{
    return std::binary_search(months_.begin(), months_.end(), m);
}

double error_rate(int mismatches, int total_months)
{
    if (total_months <= 0) {
        throw InputError(fmt::format("evaluation span must contain at least one month, got {}", total_months));
    }
    return static_cast<double>(mismatches) / static_cast<double>(total_months);
}

EvalResult score(const std::vector<MonthIndex> &predicted, const OutbreakCalendar &actual, MonthSpan span,
                 int match_window)
{
    if (match_window < 0) {
        throw InputError(fmt::format("match window must be >= 0, got {}", match_window));
    }
    if (span.last < span.first) {
        throw InputError(fmt::format("empty evaluation span {}", span.to_string()));
    }
    for (auto m : predicted) {
        if (!span.contains(m)) {
            throw InputError(fmt::format("predicted month {} outside span {}", m.to_string(), span.to_string()));
        }
    }
    for (auto m : actual.months()) {
        if (!span.contains(m)) {
            throw InputError(fmt::format("actual outbreak month {} outside span {}", m.to_string(), span.to_string()));
        }
    }
    std::vector<MonthIndex> pred = predicted;
    std::sort(pred.begin(), pred.end());
    pred.erase(std::unique(pred.begin(), pred.end()), pred.end());

    const auto &truth = actual.months();
    std::vector<bool> used(truth.size(), false);
    int matches = 0;
    for (auto p : pred) {
        for (std::size_t k = 0; k < truth.size(); ++k) {
            if (used[k] || truth[k] < p - match_window) {
                continue;
            }
            if (p + match_window < truth[k]) {
                break;
            }
            used[k] = true;
            ++matches;
            break;
        }
    }
    EvalResult r;
    r.matches = matches;
    r.false_positives = static_cast<int>(pred.size()) - matches;
    r.false_negatives = static_cast<int>(truth.size()) - matches;
    r.total_months = static_cast<int>(span.length());
    r.error_rate = error_rate(r.false_positives + r.false_negatives, r.total_months);
    return r;
}

// -- published comparison ------------------------------------------------------

namespace {

std::vector<MonthIndex> distinct(std::vector<MonthIndex> v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

OutbreakCalendar Table2::actual() const
{
    std::vector<MonthIndex> m;
    for (const auto &r : rows) {
        m.push_back(r.actual);
    }
    return OutbreakCalendar(std::move(m));
}

std::vector<MonthIndex> Table2::multicriteria() const
{
    std::vector<MonthIndex> m;
    for (const auto &r : rows) {
        if (r.multicriteria) {
            m.push_back(*r.multicriteria);
        }
    }
    return distinct(std::move(m));
}

std::vector<MonthIndex> Table2::regression() const
{
    std::vector<MonthIndex> m;
    for (const auto &r : rows) {
        if (r.regression) {
            m.push_back(*r.regression);
        }
    }
    return distinct(std::move(m));
}

int Table2::multicriteria_row_mismatches() const
{
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const Table2Row &r) {
        return !r.multicriteria || *r.multicriteria != r.actual;
    }));
}

int Table2::regression_row_mismatches() const
{
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const Table2Row &r) {
        return !r.regression || *r.regression != r.actual;
    }));
}

MonthSpan table2_span() { return {MonthIndex(2010, 4), MonthIndex(2018, 12)}; }

Table2 table2_fixture()
{
    using M = MonthIndex;
    const std::optional<M> dash;
    return Table2{{
        {M(2010, 7), M(2010, 7), M(2010, 8)},
        {M(2011, 7), M(2011, 7), M(2011, 8)},
        {M(2011, 12), M(2011, 12), M(2012, 1)},
        {M(2012, 6), dash, dash},
        {M(2012, 7), M(2012, 7), M(2012, 7)},
        {M(2012, 8), dash, dash},
        {M(2012, 11), dash, M(2012, 11)},
        {M(2013, 7), M(2013, 7), M(2013, 7)},
        {M(2013, 8), M(2013, 7), M(2013, 8)},
        {M(2014, 1), dash, M(2013, 12)},
        {M(2014, 6), M(2014, 6), M(2014, 7)},
        {M(2014, 11), dash, M(2014, 11)},
        {M(2015, 1), M(2015, 1), M(2015, 1)},
        {M(2016, 1), M(2016, 1), M(2016, 2)},
        {M(2016, 7), M(2016, 7), M(2016, 8)},
        {M(2017, 1), M(2017, 1), M(2017, 1)},
        {M(2017, 5), M(2017, 5), dash},
        {M(2017, 6), M(2017, 6), M(2017, 6)},
        {M(2017, 7), M(2017, 7), M(2017, 7)},
        {M(2017, 8), M(2017, 8), M(2017, 8)},
        {M(2017, 12), M(2018, 1), M(2017, 12)},
        {M(2018, 7), M(2018, 7), M(2018, 8)},
        {M(2018, 11), M(2018, 11), dash},
    }};
}

// -- CSV -----------------------------------------------------------------

std::vector<MonthIndex> parse_month_list_csv(std::string_view text, std::string_view source)
{
    if (text.starts_with("\xEF\xBB\xBF")) {
        text.remove_prefix(3);
    }
    std::vector<MonthIndex> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> date_col;
    std::optional<std::size_t> flag_col;
    auto split = [](const std::string &s) {
        std::vector<std::string> f;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                f.push_back(cur);
                cur.clear();
            } else if (c != '\r' && c != ' ' && c != '\t') {
                cur += c;
            }
        }
        f.push_back(cur);
        return f;
    };
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = split(line);
        if (fields.size() == 1 && fields[0].empty()) {
            continue;
        }
        if (!date_col) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == "date") {
                    date_col = i;
                } else if (fields[i] == "predicted_flag") {
                    flag_col = i;
                }
            }
            if (!date_col) {
                throw IngestError(fmt::format("{}:{}: header has no 'date' column", source, line_no));
            }
            continue;
        }
        if (*date_col >= fields.size() || (flag_col && *flag_col >= fields.size())) {
            throw IngestError(fmt::format("{}:{}: too few fields", source, line_no));
        }
        if (flag_col) {
            const auto &f = fields[*flag_col];
            if (f == "0") {
                continue;
            }
            if (f != "1") {
                throw IngestError(fmt::format("{}:{}: predicted_flag must be 0 or 1, got '{}'", source, line_no, f));
            }
        }
        try {
            out.push_back(MonthIndex::parse(fields[*date_col]));
        } catch (const ParameterError &) {
            throw IngestError(fmt::format("{}:{}: malformed date '{}'", source, line_no, fields[*date_col]));
        }
    }
    if (!date_col) {
        throw IngestError(fmt::format("{}: missing header", source));
    }
    return out;
}

std::vector<MonthIndex> load_month_list(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestError(fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_month_list_csv(buf.str(), path.string());
}

std::string format_month_list_csv(const std::vector<MonthIndex> &months)
{
    std::string out = "date\n";
    for (auto m : months) {
        out += m.to_string();
        out += '\n';
    }
    return out;
}

} // namespace dengue
