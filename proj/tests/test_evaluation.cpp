#include "support.hpp"

#include "dengue/error.hpp"
#include "dengue/evaluation.hpp"

#include <algorithm>
#include <functional>
#include <set>

using namespace dengue;

namespace {

MonthSpan span_of(const char *a, const char *b) { return {test::ym(a), test::ym(b)}; }

/// Maximum bipartite matching by augmenting paths.
int max_matching(const std::vector<MonthIndex> &pred, const std::vector<MonthIndex> &truth, int window)
{
    std::vector<int> owner(truth.size(), -1);
    std::function<bool(std::size_t, std::vector<bool> &)> augment = [&](std::size_t p, std::vector<bool> &seen) {
        for (std::size_t k = 0; k < truth.size(); ++k) {
            if (seen[k] || std::abs(pred[p] - truth[k]) > window) {
                continue;
            }
            seen[k] = true;
            if (owner[k] < 0 || augment(static_cast<std::size_t>(owner[k]), seen)) {
                owner[k] = static_cast<int>(p);
                return true;
            }
        }
        return false;
    };
    int n = 0;
    for (std::size_t p = 0; p < pred.size(); ++p) {
        std::vector<bool> seen(truth.size(), false);
        n += augment(p, seen) ? 1 : 0;
    }
    return n;
}

std::vector<MonthIndex> random_months(test::Gen &g, MonthSpan span, double p)
{
    std::set<MonthIndex> out;
    for (MonthIndex t = span.first; t <= span.last; ++t) {
        if (g.coin(p)) {
            out.insert(t);
        }
    }
    return {out.begin(), out.end()};
}

} // namespace

TEST_SUITE("evaluation")
{
    TEST_CASE("error rate examples")
    {
        CHECK(std::abs(error_rate(7, 105) * 100 - 6.67) < 0.01);
        CHECK(std::abs(error_rate(12, 105) * 100 - 11.43) < 0.01);
        CHECK(error_rate(0, 10) == 0.0);

        auto span = span_of("2012-01", "2012-12");
        OutbreakCalendar actual({test::ym("2012-03"), test::ym("2012-08")});
        auto r = score(actual.months(), actual, span);
        CHECK(r.matches == 2);
        CHECK(r.false_positives == 0);
        CHECK(r.false_negatives == 0);
        CHECK(r.error_rate == 0.0);
        CHECK(r.total_months == 12);
    }

    TEST_CASE("window matching")
    {
        auto span = span_of("2015-01", "2015-12");
        OutbreakCalendar actual({test::ym("2015-03"), test::ym("2015-04"), test::ym("2015-09")});
        std::vector<MonthIndex> pred{test::ym("2015-04"), test::ym("2015-05"), test::ym("2015-11")};
        auto r1 = score(pred, actual, span, 1);
        CHECK(r1.matches == 2);
        CHECK(r1.false_positives == 1);
        CHECK(r1.false_negatives == 1);
        CHECK(r1.error_rate == doctest::Approx(2.0 / 12));
        auto r0 = score(pred, actual, span, 0);
        CHECK(r0.matches == 1);
        auto r2 = score(pred, actual, span, 2);
        CHECK(r2.matches == 3);
        // One prediction cannot satisfy two actual months.
        auto lone = score({test::ym("2015-04")}, actual, span, 1);
        CHECK(lone.matches == 1);
        CHECK(lone.false_negatives == 2);
    }

    TEST_CASE("errors")
    {
        auto span = span_of("2015-01", "2015-12");
        OutbreakCalendar actual({test::ym("2015-03")});
        CHECK_THROWS_AS((void)score({test::ym("2016-01")}, actual, span), InputError);
        CHECK_THROWS_AS((void)score({}, OutbreakCalendar({test::ym("2014-12")}), span), InputError);
        CHECK_THROWS_AS((void)score({}, actual, span, -1), InputError);
    }

    TEST_CASE("empty versus empty")
    {
        auto r = score({}, OutbreakCalendar{}, span_of("2015-01", "2015-06"));
        CHECK(r.error_rate == 0.0);
        CHECK(r.matches == 0);
    }

    TEST_CASE("greedy matching is maximum")
    {
        test::Gen g(71);
        auto span = span_of("2010-01", "2014-12");
        for (int trial = 0; trial < 400; ++trial) {
            double p = g.uniform(0.02, 0.6);
            auto pred = random_months(g, span, p);
            auto truth = random_months(g, span, p);
            int w = g.integer(0, 3);
            auto r = score(pred, OutbreakCalendar(truth), span, w);
            CHECK(r.matches == max_matching(pred, truth, w));
            CHECK(r.false_positives + r.matches == static_cast<int>(pred.size()));
            CHECK(r.false_negatives + r.matches == static_cast<int>(truth.size()));
            CHECK(r.error_rate >= 0.0);
            CHECK(r.error_rate <= 1.0);

            // Swapping roles swaps FP and FN.
            auto s = score(truth, OutbreakCalendar(pred), span, w);
            CHECK(s.false_positives == r.false_negatives);
            CHECK(s.false_negatives == r.false_positives);

            // A wider window never adds mismatches.
            auto wider = score(pred, OutbreakCalendar(truth), span, w + 1);
            CHECK(wider.false_positives + wider.false_negatives <= r.false_positives + r.false_negatives);
        }
    }

    TEST_CASE("comparison table fixture")
    {
        auto t = table2_fixture();
        CHECK(t.rows.size() == 23);
        CHECK(t.actual().size() == 23);
        CHECK(t.actual().contains(test::ym("2017-07")));
        auto mc = t.multicriteria();
        CHECK(std::find(mc.begin(), mc.end(), test::ym("2012-06")) == mc.end());
        CHECK(t.rows.front().actual == test::ym("2010-07"));
        CHECK(t.rows.front().regression == test::ym("2010-08"));

        auto span = table2_span();
        CHECK(span.length() == 105);
        CHECK(t.multicriteria_row_mismatches() == 7);
        CHECK(t.regression_row_mismatches() == 12);
        CHECK(std::abs(error_rate(t.multicriteria_row_mismatches(), span.length()) * 100 - 6.67) < 0.01);
        CHECK(std::abs(error_rate(t.regression_row_mismatches(), span.length()) * 100 - 11.43) < 0.01);

        // Every column lies inside the published span.
        for (auto m : mc) {
            CHECK(span.contains(m));
        }
        for (auto m : t.regression()) {
            CHECK(span.contains(m));
        }
    }

    TEST_CASE("month list CSV")
    {
        auto months = parse_month_list_csv("date\n2012-03\n2012-05\n");
        CHECK(months == std::vector<MonthIndex>{test::ym("2012-03"), test::ym("2012-05")});
        auto flagged = parse_month_list_csv("date,D_fitted,predicted_flag\r\n2012-03,1.5,0\r\n2012-04,9,1\r\n");
        CHECK(flagged == std::vector<MonthIndex>{test::ym("2012-04")});
        CHECK_THROWS_AS((void)parse_month_list_csv("month\n2012-03\n"), IngestError);
        CHECK_THROWS_AS((void)parse_month_list_csv("date\n2012-13\n"), IngestError);
        CHECK_THROWS_AS((void)parse_month_list_csv("date,predicted_flag\n2012-01,2\n"), IngestError);
        CHECK_THROWS_AS((void)parse_month_list_csv(""), IngestError);

        std::vector<MonthIndex> list{test::ym("2011-01"), test::ym("2011-07")};
        CHECK(parse_month_list_csv(format_month_list_csv(list)) == list);
        auto dir = test::scratch_dir("month_list");
        test::write_file(dir / "m.csv", format_month_list_csv(list));
        CHECK(load_month_list(dir / "m.csv") == list);
        CHECK_THROWS((void)load_month_list(dir / "absent.csv"));
    }

    TEST_CASE("calendar is sorted and unique")
    {
        OutbreakCalendar c({test::ym("2013-05"), test::ym("2012-01"), test::ym("2013-05")});
        CHECK(c.size() == 2);
        CHECK(c.months().front() == test::ym("2012-01"));
        CHECK(c.contains(test::ym("2013-05")));
        CHECK_FALSE(c.contains(test::ym("2013-06")));
    }
}
