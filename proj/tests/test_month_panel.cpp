#include "support.hpp"

#include "dengue/error.hpp"
#include "dengue/month.hpp"
#include "dengue/panel.hpp"

using namespace dengue;
using test::ym;

TEST_SUITE("month")
{
    TEST_CASE("parse and format round trip")
    {
        auto m = MonthIndex::parse("2010-04");
        CHECK(m.year() == 2010);
        CHECK(m.month() == 4);
        CHECK(m.to_string() == "2010-04");
        CHECK(MonthIndex(987, 12).to_string() == "0987-12");
    }

    TEST_CASE("malformed dates are rejected")
    {
        for (const char *bad : {"2010-13", "2010-00", "2010-1", "201-001", "2010/01", "abcd-ef", "", "2010-01x",
                                " 2010-01"}) {
            CAPTURE(bad);
            CHECK_THROWS_AS(MonthIndex::parse(bad), ParameterError);
        }
        CHECK_THROWS_AS(MonthIndex(2010, 0), ParameterError);
        CHECK_THROWS_AS(MonthIndex(2010, 13), ParameterError);
    }

    TEST_CASE("month arithmetic crosses year boundaries exactly")
    {
        CHECK(ym("2010-12") + 1 == ym("2011-01"));
        CHECK(ym("2011-01") - 1 == ym("2010-12"));
        CHECK(ym("2010-04") + 104 == ym("2018-12"));
        CHECK(ym("2018-12") - ym("2010-04") == 104);
        CHECK(ym("0000-01") - 1 == MonthIndex::from_ordinal(-1));
        CHECK(MonthIndex::from_ordinal(-1).month() == 12);
        auto m = ym("2019-11");
        ++m;
        ++m;
        CHECK(m == ym("2020-01"));
    }

    TEST_CASE("ordering is lexicographic on (year, month)")
    {
        CHECK(ym("2010-12") < ym("2011-01"));
        CHECK(ym("2011-02") > ym("2011-01"));
        test::Gen g(1);
        for (int i = 0; i < 500; ++i) {
            MonthIndex a(g.integer(1900, 2100), g.integer(1, 12));
            long k = g.integer(-600, 600);
            CHECK((a + k) - a == k);
            CHECK(((a + k) < a) == (k < 0));
            CHECK(MonthIndex::parse(a.to_string()) == a);
        }
    }

    TEST_CASE("span parse, length and containment")
    {
        auto s = MonthSpan::parse("2010-04..2018-12");
        CHECK(s.length() == 105);
        CHECK(s.contains(ym("2010-04")));
        CHECK(s.contains(ym("2018-12")));
        CHECK_FALSE(s.contains(ym("2019-01")));
        CHECK(s.to_string() == "2010-04..2018-12");
        CHECK_THROWS_AS(MonthSpan::parse("2010-04"), ParameterError);
        CHECK_THROWS_AS(MonthSpan::parse("2018-12..2010-04"), ParameterError);
    }
}

TEST_SUITE("series")
{
    TEST_CASE("constructor validates values")
    {
        CHECK_THROWS_AS(test::series("WP", Variable::incidence_count, "2010-01", {1.0, -1.0}), ParameterError);
        CHECK_THROWS_AS(test::series("WP", Variable::rainfall_mm, "2010-01", {1.0, std::nan("")}), ParameterError);
        CHECK_NOTHROW(test::series("WP", Variable::temperature_c, "2010-01", {-3.0}));
    }

    TEST_CASE("at, span and slice")
    {
        auto s = test::series("WP", Variable::rainfall_mm, "2010-11", {1, 2, 3, 4});
        CHECK(s.span() == MonthSpan{ym("2010-11"), ym("2011-02")});
        CHECK(s.at(ym("2011-01")) == 3.0);
        CHECK_FALSE(s.at(ym("2010-10")).has_value());
        CHECK_FALSE(s.at(ym("2011-03")).has_value());
        auto cut = s.slice({ym("2010-12"), ym("2011-01")});
        CHECK(cut.values() == test::present({2, 3}));
        CHECK(cut.start() == ym("2010-12"));
    }
}

TEST_SUITE("csv")
{
    TEST_CASE("two rows parse into one series")
    {
        auto all = parse_series_csv("region,date,value\nWP,2010-01,120.5\nWP,2010-02,88.0\n", Variable::rainfall_mm);
        REQUIRE(all.size() == 1);
        CHECK(all[0].region() == "WP");
        CHECK(all[0].start() == ym("2010-01"));
        CHECK(all[0].values() == test::present({120.5, 88.0}));
    }

    TEST_CASE("unsorted rows, BOM, CRLF and blank lines")
    {
        std::string text = "\xEF\xBB\xBFregion,date,value\r\nWP,2010-02,2\r\n\r\nCP,2010-01,5\r\nWP,2010-01,1\r\n";
        auto all = parse_series_csv(text, Variable::incidence_count);
        REQUIRE(all.size() == 2);
        CHECK(all[0].region() == "CP");
        CHECK(all[1].values() == test::present({1, 2}));
    }

    TEST_CASE("interior gap becomes a missing marker")
    {
        auto all = parse_series_csv("region,date,value\nWP,2010-01,1\nWP,2010-03,3\n", Variable::rainfall_mm);
        REQUIRE(all.size() == 1);
        REQUIRE(all[0].size() == 3);
        CHECK_FALSE(all[0].values()[1].has_value());
        auto explicit_gap = parse_series_csv("region,date,value\nWP,2010-01,1\nWP,2010-02,\nWP,2010-03,3\n",
                                             Variable::rainfall_mm);
        CHECK(explicit_gap == all);
    }

    TEST_CASE("errors name the offending line")
    {
        auto message = [](const std::string &text) {
            try {
                (void)parse_series_csv(text, Variable::incidence_count, "f.csv");
            } catch (const IngestError &e) {
                return std::string(e.what());
            }
            return std::string("no error");
        };
        CHECK(message("region,date,value\nWP,2010-01,1\nWP,2010-13,2\n").find("f.csv:3") != std::string::npos);
        CHECK(message("region,date,value\nWP,2010-01,abc\n").find("f.csv:2") != std::string::npos);
        CHECK(message("region,date,value\nWP,2010-01,-4\n").find("f.csv:2") != std::string::npos);
        CHECK(message("region,date,value\nWP,2010-01,1\nWP,2010-01,2\n").find("f.csv:3") != std::string::npos);
        CHECK(message("region,date,value\n").find("no data rows") != std::string::npos);
        CHECK(message("").find("no data rows") != std::string::npos);
        CHECK(message("a,b,c\nWP,2010-01,1\n") != "no error");
    }

    TEST_CASE("load_series rejects multi-region files and missing paths")
    {
        auto dir = test::scratch_dir("panel_load");
        test::write_file(dir / "two.csv", "region,date,value\nWP,2010-01,1\nCP,2010-01,2\n");
        CHECK_THROWS_AS((void)load_series(dir / "two.csv", Variable::rainfall_mm), IngestError);
        CHECK_THROWS_AS((void)load_series(dir / "absent.csv", Variable::rainfall_mm), IngestError);
    }

    TEST_CASE("write then load reproduces the file byte for byte")
    {
        test::Gen g(7);
        auto dir = test::scratch_dir("panel_roundtrip");
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<MonthlySeries> in;
            for (const char *region : {"CP", "WP"}) {
                std::vector<Value> values;
                int n = g.integer(1, 30);
                for (int i = 0; i < n; ++i) {
                    bool gap = i > 0 && i + 1 < n && g.coin(0.1);
                    values.push_back(gap ? Value{} : Value{g.uniform(0.0, 800.0)});
                }
                in.emplace_back(region, Variable::rainfall_mm, MonthIndex(g.integer(2000, 2020), g.integer(1, 12)),
                                values);
            }
            write_series(dir / "s.csv", in);
            auto text = test::read_file(dir / "s.csv");
            auto back = load_series_all(dir / "s.csv", Variable::rainfall_mm);
            CHECK(back == in);
            CHECK(format_series_csv(back) == text);
        }
    }

    TEST_CASE("format_number is shortest round trip")
    {
        CHECK(format_number(0.0) == "0");
        CHECK(format_number(-0.0) == "0");
        CHECK(format_number(120.5) == "120.5");
        CHECK(format_number(0.1) == "0.1");
        test::Gen g(3);
        for (int i = 0; i < 1000; ++i) {
            double x = g.uniform(-1e6, 1e6);
            CHECK(std::stod(format_number(x)) == x);
        }
    }

    TEST_CASE("mobility csv")
    {
        auto m = parse_mobility_csv("from,to,weight\nWP,CP,0.35\nCP,WP,0.3\nWP,SP,0.25\n");
        CHECK(m.regions() == std::vector<std::string>{"WP", "CP", "SP"});
        CHECK(m.weight("WP", "CP") == 0.35);
        CHECK(m.weight("CP", "WP") == 0.3);
        CHECK(m.weight("SP", "WP") == 0.0);
        CHECK(m.weight("WP", "XX") == 0.0);
        CHECK_THROWS_AS((void)parse_mobility_csv("from,to,weight\nWP,CP,-1\n"), IngestError);
        CHECK_THROWS_AS((void)parse_mobility_csv("from,to,weight\nWP,CP,1\nWP,CP,2\n"), IngestError);
        CHECK(parse_mobility_csv(format_mobility_csv(m)) == m);
    }

    TEST_CASE("mobility matrix validation")
    {
        CHECK_THROWS_AS(MobilityMatrix({"A", "B"}, {0, 1, 1}), ParameterError);
        CHECK_THROWS_AS(MobilityMatrix({"A", "A"}, {0, 1, 1, 0}), ParameterError);
        CHECK_THROWS_AS(MobilityMatrix({"A", "B"}, {0, -1, 1, 0}), ParameterError);
        MobilityMatrix self({"A"}, {0.5});
        CHECK(self.weight("A", "A") == 0.5);
    }
}

TEST_SUITE("align")
{
    TEST_CASE("common span of two offset series is 105 months")
    {
        std::vector<double> a(108, 1.0), b(108, 2.0);
        Panel p({test::series("WP", Variable::rainfall_mm, "2010-01", a),
                 test::series("WP", Variable::incidence_count, "2010-04", b)},
                {});
        auto aligned = align(p);
        REQUIRE(aligned.span().has_value());
        CHECK(*aligned.span() == MonthSpan{ym("2010-04"), ym("2018-12")});
        CHECK(aligned.span()->length() == 105);
        for (const auto &[key, s] : aligned.series()) {
            CHECK(s.span() == *aligned.span());
        }
    }

    TEST_CASE("single series is unchanged and align is idempotent")
    {
        Panel p({test::series("WP", Variable::rainfall_mm, "2010-01", {1, 2, 3})}, {});
        auto once = align(p);
        CHECK(once.get("WP", Variable::rainfall_mm) == p.get("WP", Variable::rainfall_mm));
        CHECK(align(once) == once);
    }

    TEST_CASE("disjoint spans list every series span")
    {
        Panel p({test::series("WP", Variable::rainfall_mm, "2010-01", {1, 2}),
                 test::series("WP", Variable::incidence_count, "2011-01", {1, 2})},
                {});
        try {
            (void)align(p);
            FAIL("expected AlignmentError");
        } catch (const AlignmentError &e) {
            std::string msg = e.what();
            CHECK(msg.find("2010-01..2010-02") != std::string::npos);
            CHECK(msg.find("2011-01..2011-02") != std::string::npos);
        }
        CHECK_THROWS_AS((void)align(Panel{}), AlignmentError);
    }

    TEST_CASE("missing series lookups name the key")
    {
        Panel p({test::series("WP", Variable::rainfall_mm, "2010-01", {1})}, {});
        CHECK(p.has("WP", Variable::rainfall_mm));
        CHECK_THROWS_AS((void)p.get("WP", Variable::humidity_pct), MissingDataError);
        CHECK_THROWS_AS(Panel({test::series("WP", Variable::rainfall_mm, "2010-01", {1}),
                               test::series("WP", Variable::rainfall_mm, "2011-01", {1})},
                              {}),
                        ParameterError);
    }
}

TEST_SUITE("lag_shift")
{
    TEST_CASE("examples")
    {
        auto s = test::series("WP", Variable::rainfall_mm, "2010-01", {1, 2, 3});
        auto one = lag_shift(s, 1);
        CHECK(one.values() == std::vector<Value>{std::nullopt, 1.0, 2.0});
        CHECK(lag_shift(s, 0) == s);
        auto t = test::series("WP", Variable::rainfall_mm, "2010-01", {5, 7, 9, 11});
        CHECK(lag_shift(t, 2).values() == std::vector<Value>{std::nullopt, std::nullopt, 5.0, 7.0});
        CHECK(lag_shift(s, 10).present_count() == 0);
        CHECK(lag_shift(s, 10).size() == 3);
        CHECK_THROWS_AS((void)lag_shift(s, -1), ParameterError);
    }

    TEST_CASE("shifts compose additively")
    {
        test::Gen g(11);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> v(static_cast<std::size_t>(g.integer(1, 20)));
            for (auto &x : v) {
                x = g.uniform(0, 100);
            }
            auto s = test::series("WP", Variable::rainfall_mm, "2012-05", v);
            int a = g.integer(0, 8);
            int b = g.integer(0, 8);
            CHECK(lag_shift(lag_shift(s, a), b) == lag_shift(s, a + b));
        }
    }

    TEST_CASE("divide keeps grid and skips non-positive denominators")
    {
        auto a = test::series("WP", Variable::incidence_count, "2010-01", {10, 20, 30});
        MonthlySeries b("WP", Variable::population_count, ym("2010-01"), {100.0, 0.0, std::nullopt});
        auto d = divide(a, b, Variable::infected_density);
        CHECK(d.values() == std::vector<Value>{0.1, std::nullopt, std::nullopt});
    }
}
