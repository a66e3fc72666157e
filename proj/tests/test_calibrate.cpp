#include "support.hpp"

#include "dengue/calibrate.hpp"
#include "dengue/error.hpp"
#include "dengue/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace dengue;

namespace {

// Textbook single-pass formula, independent of the library's two-pass code.
double pearson_oracle(const std::vector<double> &x, const std::vector<double> &y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

std::vector<double> random_values(test::Gen &g, std::size_t n, double lo, double hi)
{
    std::vector<double> v(n);
    for (auto &x : v) {
        x = g.uniform(lo, hi);
    }
    return v;
}

} // namespace

TEST_SUITE("pearson")
{
    TEST_CASE("examples")
    {
        std::vector<double> x{1, 2, 3};
        CHECK(pearson(std::span<const double>(x), std::vector<double>{2, 4, 6}) == doctest::Approx(1.0));
        CHECK(pearson(std::span<const double>(x), std::vector<double>{3, 2, 1}) == doctest::Approx(-1.0));
        CHECK(pearson(std::span<const double>(x), std::vector<double>{1, 2, 4}) == doctest::Approx(0.9820).epsilon(1e-3));
    }

    TEST_CASE("undefined cases")
    {
        std::vector<double> two{1, 2};
        CHECK_THROWS_AS((void)pearson(std::span<const double>(two), std::vector<double>{1, 2}), CorrelationError);
        std::vector<double> flat{5, 5, 5, 5};
        std::vector<double> ramp{1, 2, 3, 4};
        CHECK_THROWS_AS((void)pearson(std::span<const double>(flat), ramp), CorrelationError);
        CHECK_THROWS_AS((void)pearson(std::span<const double>(ramp), std::vector<double>{1, 2, 3}), ParameterError);
    }

    TEST_CASE("pairwise deletion of missing entries")
    {
        std::vector<Value> x{1.0, std::nullopt, 2.0, 3.0, 100.0};
        std::vector<Value> y{2.0, 50.0, 4.0, 6.0, std::nullopt};
        CHECK(pearson(x, y) == doctest::Approx(1.0));
        std::vector<Value> sparse{1.0, std::nullopt, std::nullopt, 3.0, std::nullopt};
        CHECK_THROWS_AS((void)pearson(sparse, y), CorrelationError);
    }

    TEST_CASE("series overload uses the overlapping months")
    {
        auto a = test::series("WP", Variable::rainfall_mm, "2010-01", {9, 1, 2, 3, 4});
        auto b = test::series("WP", Variable::incidence_count, "2010-02", {2, 4, 6, 8, 99});
        CHECK(pearson(a, b) == doctest::Approx(1.0));
    }

    TEST_CASE("matches the single-pass oracle, symmetric, affine invariant")
    {
        test::Gen g(21);
        for (int trial = 0; trial < 200; ++trial) {
            auto n = static_cast<std::size_t>(g.integer(3, 150));
            auto x = random_values(g, n, -10, 10);
            auto y = random_values(g, n, 0, 5);
            for (std::size_t i = 0; i < n; ++i) {
                y[i] += g.uniform(-1, 1) * x[i];
            }
            double r = pearson(std::span<const double>(x), y);
            CHECK(r == doctest::Approx(pearson_oracle(x, y)).epsilon(1e-9));
            CHECK(std::abs(r - pearson(std::span<const double>(y), x)) <= 1e-12);
            double a = g.uniform(0.1, 50), b = g.uniform(-100, 100);
            std::vector<double> xt(n);
            std::transform(x.begin(), x.end(), xt.begin(), [&](double v) { return a * v + b; });
            CHECK(std::abs(r - pearson(std::span<const double>(xt), y)) <= 1e-12);
            CHECK(r >= -1.0);
            CHECK(r <= 1.0);
        }
    }
}

TEST_SUITE("best_lag")
{
    TEST_CASE("planted exact shift is recovered for every lag up to 6")
    {
        test::Gen g(4);
        for (int k = 0; k <= 6; ++k) {
            auto f = random_values(g, 80, 0, 300);
            std::vector<Value> inc(f.size());
            for (std::size_t t = static_cast<std::size_t>(k); t < f.size(); ++t) {
                inc[t] = f[t - static_cast<std::size_t>(k)];
            }
            MonthlySeries factor("WP", Variable::rainfall_mm, test::ym("2010-01"), test::present(f));
            MonthlySeries incidence("WP", Variable::incidence_count, test::ym("2010-01"), inc);
            auto res = best_lag(factor, incidence);
            CAPTURE(k);
            CHECK(res.lag_months == k);
            CHECK(res.correlation == doctest::Approx(1.0));
        }
    }

    TEST_CASE("factor equal to incidence gives lag 0")
    {
        auto s = test::series("WP", Variable::incidence_count, "2010-01", {3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8});
        auto f = test::series("WP", Variable::humidity_pct, "2010-01", {3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8});
        CHECK(best_lag(f, s).lag_months == 0);
    }

    TEST_CASE("negative correlation counts by magnitude")
    {
        test::Gen g(8);
        auto f = random_values(g, 60, 20, 35);
        std::vector<Value> inc(f.size());
        for (std::size_t t = 3; t < f.size(); ++t) {
            inc[t] = 100.0 - f[t - 3];
        }
        MonthlySeries factor("WP", Variable::temperature_c, test::ym("2010-01"), test::present(f));
        MonthlySeries incidence("WP", Variable::incidence_count, test::ym("2010-01"), inc);
        auto res = best_lag(factor, incidence);
        CHECK(res.lag_months == 3);
        CHECK(res.correlation == doctest::Approx(-1.0));
    }

    TEST_CASE("ties go to the smaller lag")
    {
        std::vector<double> periodic;
        for (int i = 0; i < 40; ++i) {
            periodic.push_back(static_cast<double>(i % 3));
        }
        auto f = test::series("WP", Variable::rainfall_mm, "2010-01", periodic);
        auto inc = test::series("WP", Variable::incidence_count, "2010-01", periodic);
        CHECK(best_lag(f, inc, 6).lag_months == 0);
        auto shifted = lag_shift(inc, 1);
        CHECK(best_lag(f, shifted, 6).lag_months == 1);
    }

    TEST_CASE("short overlap is rejected")
    {
        auto f = test::series("WP", Variable::rainfall_mm, "2010-01", {1, 2, 3, 4, 5, 6, 7, 8});
        CHECK_THROWS_AS((void)best_lag(f, f, 6), CorrelationError);
        CHECK_NOTHROW((void)best_lag(f, f, 5));
    }
}

TEST_SUITE("rainfall_cutoffs")
{
    TEST_CASE("indicator band is recovered within one grid step")
    {
        test::Gen g(12);
        for (int lag : {0, 2, 5}) {
            auto rain = random_values(g, 240, 0, 600);
            std::vector<Value> inc(rain.size());
            for (std::size_t t = static_cast<std::size_t>(lag); t < rain.size(); ++t) {
                double r = rain[t - static_cast<std::size_t>(lag)];
                inc[t] = (r >= 150 && r <= 350) ? 1.0 : 0.0;
            }
            MonthlySeries rs("WP", Variable::rainfall_mm, test::ym("2000-01"), test::present(rain));
            MonthlySeries is("WP", Variable::incidence_count, test::ym("2000-01"), inc);
            CAPTURE(lag);
            // Near-vertical shoulders: the plateau itself must match the band.
            auto sharp = rainfall_cutoffs(rs, is, lag, 10.0, 0.01);
            CHECK(std::abs(sharp.r_min - 150) <= 10);
            CHECK(std::abs(sharp.r_max - 350) <= 10);
            // Default shoulders: the half-height points 0.875 r_min and
            // 1.125 r_max settle on the band edges instead.
            auto soft = rainfall_cutoffs(rs, is, lag, 10.0);
            CHECK(std::abs(soft.r_min - 150 / 0.875) <= 10);
            CHECK(std::abs(soft.r_max - 350 / 1.125) <= 10);
        }
    }

    TEST_CASE("exact recovery when incidence is the planted membership")
    {
        test::Gen g(13);
        auto rain = random_values(g, 200, 0, 600);
        auto mf = rainfall_mf_from_cutoffs(150, 350);
        std::vector<Value> inc(rain.size());
        for (std::size_t t = 1; t < rain.size(); ++t) {
            inc[t] = mf(rain[t - 1]);
        }
        MonthlySeries rs("WP", Variable::rainfall_mm, test::ym("2000-01"), test::present(rain));
        MonthlySeries is("WP", Variable::incidence_count, test::ym("2000-01"), inc);
        auto res = rainfall_cutoffs(rs, is, 1, 10.0);
        CHECK(res.r_min == 150.0);
        CHECK(res.r_max == 350.0);
        CHECK(res.correlation == doctest::Approx(1.0));
    }

    TEST_CASE("degenerate inputs")
    {
        std::vector<double> flat(30, 120.0);
        std::vector<double> inc(30);
        std::iota(inc.begin(), inc.end(), 0.0);
        auto rs = test::series("WP", Variable::rainfall_mm, "2010-01", flat);
        auto is = test::series("WP", Variable::incidence_count, "2010-01", inc);
        CHECK_THROWS_AS((void)rainfall_cutoffs(rs, is, 0, 10.0), CalibrationError);

        std::vector<double> narrow(30);
        for (std::size_t i = 0; i < narrow.size(); ++i) {
            narrow[i] = 101.0 + static_cast<double>(i % 5);
        }
        auto ns = test::series("WP", Variable::rainfall_mm, "2010-01", narrow);
        try {
            (void)rainfall_cutoffs(ns, is, 0, 50.0);
            FAIL("expected an empty grid");
        } catch (const CalibrationError &e) {
            CHECK(std::string(e.what()).find("empty grid") != std::string::npos);
        }
        CHECK_THROWS_AS((void)rainfall_cutoffs(ns, is, 0, 0.0), ParameterError);
    }
}

TEST_SUITE("exponents")
{
    TEST_CASE("examples")
    {
        auto eq = exponents_from_correlations({0.3, -0.3, 0.3, 0.3});
        CHECK(eq == Exponents{1, 1, 1, 1});
        auto c = exponents_from_correlations({0.4, 0.4, 0.1, 0.1});
        CHECK(c.rainfall == doctest::Approx(1.6));
        CHECK(c.temperature == doctest::Approx(1.6));
        CHECK(c.humidity == doctest::Approx(0.4));
        CHECK(c.mobility == doctest::Approx(0.4));
        auto floored = exponents_from_correlations({0.4, 0.4, 0.4, 0.0});
        CHECK(floored.mobility == doctest::Approx(4 * 0.05 / 1.25));
        CHECK(floored.rainfall == doctest::Approx(4 * 0.4 / 1.25));
        CHECK_THROWS_AS((void)exponents_from_correlations({0.01, 0.0, -0.02, 0.049}), CalibrationError);
    }

    TEST_CASE("sum to four, positive, permutation equivariant")
    {
        test::Gen g(17);
        for (int trial = 0; trial < 500; ++trial) {
            std::array<double, 4> r{};
            for (auto &x : r) {
                x = g.uniform(-1, 1);
            }
            r[static_cast<std::size_t>(g.integer(0, 3))] = 0.9;
            auto c = exponents_from_correlations(r).as_array();
            CHECK(c[0] + c[1] + c[2] + c[3] == doctest::Approx(4.0).epsilon(1e-12));
            for (double v : c) {
                CHECK(v > 0.0);
            }
            std::array<double, 4> perm{r[2], r[0], r[3], r[1]};
            auto cp = exponents_from_correlations(perm).as_array();
            CHECK(cp[0] == doctest::Approx(c[2]).epsilon(1e-12));
            CHECK(cp[1] == doctest::Approx(c[0]).epsilon(1e-12));
            CHECK(cp[2] == doctest::Approx(c[3]).epsilon(1e-12));
            CHECK(cp[3] == doctest::Approx(c[1]).epsilon(1e-12));
        }
    }

    TEST_CASE("constant membership series counts as uncorrelated")
    {
        auto inc = test::series("WP", Variable::incidence_count, "2010-01", {1, 5, 2, 8, 3, 9, 4, 7, 6, 2});
        auto flat = test::series("WP", Variable::membership, "2010-01", std::vector<double>(10, 1.0));
        auto same = test::series("WP", Variable::membership, "2010-01", {1, 5, 2, 8, 3, 9, 4, 7, 6, 2});
        auto r = membership_correlations({same, flat, flat, same}, inc, Lags{0, 0, 0, 0});
        CHECK(r[0] == doctest::Approx(1.0));
        CHECK(r[1] == 0.0);
        CHECK(r[2] == 0.0);
        auto c = estimate_exponents({same, flat, flat, same}, inc, Lags{0, 0, 0, 0});
        CHECK(c.temperature == doctest::Approx(4 * 0.05 / 2.1));
    }
}

TEST_SUITE("calibrate_panel")
{
    TEST_CASE("default lags when the search is skipped")
    {
        CalibrationOptions opts;
        CHECK(opts.fixed_lags == Lags{2, 3, 2, 1});
    }

    TEST_CASE("synthetic panel recovers the planted structure")
    {
        auto data = generate(SynthConfig{});
        auto cal = calibrate_panel(data.panel, "WP");
        CHECK(cal.lags() == Lags{2, 3, 2, 1});
        REQUIRE(cal.cutoffs.has_value());
        CHECK(std::abs(cal.cutoffs->r_min - 150) <= 10);
        CHECK(std::abs(cal.cutoffs->r_max - 350) <= 10);
        auto c = cal.exponents.as_array();
        CHECK(c[0] + c[1] + c[2] + c[3] == doctest::Approx(4.0));
        CHECK(cal.mfs.rainfall == rainfall_mf_from_cutoffs(cal.cutoffs->r_min, cal.cutoffs->r_max));
        CHECK(cal.mfs.mobility == mobility_mf(cal.mobility_c));
        CHECK(cal.incidence_peak > 0);
    }

    TEST_CASE("overrides skip the matching estimation step")
    {
        auto data = generate(SynthConfig{});
        CalibrationOptions opts;
        opts.search_lags = false;
        opts.fixed_lags = Lags{1, 1, 1, 1};
        opts.exponents = Exponents{0.5, 1.5, 1.0, 1.0};
        opts.rainfall_mf = rainfall_mf_from_cutoffs(100, 300);
        opts.mobility_c = 0.5;
        opts.incidence_peak = 1e5;
        auto cal = calibrate_panel(data.panel, "WP", opts);
        CHECK(cal.lags() == Lags{1, 1, 1, 1});
        CHECK_FALSE(cal.rainfall.correlation.has_value());
        CHECK_FALSE(cal.cutoffs.has_value());
        CHECK(cal.exponents == Exponents{0.5, 1.5, 1.0, 1.0});
        CHECK_FALSE(cal.membership_correlations.has_value());
        CHECK(cal.mfs.rainfall == rainfall_mf_from_cutoffs(100, 300));
        CHECK(cal.mobility_c == 0.5);
        CHECK(cal.mfs.mobility == mobility_mf(0.5));
        CHECK(cal.incidence_peak == 1e5);
        auto p = cal.risk_params(0.9, 0.8);
        CHECK(p.r_ideal == 0.9);
        CHECK(p.l_ideal == 0.8);
        CHECK(p.mobility_c == 0.5);
    }

    TEST_CASE("unknown region is a missing-data error")
    {
        auto data = generate(SynthConfig{});
        CHECK_THROWS_AS((void)calibrate_panel(data.panel, "XX"), MissingDataError);
    }
}
