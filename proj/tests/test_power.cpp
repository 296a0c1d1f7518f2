#include <catch2/catch_amalgamated.hpp>

#include "cpboot/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

using namespace cpboot;

namespace {

TestConfig small_config(NullMethod method, std::uint64_t seed) {
    TestConfig config;
    config.bootstrap.b_inner = 80;
    config.bootstrap.r_outer = 24;
    config.bootstrap.seed = seed;
    config.null_method = method;
    return config;
}

}  // namespace

TEST_CASE("generate_amoc") {
    SECTION("times are 1..n and the shift lands after c0") {
        RngStream rng(3);
        // sigma tiny, effect_m*sigma = 1.0: the structure is visible directly
        const TimeSeries series = generate_amoc(50, 25, 1e9, 1e-9, 2.0, 0.5, rng);
        REQUIRE(series.size() == 50);
        for (std::size_t i = 0; i < 50; ++i) {
            REQUIRE(series.times()[i] == static_cast<double>(i + 1));
        }
        for (std::size_t i = 0; i < 50; ++i) {
            const double expected =
                2.0 + 0.5 * static_cast<double>(i + 1) + (i + 1 > 25 ? 1.0 : 0.0);
            REQUIRE(series.values()[i] == Catch::Approx(expected).margin(1e-6));
        }
        CHECK(series.provenance().kind == SeriesKind::synthetic);
    }
    SECTION("near-noiseless step is recovered exactly") {
        RngStream rng(8);
        // sigma tiny, effect_m huge so the shift itself is 5.0
        const TimeSeries series = generate_amoc(40, 17, 5.0e6, 1e-6, 0.0, 0.0, rng);
        CHECK(scan_changepoint(series, 3).c_hat == 17);
    }
    SECTION("mean difference concentrates at effect_m * sigma") {
        const double sigma = 2.0;
        const double effect = 1.5;
        const std::size_t n = 100;
        const std::size_t c0 = 50;
        const double se = sigma * std::sqrt(1.0 / 50.0 + 1.0 / 50.0);
        for (std::uint64_t s = 1; s <= 20; ++s) {
            RngStream rng(s);
            const TimeSeries series = generate_amoc(n, c0, effect, sigma, 0.0, 0.0, rng);
            double left = 0.0;
            double right = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                (i < c0 ? left : right) += series.values()[i];
            }
            const double diff = right / 50.0 - left / 50.0;
            REQUIRE(std::abs(diff - effect * sigma) <= 4.0 * se);
        }
    }
    SECTION("invalid parameters") {
        RngStream rng(1);
        CHECK_THROWS_AS(generate_amoc(10, 2, 1.0, 1.0, 0.0, 0.0, rng), std::invalid_argument);
        CHECK_THROWS_AS(generate_amoc(10, 8, 1.0, 1.0, 0.0, 0.0, rng), std::invalid_argument);
        CHECK_THROWS_AS(generate_amoc(10, 5, 1.0, 0.0, 0.0, 0.0, rng), std::invalid_argument);
        CHECK_THROWS_AS(generate_amoc(10, 5, 1.0, -1.0, 0.0, 0.0, rng), std::invalid_argument);
    }
    SECTION("every generated series passes validation") {
        for (std::uint64_t s = 0; s < 10; ++s) {
            RngStream rng(s);
            const TimeSeries series = generate_amoc(20 + 3 * s, 10 + s, 1.0, 2.0, -1.0, 0.3, rng);
            CHECK_NOTHROW(validate(series, 3));
        }
    }
}

TEST_CASE("summarize_test combines the lambda samples") {
    SECTION("clear separation rejects with full power") {
        const TestReport report = detail::summarize_test(std::vector<double>(8, 2.0),
                                                         std::vector<double>(8, 50.0), 0.05);
        CHECK(report.t_star == 50.0);
        CHECK(report.lambda1_point == 2.0);
        CHECK(report.reject);
        CHECK(report.power == 1.0);
        CHECK(report.q_hat == Catch::Approx(0.04));
    }
    SECTION("ties at the critical value count as rejection") {
        const TestReport report = detail::summarize_test(std::vector<double>(6, 5.0),
                                                         std::vector<double>(6, 5.0), 0.05);
        CHECK(report.t_star == 5.0);
        CHECK(report.reject);
        CHECK(report.power == 1.0);
        CHECK(report.q_hat == Catch::Approx(1.0));
    }
    SECTION("identical-law samples with spread reject rarely") {
        std::vector<double> lambda1{10, 11, 12, 13, 14, 15, 16, 17, 18, 19};
        std::vector<double> lambda0 = lambda1;
        const TestReport report = detail::summarize_test(lambda1, lambda0, 0.05);
        CHECK_FALSE(report.reject);
        CHECK(report.power == Catch::Approx(0.1));  // one of ten at/below Q(0.05)=10.45
        CHECK(report.q_hat == Catch::Approx(1.0));
    }
    SECTION("zero-length null guard") {
        const TestReport zero = detail::summarize_test(std::vector<double>(4, 0.0),
                                                       std::vector<double>(4, 0.0), 0.05);
        CHECK(zero.q_hat == 1.0);
        const TestReport infinite = detail::summarize_test(std::vector<double>(4, 3.0),
                                                           std::vector<double>(4, 0.0), 0.05);
        CHECK(std::isinf(infinite.q_hat));
        CHECK(infinite.power == 0.0);
    }
    SECTION("invalid inputs") {
        CHECK_THROWS_AS(detail::summarize_test({}, {1.0}, 0.05), std::invalid_argument);
        CHECK_THROWS_AS(detail::summarize_test({1.0}, {1.0}, 0.0), std::invalid_argument);
    }
}

TEST_CASE("power_estimate recomputes the stored proportion") {
    TestReport report;
    report.lambda1_samples = {1.0, 2.0, 3.0, 4.0};
    report.t_star = 2.5;
    CHECK(power_estimate(report) == Catch::Approx(0.5));
    report.t_star = 0.5;
    CHECK(power_estimate(report) == 0.0);
    report.t_star = 10.0;
    CHECK(power_estimate(report) == 1.0);
    report.t_star = 3.0;  // tie counts
    CHECK(power_estimate(report) == Catch::Approx(0.75));
}

TEST_CASE("ci_length_test") {
    RngStream synth(41);
    const TimeSeries series = generate_amoc(60, 30, 3.0, 1.0, 0.0, 0.0, synth);

    SECTION("deterministic full report") {
        const TestConfig config = small_config(NullMethod::demean, 41);
        const TestReport a = ci_length_test(series, config, RngStream(41));
        const TestReport b = ci_length_test(series, config, RngStream(41));
        CHECK(a.lambda1_samples == b.lambda1_samples);
        CHECK(a.lambda0_samples == b.lambda0_samples);
        CHECK(a.t_star == b.t_star);
        CHECK(a.reject == b.reject);
        CHECK(a.power == b.power);
        CHECK(a.c_hat == scan_changepoint(series, 3).c_hat);
        CHECK(a.power == power_estimate(a));
        CHECK(a.reject == (a.lambda1_point <= a.t_star));
    }
    SECTION("null method changes only the null-dependent side") {
        const TestReport demean =
            ci_length_test(series, small_config(NullMethod::demean, 7), RngStream(7));
        const TestReport permute =
            ci_length_test(series, small_config(NullMethod::permute, 7), RngStream(7));
        // lambda1 comes from the observed series on the same substream, so it
        // cannot depend on the null method; lambda0 may (the two null series
        // differ even when their interval lengths happen to coincide)
        CHECK(demean.lambda1_samples == permute.lambda1_samples);
        CHECK(demean.c_hat == permute.c_hat);
        CHECK(demean_null(series, 3).values() != series.values());
    }
    SECTION("strong step rejects") {
        const TestReport report =
            ci_length_test(series, small_config(NullMethod::demean, 3), RngStream(3));
        CHECK(report.reject);
        CHECK(report.power > 0.5);
    }
    SECTION("3-sigma effect rejects in at least 90% of 50 seeded runs") {
        TestConfig config;
        config.bootstrap.b_inner = 150;
        config.bootstrap.r_outer = 40;
        config.null_method = NullMethod::demean;
        int rejections = 0;
        for (std::uint64_t s = 1; s <= 50; ++s) {
            RngStream root(s);
            RngStream gen = root.derive("synth", 0);
            const TimeSeries data = generate_amoc(100, 50, 3.0, 1.0, 0.0, 0.0, gen);
            if (ci_length_test(data, config, root.derive("test", 0)).reject) {
                ++rejections;
            }
        }
        CHECK(rejections >= 45);
    }
    SECTION("same series on both sides: lambda laws agree") {
        // a series tested against itself (independent substreams) must give
        // lambda1 and lambda0 samples from the same distribution
        const TestConfig config = small_config(NullMethod::demean, 5);
        std::vector<double> first =
            lambda_distribution(series, config.bootstrap, RngStream(100).derive("lambda1", 0));
        std::vector<double> second =
            lambda_distribution(series, config.bootstrap, RngStream(100).derive("lambda0", 0));
        std::sort(first.begin(), first.end());
        std::sort(second.begin(), second.end());
        const double med1 = empirical_quantile(first, 0.5);
        const double med0 = empirical_quantile(second, 0.5);
        CHECK(std::abs(med1 - med0) <= 0.25 * std::max({med1, med0, 4.0}));
    }
    SECTION("scale equivariance: y and sigma scaled together change nothing") {
        std::vector<double> scaled = series.values();
        for (auto& v : scaled) v *= 4.0;  // power of two keeps OLS exact
        const TimeSeries scaled_series(series.times(), scaled);
        const TestConfig config = small_config(NullMethod::demean, 11);
        const TestReport base = ci_length_test(series, config, RngStream(11));
        const TestReport other = ci_length_test(scaled_series, config, RngStream(11));
        CHECK(base.c_hat == other.c_hat);
        CHECK(base.reject == other.reject);
        CHECK(std::abs(base.power - other.power) <= 1e-6);
        CHECK(base.lambda1_samples == other.lambda1_samples);
    }
    SECTION("alpha_test bounds") {
        TestConfig config = small_config(NullMethod::demean, 1);
        config.alpha_test = 0.0;
        CHECK_THROWS_AS(ci_length_test(series, config, RngStream(1)), std::invalid_argument);
    }
}

TEST_CASE("power_curve") {
    TestConfig config = small_config(NullMethod::demean, 19);

    SECTION("one entry per grid point, echoing the setup") {
        const std::vector<double> grid{0.0, 3.0};
        const PowerCurve curve = power_curve(grid, 40, 1.0, config, RngStream(19));
        REQUIRE(curve.effect_grid == grid);
        REQUIRE(curve.power.size() == 2);
        for (const double p : curve.power) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
        CHECK(curve.n == 40);
        CHECK(curve.c0 == 20);  // default n/2
        CHECK(curve.sigma == 1.0);
        CHECK(curve.null_method == NullMethod::demean);
        CHECK(curve.seed == 19);
        CHECK(curve.repeats == 1);
    }
    SECTION("deterministic and sensitive to the seed") {
        const std::vector<double> grid{1.0};
        const PowerCurve a = power_curve(grid, 30, 1.0, config, RngStream(19));
        const PowerCurve b = power_curve(grid, 30, 1.0, config, RngStream(19));
        CHECK(a.power == b.power);
    }
    SECTION("repeats average fresh datasets") {
        const std::vector<double> grid{2.0};
        const PowerCurve averaged = power_curve(grid, 30, 1.0, config, RngStream(5), 3);
        CHECK(averaged.repeats == 3);
        REQUIRE(averaged.power.size() == 1);
        CHECK(averaged.power[0] >= 0.0);
        CHECK(averaged.power[0] <= 1.0);
    }
    SECTION("explicit changepoint position") {
        const PowerCurve curve = power_curve({3.0}, 30, 1.0, config, RngStream(5), 1, 10);
        CHECK(curve.c0 == 10);
    }
    SECTION("invalid arguments") {
        CHECK_THROWS_AS(power_curve({}, 30, 1.0, config, RngStream(1)), std::invalid_argument);
        CHECK_THROWS_AS(power_curve({1.0}, 30, 1.0, config, RngStream(1), 0),
                        std::invalid_argument);
    }
}
