#include <catch2/catch_amalgamated.hpp>

#include "cpboot/null_models.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <random>
#include <vector>

using namespace cpboot;

namespace {

TimeSeries step_series(std::size_t left, std::size_t right, double low, double high) {
    std::vector<double> t;
    std::vector<double> y;
    for (std::size_t i = 0; i < left + right; ++i) {
        t.push_back(static_cast<double>(i + 1));
        y.push_back(i < left ? low : high);
    }
    return TimeSeries(std::move(t), std::move(y));
}

TimeSeries noisy_step(std::size_t n, std::size_t c0, double delta, double sigma,
                      std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> t(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = static_cast<double>(i + 1);
        y[i] = (i >= c0 ? delta : 0.0) + noise(gen);
    }
    return TimeSeries(std::move(t), std::move(y));
}

double range_of(const std::vector<double>& y) {
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    return *hi - *lo;
}

}  // namespace

TEST_CASE("estimate_delta") {
    SECTION("pure step: constant delta of the step height") {
        const TimeSeries series = step_series(10, 10, 0.0, 10.0);
        const DeltaEstimate delta = estimate_delta(series, 3);
        CHECK(delta.c_hat == 10);
        CHECK(delta.d1 == Catch::Approx(0.0).margin(1e-9));
        for (double t = 11.0; t <= 20.0; ++t) {
            CHECK(delta.delta_at(t) == Catch::Approx(10.0).margin(1e-7));
        }
    }
    SECTION("no change: delta vanishes everywhere") {
        std::vector<double> t;
        std::vector<double> y;
        for (std::size_t i = 1; i <= 16; ++i) {
            t.push_back(static_cast<double>(i));
            y.push_back(2.0 + 3.0 * static_cast<double>(i));
        }
        const DeltaEstimate delta = estimate_delta(TimeSeries(t, y), 3);
        for (const double time : t) {
            CHECK(delta.delta_at(time) == Catch::Approx(0.0).margin(1e-7));
        }
    }
    SECTION("slope break: d1 is the slope difference") {
        std::vector<double> t;
        std::vector<double> y;
        for (std::size_t i = 1; i <= 20; ++i) {
            t.push_back(static_cast<double>(i));
            y.push_back(i <= 10 ? static_cast<double>(i) : 10.0);
        }
        const DeltaEstimate delta = estimate_delta(TimeSeries(t, y), 3);
        // splits 9 and 10 are exactly tied (the junction point lies on both
        // models); the tie rule picks 9, and the right segment is still the
        // constant block, so the slope difference is -1 either way
        CHECK(delta.c_hat == 9);
        CHECK(delta.d1 == Catch::Approx(-1.0).margin(1e-9));
    }
}

TEST_CASE("demean_null") {
    SECTION("pure step demeans to a flat series") {
        const TimeSeries series = step_series(10, 10, 0.0, 10.0);
        const TimeSeries null_series = demean_null(series, 3);
        REQUIRE(null_series.size() == series.size());
        CHECK(null_series.times() == series.times());
        for (const double v : null_series.values()) {
            CHECK(v == Catch::Approx(0.0).margin(1e-9));
        }
        CHECK(null_series.provenance().kind == SeriesKind::demeaned_null);
        CHECK(null_series.provenance().parent_digest == series.digest());
    }
    SECTION("positions at or before c_hat are bit-identical") {
        const TimeSeries series = noisy_step(30, 15, 5.0, 1.0, 4);
        const std::size_t c_hat = estimate_delta(series, 3).c_hat;
        const TimeSeries null_series = demean_null(series, 3);
        REQUIRE(std::memcmp(null_series.values().data(), series.values().data(),
                            c_hat * sizeof(double)) == 0);
        bool changed = false;
        for (std::size_t i = c_hat; i < series.size(); ++i) {
            changed = changed || null_series.values()[i] != series.values()[i];
        }
        CHECK(changed);
    }
    SECTION("re-estimating delta on the null cancels, zero-noise input") {
        const TimeSeries series = step_series(12, 8, -2.0, 6.5);
        const TimeSeries null_series = demean_null(series, 3);
        const DeltaEstimate re = estimate_delta(null_series, 3);
        const double bound = 1e-6 * range_of(series.values());
        for (const double time : series.times()) {
            CHECK(std::abs(re.delta_at(time)) <= bound);
        }
    }
    SECTION("demeaning weakens the scan signal on noisy steps") {
        int weaker = 0;
        const int trials = 100;
        for (int s = 0; s < trials; ++s) {
            const TimeSeries series = noisy_step(40, 20, 3.0, 1.0, 1000 + s);
            const TimeSeries null_series = demean_null(series, 3);
            const double before = scan_changepoint(series, 3).max_statistic;
            const double after = scan_changepoint(null_series, 3).max_statistic;
            if (after < before) {
                ++weaker;
            }
        }
        CHECK(weaker > 95);
    }
}

TEST_CASE("permute_null") {
    const TimeSeries series = noisy_step(24, 12, 4.0, 1.0, 9);

    SECTION("preserves the y multiset and fixes t") {
        RngStream rng(5);
        const TimeSeries permuted = permute_null(series, rng);
        CHECK(permuted.times() == series.times());
        std::vector<double> a = series.values();
        std::vector<double> b = permuted.values();
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
        CHECK(permuted.provenance().kind == SeriesKind::permuted_null);
    }
    SECTION("single point is a fixed point") {
        const TimeSeries one({1.0}, {3.0});
        RngStream rng(5);
        const TimeSeries permuted = permute_null(one, rng);
        CHECK(permuted.values() == std::vector<double>{3.0});
    }
    SECTION("fixed stream reproduces the permutation") {
        RngStream a(13);
        RngStream b(13);
        CHECK(permute_null(series, a).values() == permute_null(series, b).values());
    }
    SECTION("permutation is uniform over positions") {
        // each y value should land in each slot with similar frequency
        const TimeSeries small({1, 2, 3}, {10, 20, 30});
        std::map<std::vector<double>, int> orders;
        for (std::uint64_t s = 0; s < 6000; ++s) {
            RngStream rng(s);
            ++orders[permute_null(small, rng).values()];
        }
        REQUIRE(orders.size() == 6);
        for (const auto& [order, count] : orders) {
            CHECK(count > 800);
            CHECK(count < 1200);
        }
    }
}
