#include "cpboot/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cpboot {

namespace detail {

TestReport summarize_test(std::vector<double> lambda1_samples,
                          std::vector<double> lambda0_samples, double alpha_test) {
    if (lambda1_samples.empty() || lambda0_samples.empty()) {
        throw std::invalid_argument("summarize_test: empty lambda samples");
    }
    if (!(alpha_test > 0.0 && alpha_test < 1.0)) {
        throw std::invalid_argument("summarize_test: alpha_test must be in (0, 1)");
    }

    std::vector<double> sorted1 = lambda1_samples;
    std::vector<double> sorted0 = lambda0_samples;
    std::sort(sorted1.begin(), sorted1.end());
    std::sort(sorted0.begin(), sorted0.end());

    TestReport report;
    report.lambda1_samples = std::move(lambda1_samples);
    report.lambda0_samples = std::move(lambda0_samples);
    report.t_star = empirical_quantile(sorted0, alpha_test);
    report.lambda1_point = empirical_quantile(sorted1, 0.5);
    report.reject = report.lambda1_point <= report.t_star;

    std::size_t below = 0;
    for (const double lambda : report.lambda1_samples) {
        if (lambda <= report.t_star) {
            ++below;
        }
    }
    report.power = static_cast<double>(below) / static_cast<double>(report.lambda1_samples.size());

    const double lambda0_median = empirical_quantile(sorted0, 0.5);
    if (lambda0_median > 0.0) {
        report.q_hat = report.lambda1_point / lambda0_median;
    } else {
        report.q_hat = report.lambda1_point == 0.0
                           ? 1.0
                           : std::numeric_limits<double>::infinity();
    }
    return report;
}

}  // namespace detail

TimeSeries generate_amoc(std::size_t n, std::size_t c0, double effect_m, double sigma,
                         double beta0, double beta1, RngStream& rng) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("generate_amoc: sigma must be positive and finite");
    }
    if (c0 < k_default_min_segment || c0 + k_default_min_segment > n) {
        throw std::invalid_argument("generate_amoc: c0=" + std::to_string(c0) +
                                    " leaves a segment shorter than min_segment for n=" +
                                    std::to_string(n));
    }
    const double shift = effect_m * sigma;
    std::vector<double> t(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto time = static_cast<double>(i + 1);
        t[i] = time;
        y[i] = beta0 + beta1 * time + (i + 1 > c0 ? shift : 0.0) + rng.next_normal(0.0, sigma);
    }
    return TimeSeries(std::move(t), std::move(y),
                      SeriesProvenance{SeriesKind::synthetic, rng.key(), std::nullopt});
}

TestReport ci_length_test(const TimeSeries& series, const TestConfig& config,
                          const RngStream& rng) {
    validate(config.bootstrap);
    validate(series, config.bootstrap.min_segment);
    if (!(config.alpha_test > 0.0 && config.alpha_test < 1.0)) {
        throw std::invalid_argument("ci_length_test: alpha_test must be in (0, 1)");
    }

    const TimeSeries null_series = [&] {
        if (config.null_method == NullMethod::demean) {
            return demean_null(series, config.bootstrap.min_segment);
        }
        RngStream permute_stream = rng.derive("null", 0);
        return permute_null(series, permute_stream);
    }();

    std::vector<double> lambda1 =
        lambda_distribution(series, config.bootstrap, rng.derive("lambda1", 0));
    std::vector<double> lambda0 =
        lambda_distribution(null_series, config.bootstrap, rng.derive("lambda0", 0));

    TestReport report =
        detail::summarize_test(std::move(lambda1), std::move(lambda0), config.alpha_test);
    report.c_hat = scan_changepoint(series, config.bootstrap.min_segment).c_hat;
    return report;
}

double power_estimate(const TestReport& report) {
    if (report.lambda1_samples.empty()) {
        throw std::invalid_argument("power_estimate: empty lambda1 samples");
    }
    std::size_t below = 0;
    for (const double lambda : report.lambda1_samples) {
        if (lambda <= report.t_star) {
            ++below;
        }
    }
    return static_cast<double>(below) / static_cast<double>(report.lambda1_samples.size());
}

PowerCurve power_curve(const std::vector<double>& effect_grid, std::size_t n, double sigma,
                       const TestConfig& config, const RngStream& rng, std::size_t repeats,
                       std::size_t c0, double beta0, double beta1) {
    if (effect_grid.empty()) {
        throw std::invalid_argument("power_curve: effect grid must be nonempty");
    }
    if (repeats == 0) {
        throw std::invalid_argument("power_curve: repeats must be positive");
    }
    const std::size_t changepoint = c0 == 0 ? n / 2 : c0;

    PowerCurve curve;
    curve.effect_grid = effect_grid;
    curve.power.assign(effect_grid.size(), 0.0);
    curve.n = n;
    curve.sigma = sigma;
    curve.c0 = changepoint;
    curve.null_method = config.null_method;
    curve.seed = config.bootstrap.seed;
    curve.repeats = repeats;

    for (std::size_t i = 0; i < effect_grid.size(); ++i) {
        const RngStream grid_stream = rng.derive("grid", i);
        double total = 0.0;
        for (std::size_t r = 0; r < repeats; ++r) {
            const RngStream repeat_stream = grid_stream.derive("rep", r);
            RngStream synth_stream = repeat_stream.derive("synth", 0);
            const TimeSeries series =
                generate_amoc(n, changepoint, effect_grid[i], sigma, beta0, beta1, synth_stream);
            total += ci_length_test(series, config, repeat_stream.derive("test", 0)).power;
        }
        curve.power[i] = total / static_cast<double>(repeats);
    }
    return curve;
}

}  // namespace cpboot
