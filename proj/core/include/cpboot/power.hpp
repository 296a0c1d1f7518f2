#pragma once

#include "cpboot/bootstrap.hpp"
#include "cpboot/null_models.hpp"
#include "cpboot/rng.hpp"
#include "cpboot/series.hpp"

#include <cstddef>
#include <vector>

namespace cpboot {

struct TestConfig {
    BootstrapConfig bootstrap;
    double alpha_test = 0.05;
    NullMethod null_method = NullMethod::demean;
};

/// Outcome of the CI-length hypothesis test. lambda1 samples come from the
/// observed series, lambda0 samples from the estimated no-changepoint
/// series; t_star is the alpha_test quantile of the lambda0 samples, and
/// every lambda1 value at or below it counts toward the rejection region.
struct TestReport {
    std::vector<double> lambda1_samples;
    std::vector<double> lambda0_samples;
    double t_star = 0.0;
    double lambda1_point = 0.0;  ///< median of the lambda1 samples
    double q_hat = 0.0;          ///< diagnostic: lambda1_point / median(lambda0)
    double power = 0.0;          ///< fraction of lambda1 samples <= t_star
    bool reject = false;         ///< lambda1_point <= t_star
    std::size_t c_hat = 0;       ///< scan changepoint of the observed series
};

/// Power curve over effect sizes expressed in multiples of sigma.
struct PowerCurve {
    std::vector<double> effect_grid;
    std::vector<double> power;
    std::size_t n = 0;
    double sigma = 0.0;
    std::size_t c0 = 0;
    NullMethod null_method = NullMethod::demean;
    std::uint64_t seed = 0;
    std::size_t repeats = 1;
};

/// Synthetic at-most-one-changepoint series: t_i = i for i = 1..n and
/// y_i = beta0 + beta1*i + effect_m*sigma*[i > c0] + eps_i with eps_i iid
/// normal(0, sigma^2). c0 must leave both segments at least
/// k_default_min_segment long.
TimeSeries generate_amoc(std::size_t n, std::size_t c0, double effect_m, double sigma,
                         double beta0, double beta1, RngStream& rng);

/// The CI-length test: builds the null series per config, samples both
/// lambda distributions on independent substreams, and compares the lambda1
/// point estimate against t_star. Ties count as rejection.
TestReport ci_length_test(const TimeSeries& series, const TestConfig& config,
                          const RngStream& rng);

/// Proportion of the stored lambda1 samples at or below the stored t_star.
double power_estimate(const TestReport& report);

/// Runs ci_length_test on synthetic series over the effect grid. Grid point
/// i uses substream (seed, "grid", i); with repeats > 1 the power at each
/// point is averaged over fresh datasets. c0 = 0 selects n/2.
PowerCurve power_curve(const std::vector<double>& effect_grid, std::size_t n, double sigma,
                       const TestConfig& config, const RngStream& rng, std::size_t repeats = 1,
                       std::size_t c0 = 0, double beta0 = 0.0, double beta1 = 0.0);

namespace detail {

/// Combines the two lambda samples into the test decision. Factored out so
/// the decision arithmetic is testable against hand-built samples.
TestReport summarize_test(std::vector<double> lambda1_samples,
                          std::vector<double> lambda0_samples, double alpha_test);

}  // namespace detail
}  // namespace cpboot
