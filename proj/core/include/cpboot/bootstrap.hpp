#pragma once

#include "cpboot/rng.hpp"
#include "cpboot/scan.hpp"
#include "cpboot/series.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cpboot {

struct BootstrapConfig {
    std::size_t b_inner = 1000;  ///< bootstrap replicates per changepoint distribution
    std::size_t r_outer = 200;   ///< repetitions forming a CI-length sampling distribution
    double alpha_ci = 0.05;      ///< level of the percentile interval
    std::uint64_t seed = 0;
    std::size_t min_segment = k_default_min_segment;
};

/// Throws std::invalid_argument unless b_inner >= 2, r_outer >= 2 and
/// alpha_ci in (0, 1).
void validate(const BootstrapConfig& config);

/// Empirical distribution of bootstrap changepoint estimates, sorted
/// ascending. Values are left-segment sizes, each in [min_segment,
/// n - min_segment].
struct BootstrapDistribution {
    std::vector<double> values;
};

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double length = 0.0;  ///< upper - lower
    double level = 0.0;   ///< 1 - alpha_ci
};

/// Empirical quantile with linear interpolation between order statistics:
/// with sorted values v_(1..B), Q(p) = v_(floor(h)) + (h - floor(h)) *
/// (v_(floor(h)+1) - v_(floor(h))) where h = (B-1)p + 1. p is clamped to
/// [0, 1]; values must be sorted ascending.
double empirical_quantile(std::span<const double> sorted_values, double p);

/// One pair-preserving bootstrap replicate: n index draws uniformly with
/// replacement, each (t_i, y_i) kept intact, emitted in t-ascending order
/// (ties stable with respect to input order).
TimeSeries resample_pairs(const TimeSeries& series, RngStream& rng);

/// B = b_inner replicates scanned for their changepoint estimates.
/// Replicate j draws from rng.derive("inner", j), so the distribution is
/// identical no matter how the replicates are scheduled.
BootstrapDistribution bootstrap_changepoint_distribution(const TimeSeries& series,
                                                         const BootstrapConfig& config,
                                                         const RngStream& rng);

/// Percentile interval (Q(alpha/2), Q(1 - alpha/2)) of a bootstrap
/// changepoint distribution. Only the length is contractually meaningful;
/// lower and upper are the raw quantiles.
ConfidenceInterval percentile_interval(const BootstrapDistribution& dist, double alpha_ci);

/// R = r_outer CI lengths, each from a freshly drawn bootstrap changepoint
/// distribution. Repetition r draws from rng.derive("outer", r). Returned
/// in repetition order.
std::vector<double> lambda_distribution(const TimeSeries& series, const BootstrapConfig& config,
                                        const RngStream& rng);

}  // namespace cpboot
