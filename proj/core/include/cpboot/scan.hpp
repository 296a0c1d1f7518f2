#pragma once

#include "cpboot/series.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cpboot {

/// Smallest admissible segment. Two points fit a line exactly and leave the
/// Gaussian likelihood unbounded; three is the smallest nondegenerate size
/// for a two-parameter fit.
inline constexpr std::size_t k_default_min_segment = 3;

/// One segment's ordinary-least-squares line fit together with the Gaussian
/// MLE variance RSS/m, clamped below by the variance floor of the series it
/// came from.
struct SegmentFit {
    double beta0 = 0.0;       ///< intercept, units of y
    double beta1 = 0.0;       ///< slope, units of y per unit t
    double sigma2_mle = 0.0;  ///< max(RSS/m, variance floor)
    std::size_t m = 0;        ///< segment size
};

/// Output of the changepoint scan. statistic[i] holds the log likelihood
/// ratio for the split whose left segment is the first (min_segment + i)
/// points; c_hat is the left-segment size at the argmax (ties resolved
/// toward the smallest split).
struct ScanResult {
    std::vector<double> statistic;
    std::size_t min_segment = k_default_min_segment;
    std::size_t c_hat = 0;
    double max_statistic = 0.0;
    SegmentFit left_fit;
    SegmentFit right_fit;
    SegmentFit full_fit;

    /// Statistic for split k (left segment = first k points).
    [[nodiscard]] double statistic_at(std::size_t k) const;
};

/// Lower clamp applied to every MLE variance computed from this series:
/// max(1e-12, 1e-12 * population variance of y). Keeps log likelihoods
/// finite on exact-fit segments; identical in segment and full fits so the
/// split statistic stays meaningful.
double variance_floor(const TimeSeries& series);

/// OLS fit of y on t over the inclusive index range [lo, hi]. If every t in
/// the range is equal the fit is intercept-only (beta1 = 0). sigma2_mle is
/// RSS/m clamped to the variance floor of the whole series.
SegmentFit fit_segment(const TimeSeries& series, std::size_t lo, std::size_t hi,
                       std::size_t min_segment = k_default_min_segment);

/// Maximized Gaussian log likelihood of a fitted segment:
/// -(m/2) * (log(2*pi*sigma2_mle) + 1).
double gaussian_loglik(const SegmentFit& fit);

/// Log likelihood ratio for the split whose left segment is the first k
/// points: loglik(left) + loglik(right) - loglik(full). k must lie in
/// [min_segment, n - min_segment].
double lrt_statistic_at(const TimeSeries& series, std::size_t k,
                        std::size_t min_segment = k_default_min_segment);

/// Evaluates the split statistic at every admissible k and returns the
/// argmax. Runs in O(n) over prefix sums; agrees with per-split refits to
/// well under 1e-8.
ScanResult scan_changepoint(const TimeSeries& series,
                            std::size_t min_segment = k_default_min_segment);

namespace detail {

/// Hot-path scan over raw arrays: returns c_hat only, no per-split vector.
/// Caller guarantees t sorted, values finite, n >= 2*min_segment.
std::size_t scan_argmax(std::span<const double> t, std::span<const double> y,
                        std::size_t min_segment);

}  // namespace detail
}  // namespace cpboot
