#pragma once

#include "cpboot/rng.hpp"
#include "cpboot/scan.hpp"
#include "cpboot/series.hpp"

#include <cstddef>

namespace cpboot {

/// How the estimated no-changepoint dataset is constructed: demeaning
/// removes the fitted mean difference after the estimated changepoint and
/// keeps the residual structure; permuting shuffles y against t and
/// destroys all structure.
enum class NullMethod {
    demean,
    permute,
};

std::string_view to_string(NullMethod method) noexcept;

/// Fitted mean difference across the estimated changepoint, affine in t:
/// delta(t) = d0 + d1 * t. For a pure step (equal slopes) it is constant.
struct DeltaEstimate {
    std::size_t c_hat = 0;  ///< left-segment size at the scan argmax
    double d0 = 0.0;        ///< right intercept minus left intercept
    double d1 = 0.0;        ///< right slope minus left slope

    [[nodiscard]] double delta_at(double t) const noexcept { return d0 + d1 * t; }
};

/// Scans for the changepoint, fits both segments there, and returns the
/// coefficient differences.
DeltaEstimate estimate_delta(const TimeSeries& series,
                             std::size_t min_segment = k_default_min_segment);

/// Estimated no-changepoint dataset: y_i unchanged for i <= c_hat, and
/// y_i - delta(t_i) beyond it. t is unchanged and the positions at or
/// before c_hat are bit-identical to the input.
TimeSeries demean_null(const TimeSeries& series,
                       std::size_t min_segment = k_default_min_segment);

/// Alternative no-changepoint dataset: t fixed, y uniformly permuted
/// (Fisher-Yates). Preserves the y multiset exactly.
TimeSeries permute_null(const TimeSeries& series, RngStream& rng);

}  // namespace cpboot
