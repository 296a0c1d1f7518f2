#include "cpboot/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cpboot {

namespace {

double mean_of(std::span<const double> values) {
    double sum = 0.0;
    for (const double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

double floor_from_values(std::span<const double> y) {
    if (y.empty()) {
        return 1e-12;
    }
    const double mean = mean_of(y);
    double ss = 0.0;
    for (const double v : y) {
        ss += (v - mean) * (v - mean);
    }
    const double var = ss / static_cast<double>(y.size());
    return std::max(1e-12, 1e-12 * var);
}

double loglik_from_rss(std::size_t m, double rss, double floor) {
    const double sigma2 = std::max(rss / static_cast<double>(m), floor);
    return -0.5 * static_cast<double>(m) *
           (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
}

/// Centered second moments of one segment, maintained by the online
/// (Youngs-Cramer) update. Updates stay centered at the running segment
/// means, so there is no differencing of large prefix sums and no
/// catastrophic cancellation; the split statistics agree with two-pass
/// refits to ~1e-12.
struct SegmentMoments {
    double m = 0.0;
    double mean_t = 0.0;
    double mean_y = 0.0;
    double s_tt = 0.0;
    double s_ty = 0.0;
    double s_yy = 0.0;

    void add(double t, double y) {
        m += 1.0;
        const double dt = t - mean_t;
        const double dy = y - mean_y;
        mean_t += dt / m;
        mean_y += dy / m;
        s_tt += dt * (t - mean_t);
        s_ty += dt * (y - mean_y);
        s_yy += dy * (y - mean_y);
    }

    /// OLS residual sum of squares; intercept-only when every t is equal.
    [[nodiscard]] double rss(bool t_all_equal) const {
        if (t_all_equal || s_tt <= 0.0) {
            return std::max(s_yy, 0.0);
        }
        return std::max(s_yy - s_ty * s_ty / s_tt, 0.0);
    }
};

struct ScanOutcome {
    std::size_t c_hat = 0;
    double max_statistic = 0.0;
};

/// Shared scan core. Left-segment moments grow point by point; right-segment
/// moments come from a backward suffix pass, so both sides are built by
/// stable updates only. When statistics is non-null it receives the full
/// per-split vector.
ScanOutcome scan_core(std::span<const double> t, std::span<const double> y,
                      std::size_t min_segment, std::vector<double>* statistics) {
    const std::size_t n = t.size();
    const std::size_t k_last = n - min_segment;

    thread_local std::vector<SegmentMoments> suffix;
    suffix.assign(n + 1, SegmentMoments{});
    for (std::size_t i = n; i-- > 0;) {
        suffix[i] = suffix[i + 1];
        suffix[i].add(t[i], y[i]);
    }

    const double floor = floor_from_values(y);
    const bool t_full_equal = t[n - 1] == t[0];
    const double full_loglik = loglik_from_rss(n, suffix[0].rss(t_full_equal), floor);

    if (statistics != nullptr) {
        statistics->clear();
        statistics->reserve(k_last - min_segment + 1);
    }

    SegmentMoments left;
    for (std::size_t i = 0; i < min_segment; ++i) {
        left.add(t[i], y[i]);
    }

    ScanOutcome out;
    out.c_hat = min_segment;
    out.max_statistic = -std::numeric_limits<double>::infinity();
    for (std::size_t k = min_segment; k <= k_last; ++k) {
        const double left_loglik = loglik_from_rss(k, left.rss(t[k - 1] == t[0]), floor);
        const double right_loglik =
            loglik_from_rss(n - k, suffix[k].rss(t[n - 1] == t[k]), floor);
        const double statistic = left_loglik + right_loglik - full_loglik;
        if (statistics != nullptr) {
            statistics->push_back(statistic);
        }
        if (statistic > out.max_statistic) {  // strict: ties keep the smallest k
            out.max_statistic = statistic;
            out.c_hat = k;
        }
        if (k < k_last) {
            left.add(t[k], y[k]);
        }
    }
    return out;
}

}  // namespace

double ScanResult::statistic_at(std::size_t k) const {
    const std::size_t n = statistic.size();  // admissible split count
    if (k < min_segment || k - min_segment >= n) {
        throw std::out_of_range("ScanResult::statistic_at: split outside admissible range");
    }
    return statistic[k - min_segment];
}

double variance_floor(const TimeSeries& series) {
    return floor_from_values(series.values());
}

SegmentFit fit_segment(const TimeSeries& series, std::size_t lo, std::size_t hi,
                       std::size_t min_segment) {
    if (min_segment == 0) {
        throw std::invalid_argument("fit_segment: min_segment must be positive");
    }
    const std::size_t n = series.size();
    if (lo > hi || hi >= n) {
        throw std::invalid_argument("fit_segment: index range [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "] out of bounds for n=" +
                                    std::to_string(n));
    }
    const std::size_t m = hi - lo + 1;
    if (m < min_segment) {
        throw std::invalid_argument("fit_segment: segment too short, m=" + std::to_string(m) +
                                    " < min_segment=" + std::to_string(min_segment));
    }

    const auto& t = series.times();
    const auto& y = series.values();
    double t_mean = 0.0;
    double y_mean = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
        t_mean += t[i];
        y_mean += y[i];
    }
    t_mean /= static_cast<double>(m);
    y_mean /= static_cast<double>(m);

    double s_tt = 0.0;
    double s_ty = 0.0;
    double s_yy = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
        const double dt = t[i] - t_mean;
        const double dy = y[i] - y_mean;
        s_tt += dt * dt;
        s_ty += dt * dy;
        s_yy += dy * dy;
    }

    SegmentFit fit;
    fit.m = m;
    if (s_tt == 0.0) {  // all t equal: intercept-only
        fit.beta1 = 0.0;
        fit.beta0 = y_mean;
        fit.sigma2_mle = std::max(std::max(s_yy, 0.0) / static_cast<double>(m),
                                  variance_floor(series));
        return fit;
    }
    fit.beta1 = s_ty / s_tt;
    fit.beta0 = y_mean - fit.beta1 * t_mean;
    const double rss = std::max(s_yy - fit.beta1 * s_ty, 0.0);
    fit.sigma2_mle = std::max(rss / static_cast<double>(m), variance_floor(series));
    return fit;
}

double gaussian_loglik(const SegmentFit& fit) {
    if (fit.m == 0 || !(fit.sigma2_mle > 0.0) || !std::isfinite(fit.sigma2_mle)) {
        throw std::invalid_argument("gaussian_loglik: invalid fit");
    }
    return -0.5 * static_cast<double>(fit.m) *
           (std::log(2.0 * std::numbers::pi * fit.sigma2_mle) + 1.0);
}

double lrt_statistic_at(const TimeSeries& series, std::size_t k, std::size_t min_segment) {
    validate(series, min_segment);
    const std::size_t n = series.size();
    if (k < min_segment || k > n - min_segment) {
        throw std::out_of_range("lrt_statistic_at: split k=" + std::to_string(k) +
                                " outside [" + std::to_string(min_segment) + ", " +
                                std::to_string(n - min_segment) + "]");
    }
    const SegmentFit left = fit_segment(series, 0, k - 1, min_segment);
    const SegmentFit right = fit_segment(series, k, n - 1, min_segment);
    const SegmentFit full = fit_segment(series, 0, n - 1, min_segment);
    return gaussian_loglik(left) + gaussian_loglik(right) - gaussian_loglik(full);
}

ScanResult scan_changepoint(const TimeSeries& series, std::size_t min_segment) {
    validate(series, min_segment);
    const std::size_t n = series.size();

    ScanResult result;
    result.min_segment = min_segment;
    const ScanOutcome out =
        scan_core(series.times(), series.values(), min_segment, &result.statistic);
    result.c_hat = out.c_hat;
    result.max_statistic = out.max_statistic;
    result.left_fit = fit_segment(series, 0, result.c_hat - 1, min_segment);
    result.right_fit = fit_segment(series, result.c_hat, n - 1, min_segment);
    result.full_fit = fit_segment(series, 0, n - 1, min_segment);
    return result;
}

namespace detail {

std::size_t scan_argmax(std::span<const double> t, std::span<const double> y,
                        std::size_t min_segment) {
    return scan_core(t, y, min_segment, nullptr).c_hat;
}

}  // namespace detail
}  // namespace cpboot
