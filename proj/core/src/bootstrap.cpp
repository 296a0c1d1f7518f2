#include "cpboot/bootstrap.hpp"

#include "cpboot/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cpboot {

namespace {

/// Draws n indices with replacement as a count vector and appends the
/// selected pairs in index order. The source series is t-sorted with ties in
/// input order, so ascending indices give t-ascending output with stable
/// ties.
void resample_into(const TimeSeries& series, RngStream& rng, std::vector<double>& t_out,
                   std::vector<double>& y_out, std::vector<std::uint32_t>& counts) {
    const std::size_t n = series.size();
    counts.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++counts[rng.next_index(n)];
    }
    const auto& t = series.times();
    const auto& y = series.values();
    t_out.clear();
    y_out.clear();
    t_out.reserve(n);
    y_out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t c = 0; c < counts[i]; ++c) {
            t_out.push_back(t[i]);
            y_out.push_back(y[i]);
        }
    }
}

}  // namespace

void validate(const BootstrapConfig& config) {
    if (config.b_inner < 2) {
        throw std::invalid_argument("BootstrapConfig: b_inner must be >= 2");
    }
    if (config.r_outer < 2) {
        throw std::invalid_argument("BootstrapConfig: r_outer must be >= 2");
    }
    if (!(config.alpha_ci > 0.0 && config.alpha_ci < 1.0)) {
        throw std::invalid_argument("BootstrapConfig: alpha_ci must be in (0, 1)");
    }
    if (config.min_segment == 0) {
        throw std::invalid_argument("BootstrapConfig: min_segment must be positive");
    }
}

double empirical_quantile(std::span<const double> sorted_values, double p) {
    if (sorted_values.empty()) {
        throw std::invalid_argument("empirical_quantile: empty distribution");
    }
    p = std::clamp(p, 0.0, 1.0);
    const std::size_t count = sorted_values.size();
    const double h = static_cast<double>(count - 1) * p + 1.0;
    const auto index = static_cast<std::size_t>(h);  // floor; h >= 1
    if (index >= count) {
        return sorted_values[count - 1];
    }
    const double fraction = h - static_cast<double>(index);
    return sorted_values[index - 1] +
           fraction * (sorted_values[index] - sorted_values[index - 1]);
}

TimeSeries resample_pairs(const TimeSeries& series, RngStream& rng) {
    if (series.size() == 0) {
        throw std::invalid_argument("resample_pairs: empty series");
    }
    std::vector<double> t_out;
    std::vector<double> y_out;
    std::vector<std::uint32_t> counts;
    resample_into(series, rng, t_out, y_out, counts);
    return TimeSeries(std::move(t_out), std::move(y_out),
                      SeriesProvenance{SeriesKind::bootstrap_replicate, rng.key(),
                                       series.digest()});
}

BootstrapDistribution bootstrap_changepoint_distribution(const TimeSeries& series,
                                                         const BootstrapConfig& config,
                                                         const RngStream& rng) {
    validate(config);
    validate(series, config.min_segment);

    std::vector<double> values(config.b_inner);
    detail::parallel_for(config.b_inner, [&](std::size_t j) {
        RngStream sub = rng.derive("inner", j);
        thread_local std::vector<double> t_buf;
        thread_local std::vector<double> y_buf;
        thread_local std::vector<std::uint32_t> counts;
        resample_into(series, sub, t_buf, y_buf, counts);
        values[j] = static_cast<double>(detail::scan_argmax(t_buf, y_buf, config.min_segment));
    });
    std::sort(values.begin(), values.end());
    return BootstrapDistribution{std::move(values)};
}

ConfidenceInterval percentile_interval(const BootstrapDistribution& dist, double alpha_ci) {
    if (dist.values.empty()) {
        throw std::invalid_argument("percentile_interval: empty distribution");
    }
    if (!(alpha_ci > 0.0 && alpha_ci < 1.0)) {
        throw std::invalid_argument("percentile_interval: alpha_ci must be in (0, 1)");
    }
    ConfidenceInterval ci;
    ci.lower = empirical_quantile(dist.values, alpha_ci / 2.0);
    ci.upper = empirical_quantile(dist.values, 1.0 - alpha_ci / 2.0);
    ci.length = ci.upper - ci.lower;
    ci.level = 1.0 - alpha_ci;
    return ci;
}

std::vector<double> lambda_distribution(const TimeSeries& series, const BootstrapConfig& config,
                                        const RngStream& rng) {
    validate(config);
    validate(series, config.min_segment);

    std::vector<double> lengths(config.r_outer);
    detail::parallel_for(config.r_outer, [&](std::size_t r) {
        const RngStream sub = rng.derive("outer", r);
        const BootstrapDistribution dist = bootstrap_changepoint_distribution(series, config, sub);
        lengths[r] = percentile_interval(dist, config.alpha_ci).length;
    });
    return lengths;
}

}  // namespace cpboot
