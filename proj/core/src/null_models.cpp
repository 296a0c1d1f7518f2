#include "cpboot/null_models.hpp"

#include <utility>

namespace cpboot {

std::string_view to_string(NullMethod method) noexcept {
    switch (method) {
        case NullMethod::demean: return "demean";
        case NullMethod::permute: return "permute";
    }
    return "unknown";
}

DeltaEstimate estimate_delta(const TimeSeries& series, std::size_t min_segment) {
    const ScanResult scan = scan_changepoint(series, min_segment);
    DeltaEstimate delta;
    delta.c_hat = scan.c_hat;
    delta.d0 = scan.right_fit.beta0 - scan.left_fit.beta0;
    delta.d1 = scan.right_fit.beta1 - scan.left_fit.beta1;
    return delta;
}

TimeSeries demean_null(const TimeSeries& series, std::size_t min_segment) {
    const DeltaEstimate delta = estimate_delta(series, min_segment);
    std::vector<double> t = series.times();
    std::vector<double> y = series.values();
    for (std::size_t i = delta.c_hat; i < y.size(); ++i) {  // positions i+1 > c_hat
        y[i] -= delta.delta_at(t[i]);
    }
    return TimeSeries(std::move(t), std::move(y),
                      SeriesProvenance{SeriesKind::demeaned_null, std::nullopt,
                                       series.digest()});
}

TimeSeries permute_null(const TimeSeries& series, RngStream& rng) {
    std::vector<double> t = series.times();
    std::vector<double> y = series.values();
    for (std::size_t i = y.size(); i-- > 1;) {
        const std::size_t j = rng.next_index(i + 1);
        std::swap(y[i], y[j]);
    }
    return TimeSeries(std::move(t), std::move(y),
                      SeriesProvenance{SeriesKind::permuted_null, rng.key(), series.digest()});
}

}  // namespace cpboot
