#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cpboot {

/// How a series came to exist. Distinguishes observed data from the
/// estimated no-changepoint datasets and from bootstrap replicates.
enum class SeriesKind {
    observed,
    demeaned_null,
    permuted_null,
    bootstrap_replicate,
    synthetic,
};

std::string_view to_string(SeriesKind kind) noexcept;

struct SeriesProvenance {
    SeriesKind kind = SeriesKind::observed;
    std::optional<std::uint64_t> seed;           ///< stream key, when randomness was involved
    std::optional<std::uint64_t> parent_digest;  ///< digest of the source series, when derived
};

/// Ordered bivariate series: time coordinates t (non-decreasing, duplicates
/// allowed) and observations y of equal length. Immutable after
/// construction; safe to share across threads.
class TimeSeries {
public:
    TimeSeries() = default;

    /// Throws std::invalid_argument if t and y differ in length. Ordering
    /// and finiteness are checked by validate(), not here, so that
    /// validation failures are reportable on loaded data.
    TimeSeries(std::vector<double> t, std::vector<double> y, SeriesProvenance provenance = {});

    [[nodiscard]] std::size_t size() const noexcept { return t_.size(); }
    [[nodiscard]] const std::vector<double>& times() const noexcept { return t_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return y_; }
    [[nodiscard]] const SeriesProvenance& provenance() const noexcept { return provenance_; }

    /// FNV-1a over the raw bytes of (t, y). Identifies a series exactly.
    [[nodiscard]] std::uint64_t digest() const noexcept;

private:
    std::vector<double> t_;
    std::vector<double> y_;
    SeriesProvenance provenance_;
};

/// Reads a `t,y` CSV (UTF-8, '.' decimals, header required) and returns the
/// series sorted by t ascending, ties keeping file order. Errors carry the
/// 1-based line number of the offending row.
TimeSeries load_csv(const std::filesystem::path& path);

/// Canonical CSV emission: header `t,y`, one pair per line, shortest
/// round-trip decimal form. load_csv(write_csv(s)) reproduces s bit-exactly.
std::string to_csv(const TimeSeries& series);
void write_csv(const TimeSeries& series, const std::filesystem::path& path);

/// Checks every TimeSeries invariant plus n >= 2*min_segment. Throws
/// std::invalid_argument describing the first violation.
void validate(const TimeSeries& series, std::size_t min_segment);

}  // namespace cpboot
