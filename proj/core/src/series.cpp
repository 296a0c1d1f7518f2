#include "cpboot/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <system_error>

namespace cpboot {

namespace {

std::uint64_t fnv1a64_bytes(std::uint64_t h, const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() &&
           (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    return text;
}

[[noreturn]] void fail_at(const std::filesystem::path& path, std::size_t line, const std::string& message) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + message);
}

double parse_field(std::string_view field, const std::filesystem::path& path, std::size_t line,
                   const char* column) {
    field = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        fail_at(path, line, std::string("malformed value in column ") + column + ": '" +
                                std::string(field) + "'");
    }
    if (!std::isfinite(value)) {
        fail_at(path, line, std::string("non-finite value in column ") + column);
    }
    return value;
}

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

}  // namespace

std::string_view to_string(SeriesKind kind) noexcept {
    switch (kind) {
        case SeriesKind::observed: return "observed";
        case SeriesKind::demeaned_null: return "demeaned-null";
        case SeriesKind::permuted_null: return "permuted-null";
        case SeriesKind::bootstrap_replicate: return "bootstrap-replicate";
        case SeriesKind::synthetic: return "synthetic";
    }
    return "unknown";
}

TimeSeries::TimeSeries(std::vector<double> t, std::vector<double> y, SeriesProvenance provenance)
    : t_(std::move(t)), y_(std::move(y)), provenance_(provenance) {
    if (t_.size() != y_.size()) {
        throw std::invalid_argument("TimeSeries: length mismatch between t (" +
                                    std::to_string(t_.size()) + ") and y (" +
                                    std::to_string(y_.size()) + ")");
    }
}

std::uint64_t TimeSeries::digest() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a64_bytes(h, t_.data(), t_.size() * sizeof(double));
    h = fnv1a64_bytes(h, y_.data(), y_.size() * sizeof(double));
    return h;
}

TimeSeries load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path.string());
    }

    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) {
        fail_at(path, 1, "empty file, expected header 't,y'");
    }
    if (trim(line) != "t,y") {
        fail_at(path, 1, "expected header 't,y', got '" + std::string(trim(line)) + "'");
    }

    std::vector<double> t;
    std::vector<double> y;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        const std::size_t comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
            fail_at(path, line_no, "malformed row, expected exactly two comma-separated values");
        }
        t.push_back(parse_field(row.substr(0, comma), path, line_no, "t"));
        y.push_back(parse_field(row.substr(comma + 1), path, line_no, "y"));
    }
    if (t.size() < 2) {
        throw std::runtime_error(path.string() + ": fewer than 2 data rows (" +
                                 std::to_string(t.size()) + ")");
    }

    // Stable sort by t; ties keep file order.
    std::vector<std::size_t> order(t.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
    std::vector<double> sorted_t(t.size());
    std::vector<double> sorted_y(t.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        sorted_t[i] = t[order[i]];
        sorted_y[i] = y[order[i]];
    }

    return TimeSeries(std::move(sorted_t), std::move(sorted_y),
                      SeriesProvenance{SeriesKind::observed, std::nullopt, std::nullopt});
}

std::string to_csv(const TimeSeries& series) {
    std::string out = "t,y\n";
    const auto& t = series.times();
    const auto& y = series.values();
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += format_double(t[i]);
        out += ',';
        out += format_double(y[i]);
        out += '\n';
    }
    return out;
}

void write_csv(const TimeSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open file for writing: " + path.string());
    }
    out << to_csv(series);
    if (!out) {
        throw std::runtime_error("failed writing: " + path.string());
    }
}

void validate(const TimeSeries& series, std::size_t min_segment) {
    if (min_segment == 0) {
        throw std::invalid_argument("validate: min_segment must be positive");
    }
    if (series.times().size() != series.values().size()) {
        throw std::invalid_argument("validate: length mismatch");
    }
    const std::size_t n = series.size();
    if (n < 2 * min_segment) {
        throw std::invalid_argument("validate: series too short, n=" + std::to_string(n) +
                                    " but need at least 2*min_segment=" +
                                    std::to_string(2 * min_segment));
    }
    const auto& t = series.times();
    const auto& y = series.values();
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(y[i])) {
            throw std::invalid_argument("validate: non-finite value at position " +
                                        std::to_string(i));
        }
        if (i > 0 && t[i] < t[i - 1]) {
            throw std::invalid_argument("validate: unordered t at position " + std::to_string(i));
        }
    }
}

}  // namespace cpboot
