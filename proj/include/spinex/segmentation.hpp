#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinex/core.hpp"
#include "spinex/seasonality.hpp"
#include "spinex/stats.hpp"

namespace spinex {

/// Overlapping stride-1 windows, each normalised to (x - mean) / (std + 1e-8).
/// Row i starts at source index i.
struct SegmentMatrix {
    Matrix rows;
    std::size_t source_length = 0;
    std::size_t window_size = 0;

    std::size_t size() const noexcept { return rows.rows(); }
};

namespace detail {

inline void normalise_into(std::span<const double> window, std::span<double> out) {
    const double m = stats::mean(window);
    const double sd = stats::stddev(window);
    for (std::size_t k = 0; k < window.size(); ++k) out[k] = (window[k] - m) / (sd + 1e-8);
}

} // namespace detail

/// If the series is shorter than the requested window the window becomes
/// len/2. A lone window that fits is returned as a single normalised row.
inline SegmentMatrix extract_segments(const TimeSeries& series, std::size_t window_size) {
    const std::size_t n = series.size();
    if (n < 2) throw TooShort("extract_segments: need at least 2 points");
    if (window_size == 0) throw InvalidArgument("extract_segments: window size must be positive");
    if (n < window_size) window_size = n / 2;

    const std::size_t count = n - window_size + 1;
    const auto values = series.values();
    SegmentMatrix out{Matrix(count, window_size), n, window_size};
    for (std::size_t i = 0; i < count; ++i) detail::normalise_into(values.subspan(i, window_size), out.rows.row(i));
    return out;
}

/// Length-tiered base window, widened by the coefficient of variation or
/// capped by a detected seasonal period, then clamped to [2, len/8].
inline std::size_t adaptive_window_size(const TimeSeries& series) {
    const std::size_t n = series.size();
    if (n < 2) throw TooShort("adaptive_window_size: need at least 2 points");
    std::size_t base = 0;
    if (n < 100)
        base = std::max<std::size_t>(2, n / 20);
    else if (n < 1000)
        base = std::max<std::size_t>(5, n / 40);
    else
        base = std::max<std::size_t>(25, n / 80);

    const std::vector<std::size_t> seasons = n >= 4 ? detect_seasonality(series) : std::vector<std::size_t>{};
    const double variability = stats::stddev(series.values()) / (stats::mean(series.values()) + 1e-8);
    const double cap = static_cast<double>(n / 8);

    double window = 0.0;
    if (!seasons.empty())
        window = static_cast<double>(std::min(*std::max_element(seasons.begin(), seasons.end()), base));
    else
        window = std::trunc(static_cast<double>(base) * (1.0 + variability));
    if (!std::isfinite(window)) window = cap;
    window = std::min(window, cap);
    return static_cast<std::size_t>(std::max(2.0, window));
}

} // namespace spinex
