#pragma once

#include <algorithm>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/engine.hpp"
#include "spinex/stats.hpp"

namespace spinex {

/// Re-derives the window from trailing volatility and the similarity threshold
/// from the performance history. The window is only touched when the engine
/// runs with dynamic windows.
inline void adjust_dynamic_parameters(EngineState& state, const TimeSeries& series) {
    const std::size_t n = series.size();
    if (n < 2) throw TooShort("adjust_dynamic_parameters: need at least 2 points");
    constexpr std::size_t min_window = 10;
    const std::size_t max_window = n / 2;
    const std::size_t baseline = std::max(min_window, n / 10);

    if (state.dynamic_window()) {
        const auto values = series.values();
        const double volatility = n > baseline ? stats::stddev(values.subspan(n - baseline)) : stats::stddev(values);
        const double scale = std::clamp(volatility, 0.1, 1.0);
        std::size_t window = static_cast<std::size_t>(static_cast<double>(max_window) / scale);
        window = std::max(min_window, std::min(window, max_window));
        // Series shorter than 20 points cannot host the 10-point floor.
        state.set_window_size(std::min(window, std::max<std::size_t>(1, max_window)));
    }

    const auto errors = stats::drop_nan(std::vector<double>(state.recent_errors().begin(), state.recent_errors().end()));
    const double adjustment = errors.empty() ? 0.0 : stats::mean(errors) + stats::stddev(errors);
    const auto sims = stats::drop_nan(
        std::vector<double>(state.recent_similarity_scores().begin(), state.recent_similarity_scores().end()));
    if (sims.empty())
        state.set_threshold(0.5);
    else
        state.set_threshold(stats::mean(sims) + stats::stddev(sims) + adjustment);
}

} // namespace spinex
