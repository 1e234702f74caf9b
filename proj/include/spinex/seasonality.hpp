#pragma once

#include <optional>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/stats.hpp"

namespace spinex {

/// First interior peak of the mean-centred autocorrelation over lags
/// 0..max_lag (default len/2). Returns {} when the series is constant or
/// the autocorrelation has no interior peak.
inline std::vector<std::size_t> detect_seasonality(const TimeSeries& series,
                                                   std::optional<std::size_t> max_lag = std::nullopt) {
    const std::size_t n = series.size();
    if (n < 4) throw TooShort("detect_seasonality: need at least 4 points");
    const std::size_t lag = std::max<std::size_t>(2, max_lag.value_or(n / 2));
    const auto acf = stats::centred_autocovariance(series.values(), lag);
    if (!(acf[0] > 0.0)) return {};
    for (std::size_t k = 1; k + 1 < acf.size(); ++k)
        if (acf[k] > acf[k - 1] && acf[k] > acf[k + 1]) return {k};
    return {};
}

} // namespace spinex
