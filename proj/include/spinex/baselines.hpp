#pragma once

// Reference forecasters used by the benchmark harness.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/stats.hpp"

namespace spinex {

enum class BaselineKind { Naive, Sma, Ses, HoltWinters, Theta, Croston, KnnLag };

inline std::string_view to_string(BaselineKind k) {
    switch (k) {
    case BaselineKind::Naive: return "naive";
    case BaselineKind::Sma: return "sma";
    case BaselineKind::Ses: return "ses";
    case BaselineKind::HoltWinters: return "holt_winters";
    case BaselineKind::Theta: return "theta";
    case BaselineKind::Croston: return "croston";
    case BaselineKind::KnnLag: return "knn_lag";
    }
    return "unknown";
}

inline BaselineKind parse_baseline_kind(std::string_view name) {
    for (BaselineKind k : {BaselineKind::Naive, BaselineKind::Sma, BaselineKind::Ses, BaselineKind::HoltWinters,
                           BaselineKind::Theta, BaselineKind::Croston, BaselineKind::KnnLag})
        if (to_string(k) == name) return k;
    throw UnknownFunction("unknown baseline: " + std::string(name));
}

namespace detail {

inline ForecastResult flat_forecast(double value, std::size_t horizon) {
    return {std::vector<double>(horizon, value), std::nullopt, std::nullopt, Provenance::Baseline};
}

inline void check_weight(double w, const char* name, bool allow_zero) {
    if (!(allow_zero ? w >= 0.0 : w > 0.0) || !(w <= 1.0))
        throw InvalidArgument(std::string("smoothing weight ") + name + " out of range");
}

inline double ses_level(std::span<const double> x, double alpha) {
    double level = x[0];
    // Skipping equal observations keeps a constant input an exact fixed point.
    for (std::size_t t = 1; t < x.size(); ++t)
        if (x[t] != level) level = alpha * x[t] + (1.0 - alpha) * level;
    return level;
}

} // namespace detail

inline ForecastResult naive_forecast(const TimeSeries& series, std::size_t horizon) {
    return detail::flat_forecast(series.back(), horizon);
}

/// Mean of the trailing n observations, repeated.
inline ForecastResult sma_forecast(const TimeSeries& series, std::size_t horizon, std::size_t n) {
    if (n == 0) throw InvalidArgument("sma_forecast: window must be at least 1");
    if (n > series.size()) throw WindowTooLarge("sma_forecast: window exceeds series length");
    return detail::flat_forecast(stats::mean(series.values().last(n)), horizon);
}

/// Simple exponential smoothing with l_1 = y_1.
inline ForecastResult ses_forecast(const TimeSeries& series, std::size_t horizon, double alpha) {
    detail::check_weight(alpha, "alpha", false);
    return detail::flat_forecast(detail::ses_level(series.values(), alpha), horizon);
}

/// Additive Holt-Winters. The first period seeds level, trend and seasonals
/// with a trend-adjusted decomposition so exact additive signals are fixed
/// points; recursions then run from t = period.
inline ForecastResult holt_winters_forecast(const TimeSeries& series, std::size_t horizon, double alpha, double beta,
                                            double gamma, std::size_t period) {
    detail::check_weight(alpha, "alpha", false);
    detail::check_weight(beta, "beta", true);
    detail::check_weight(gamma, "gamma", true);
    if (period < 2) throw InvalidArgument("holt_winters_forecast: period must be at least 2");
    const auto y = series.values();
    const std::size_t n = y.size();
    if (n < 2 * period) throw TooShort("holt_winters_forecast: need two full periods");

    const double p = static_cast<double>(period);
    const double first_mean = stats::mean(y.first(period));
    double trend = 0.0;
    for (std::size_t i = 0; i < period; ++i) trend += (y[period + i] - y[i]) / p;
    trend /= p;
    double level = first_mean + trend * (p - 1.0) / 2.0;
    std::vector<double> season(period);
    for (std::size_t i = 0; i < period; ++i)
        season[i] = y[i] - (first_mean + trend * (static_cast<double>(i) - (p - 1.0) / 2.0));

    for (std::size_t t = period; t < n; ++t) {
        const std::size_t s = t % period;
        const double prev_level = level;
        level = alpha * (y[t] - season[s]) + (1.0 - alpha) * (level + trend);
        trend = beta * (level - prev_level) + (1.0 - beta) * trend;
        season[s] = gamma * (y[t] - level) + (1.0 - gamma) * season[s];
    }

    ForecastResult out{std::vector<double>(horizon), std::nullopt, std::nullopt, Provenance::Baseline};
    for (std::size_t h = 0; h < horizon; ++h)
        out.values[h] = level + static_cast<double>(h + 1) * trend + season[(n + h) % period];
    return out;
}

/// Two-line theta: the linear trend extrapolated, averaged with the theta=2
/// line whose trend part is extrapolated and whose deviation part is
/// SES-smoothed and held flat. Equivalent to trend + SES(residual level).
inline ForecastResult theta_forecast(const TimeSeries& series, std::size_t horizon) {
    const auto y = series.values();
    const std::size_t n = y.size();
    if (n < 4) throw TooShort("theta_forecast: need at least 4 points");
    std::vector<double> t(n);
    std::iota(t.begin(), t.end(), 0.0);
    const auto fit = stats::linear_fit(t, y);

    std::vector<double> deviation(n);
    for (std::size_t i = 0; i < n; ++i) deviation[i] = 2.0 * (y[i] - (fit.intercept + fit.slope * t[i]));

    double best_alpha = 1.0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int step = 1; step <= 100; ++step) {
        const double alpha = step / 100.0;
        double level = deviation[0], sse = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double e = deviation[i] - level;
            sse += e * e;
            level += alpha * e;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best_alpha = alpha;
        }
    }
    const double level = detail::ses_level(deviation, best_alpha);

    ForecastResult out{std::vector<double>(horizon), std::nullopt, std::nullopt, Provenance::Baseline};
    for (std::size_t h = 0; h < horizon; ++h) {
        const double trend = fit.intercept + fit.slope * static_cast<double>(n + h);
        const double theta2 = trend + level;
        out.values[h] = (trend + theta2) / 2.0;
    }
    return out;
}

/// Croston's intermittent-demand method.
inline ForecastResult croston_forecast(const TimeSeries& series, std::size_t horizon, double alpha) {
    detail::check_weight(alpha, "alpha", false);
    const auto y = series.values();
    std::vector<double> sizes, intervals;
    std::size_t last = 0;
    bool seen = false;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == 0.0) continue;
        sizes.push_back(y[i]);
        intervals.push_back(seen ? static_cast<double>(i - last) : static_cast<double>(i + 1));
        last = i;
        seen = true;
    }
    if (sizes.empty()) return detail::flat_forecast(0.0, horizon);
    return detail::flat_forecast(detail::ses_level(sizes, alpha) / detail::ses_level(intervals, alpha), horizon);
}

/// k nearest lag-windows by Euclidean distance; each step averages the
/// neighbours' continuations, reading earlier forecast steps where a
/// continuation runs past the end of the data.
inline ForecastResult knn_lag_forecast(const TimeSeries& series, std::size_t horizon, std::size_t k,
                                       std::size_t lag) {
    if (k == 0 || lag == 0) throw InvalidArgument("knn_lag_forecast: k and lag must be at least 1");
    const auto y = series.values();
    const std::size_t n = y.size();
    if (n < lag + horizon + 1) throw TooShort("knn_lag_forecast: need lag + horizon + 1 points");

    const auto latest = y.last(lag);
    const std::size_t candidates = n - lag;
    std::vector<std::pair<double, std::size_t>> dist(candidates);
    for (std::size_t s = 0; s < candidates; ++s) {
        double acc = 0.0;
        for (std::size_t i = 0; i < lag; ++i) acc += (y[s + i] - latest[i]) * (y[s + i] - latest[i]);
        dist[s] = {std::sqrt(acc), s};
    }
    std::stable_sort(dist.begin(), dist.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    dist.resize(std::min(k, candidates));

    std::vector<double> extended(y.begin(), y.end());
    ForecastResult out{std::vector<double>(horizon), std::nullopt, std::nullopt, Provenance::Baseline};
    for (std::size_t h = 0; h < horizon; ++h) {
        double acc = 0.0;
        for (const auto& [d, s] : dist) acc += extended[s + lag + h];
        out.values[h] = acc / static_cast<double>(dist.size());
        extended.push_back(out.values[h]);
    }
    return out;
}

/// Kind plus the parameters it reads; unset fields take the declared defaults.
struct BaselineSpec {
    BaselineKind kind = BaselineKind::Naive;
    std::size_t window = 5;
    double alpha = 0.3;
    double beta = 0.1;
    double gamma = 0.1;
    std::size_t period = 12;
    std::size_t k = 5;
    std::size_t lag = 10;
};

using Forecaster = std::function<ForecastResult(const TimeSeries&, std::size_t)>;

inline Forecaster make_baseline(const BaselineSpec& spec) {
    switch (spec.kind) {
    case BaselineKind::Naive: return [](const TimeSeries& s, std::size_t h) { return naive_forecast(s, h); };
    case BaselineKind::Sma:
        return [n = spec.window](const TimeSeries& s, std::size_t h) { return sma_forecast(s, h, n); };
    case BaselineKind::Ses:
        return [a = spec.alpha](const TimeSeries& s, std::size_t h) { return ses_forecast(s, h, a); };
    case BaselineKind::HoltWinters:
        return [spec](const TimeSeries& s, std::size_t h) {
            return holt_winters_forecast(s, h, spec.alpha, spec.beta, spec.gamma, spec.period);
        };
    case BaselineKind::Theta: return [](const TimeSeries& s, std::size_t h) { return theta_forecast(s, h); };
    case BaselineKind::Croston:
        return [a = spec.alpha](const TimeSeries& s, std::size_t h) { return croston_forecast(s, h, a); };
    case BaselineKind::KnnLag:
        return [k = spec.k, lag = spec.lag](const TimeSeries& s, std::size_t h) {
            return knn_lag_forecast(s, h, k, lag);
        };
    }
    throw InvalidArgument("make_baseline: unknown kind");
}

} // namespace spinex
