#pragma once

// The similarity-search forecasting pipeline and its decomposition fallback.

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/dynamic_parameters.hpp"
#include "spinex/engine.hpp"
#include "spinex/segmentation.hpp"
#include "spinex/similarity.hpp"
#include "spinex/stats.hpp"

namespace spinex {

/// Similarity of each historical segment to the most recent one.
struct SimilarityProfile {
    std::vector<double> scores;
    // Segment start index of scores[0]; profiles are aligned on their lag
    // from the latest segment, so the primary window may lose leading rows.
    std::size_t first_start = 0;
    // Set when no window size produced usable segments and the profile holds
    // normalised autocorrelations instead.
    bool autocorrelation_fallback = false;
};

struct FallbackComponents {
    std::size_t trend_window = 0;
    std::vector<double> trend;
    std::vector<std::size_t> seasonal_periods;
    std::vector<std::vector<double>> seasonal_components;
    std::vector<double> residuals;
    std::vector<bool> anomaly_mask;
    std::vector<double> trend_polynomial;
};

inline constexpr std::size_t dtw_segment_limit = 500;
inline constexpr std::size_t monte_carlo_paths = 1000;
inline constexpr double fallback_confidence = 0.95;

/// acf(k) / acf(0) of the raw (un-centred) series for k = 0..len-1.
inline SimilarityProfile fallback_similarity(const TimeSeries& series) {
    if (series.size() < 2) throw TooShort("fallback_similarity: need at least 2 points");
    auto acf = stats::raw_autocorrelation(series.values());
    const double lag0 = acf[0];
    if (lag0 == 0.0) {
        std::fill(acf.begin(), acf.end(), 0.0);
        acf[0] = 1.0;
    } else {
        for (double& v : acf) v /= lag0;
        acf[0] = 1.0;
    }
    return {std::move(acf), 0, true};
}

namespace detail {

inline std::vector<double> nanmean_rows(const std::vector<std::vector<double>>& rows) {
    std::size_t len = rows.front().size();
    for (const auto& r : rows) len = std::min(len, r.size());
    std::vector<double> out(len, stats::nan);
    for (std::size_t k = 0; k < len; ++k) {
        double acc = 0.0;
        std::size_t count = 0;
        for (const auto& r : rows) {
            // Rows are aligned on their tails when lengths differ.
            const double v = r[r.size() - len + k];
            if (!std::isnan(v)) {
                acc += v;
                ++count;
            }
        }
        if (count > 0) out[k] = acc / static_cast<double>(count);
    }
    return out;
}

} // namespace detail

/// Averages per-method similarities to the latest segment, then averages
/// across window sizes (half, primary, double) when multi-level is on.
inline SimilarityProfile find_similar_segments(EngineState& state, const TimeSeries& series) {
    const std::size_t n = series.size();
    const std::size_t w = state.window_size();
    std::vector<std::size_t> windows{w};
    if (state.multi_level()) windows = {std::max<std::size_t>(2, w / 2), w, std::min(n / 4, 2 * w)};

    std::vector<std::vector<double>> per_window;
    for (std::size_t ws : windows) {
        if (ws < 2 || n < 2) continue;
        auto segments = extract_segments(series, ws);
        if (segments.size() < 2 || segments.window_size < 2) continue;
        const std::size_t count = segments.size();
        const Digest key = state.cache_segments(std::move(segments.rows));

        std::vector<std::vector<double>> per_method;
        for (SimilarityMethod method : state.similarity_methods()) {
            if (method == SimilarityMethod::Dtw && count > dtw_segment_limit) continue;
            try {
                const auto& sim = state.similarity_matrix(key, method);
                const auto last = sim.entries.row(count - 1);
                per_method.emplace_back(last.begin(), last.end() - 1);
            } catch (const Error&) {
                // A failing method is dropped; the others still vote.
            }
        }
        if (per_method.empty()) continue;
        per_window.push_back(detail::nanmean_rows(per_method));
    }
    if (per_window.empty()) return fallback_similarity(series);
    SimilarityProfile profile{detail::nanmean_rows(per_window), 0, false};
    if (n > w && n - w > profile.scores.size()) profile.first_start = n - w - profile.scores.size();
    return profile;
}

/// mean + std of the scores, relaxed to their 90th percentile when fewer than
/// five scores exceed it; the 95th percentile when dynamic thresholds are off.
inline double dynamic_threshold(const EngineState& state, std::span<const double> scores) {
    if (scores.empty()) throw EmptyInput("dynamic_threshold: no scores");
    if (!state.dynamic_threshold()) return stats::percentile(scores, 95.0);
    const double base = stats::mean(scores) + stats::stddev(scores);
    const auto above = std::count_if(scores.begin(), scores.end(), [&](double s) { return s > base; });
    return above < 5 ? stats::percentile(scores, 90.0) : base;
}

namespace detail {

// Trailing moving average over `window` points: out[k] = mean(x[k .. k+window-1]).
inline std::vector<double> moving_average(std::span<const double> x, std::size_t window) {
    std::vector<double> out;
    if (window == 0 || window > x.size()) return out;
    out.reserve(x.size() - window + 1);
    double acc = std::accumulate(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(window), 0.0);
    out.push_back(acc / static_cast<double>(window));
    for (std::size_t k = window; k < x.size(); ++k) {
        acc += x[k] - x[k - window];
        out.push_back(acc / static_cast<double>(window));
    }
    return out;
}

inline double trend_mse(std::span<const double> x, std::size_t window) {
    const auto trend = moving_average(x, window);
    double acc = 0.0;
    for (std::size_t k = 0; k < trend.size(); ++k) {
        const double d = x[k + window - 1] - trend[k];
        acc += d * d;
    }
    return acc / static_cast<double>(trend.size());
}

// Golden-section search over integer windows in [lo, hi] on the rounded objective.
inline std::size_t best_trend_window(std::span<const double> x, std::size_t lo, std::size_t hi) {
    if (hi <= lo) return lo;
    auto f = [&](double v) { return trend_mse(x, static_cast<std::size_t>(std::lround(v))); };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = static_cast<double>(lo), b = static_cast<double>(hi);
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1.0) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const auto first = static_cast<std::size_t>(std::floor(a));
    const auto last = std::min(hi, static_cast<std::size_t>(std::ceil(b)));
    std::size_t best = first;
    double best_mse = trend_mse(x, first);
    for (std::size_t v = first + 1; v <= last; ++v) {
        const double m = trend_mse(x, v);
        if (m < best_mse) {
            best_mse = m;
            best = v;
        }
    }
    return best;
}

// Lagged-correlation argmax, repeated with each found lag suppressed.
inline std::vector<std::size_t> lagged_seasonalities(std::span<const double> detrended, std::size_t num_points,
                                                     std::size_t num_seasons) {
    const std::size_t max_period = std::max<std::size_t>(4, std::min(num_points, detrended.size() / 2));
    std::vector<double> corr;
    for (std::size_t lag = 1; lag < max_period; ++lag) {
        double c = stats::nan;
        if (lag + 2 <= detrended.size())
            c = stats::pearson(detrended.first(detrended.size() - lag), detrended.subspan(lag));
        corr.push_back(std::isnan(c) ? -std::numeric_limits<double>::infinity() : c);
    }
    std::vector<std::size_t> seasons;
    for (std::size_t s = 0; s < num_seasons; ++s) {
        const auto it = std::max_element(corr.begin(), corr.end());
        if (it == corr.end() || *it == -std::numeric_limits<double>::infinity()) break;
        seasons.push_back(static_cast<std::size_t>(it - corr.begin()) + 1);
        *it = -std::numeric_limits<double>::infinity();
    }
    return seasons;
}

} // namespace detail

/// Moving-average trend, lagged-correlation seasonalities with phase means,
/// anomaly-cleaned residuals and a cubic trend polynomial.
inline FallbackComponents fallback_decompose(const TimeSeries& series, std::size_t num_points, std::size_t num_seasons) {
    const auto data = series.values();
    const std::size_t n = data.size();
    if (num_points == 0) throw InvalidArgument("fallback_predict: num_points must be positive");
    if (n < 2 * num_points || n < 2) throw InsufficientData("Insufficient data for prediction");
    if (num_seasons < 1 || num_seasons > 4) throw InvalidArgument("fallback_predict: num_seasons must be in [1, 4]");

    FallbackComponents c;
    const std::size_t hi = std::max<std::size_t>(1, n / 2);
    c.trend_window = detail::best_trend_window(data, std::min<std::size_t>(10, hi), hi);
    c.trend = detail::moving_average(data, c.trend_window);

    const std::size_t offset = c.trend_window - 1;
    std::vector<double> detrended(c.trend.size());
    for (std::size_t k = 0; k < detrended.size(); ++k) detrended[k] = data[k + offset] - c.trend[k];

    c.seasonal_periods = detail::lagged_seasonalities(detrended, num_points, num_seasons);
    std::vector<double> combined(detrended.size(), 0.0);
    for (std::size_t period : c.seasonal_periods) {
        std::vector<double> phase(period, 0.0);
        for (std::size_t i = 0; i < period; ++i) {
            double acc = 0.0;
            std::size_t count = 0;
            for (std::size_t k = i; k < detrended.size(); k += period) {
                acc += detrended[k];
                ++count;
            }
            phase[i] = count ? acc / static_cast<double>(count) : 0.0;
        }
        for (std::size_t k = 0; k < combined.size(); ++k) combined[k] += phase[k % period];
        c.seasonal_components.push_back(std::move(phase));
    }

    c.residuals.resize(detrended.size());
    for (std::size_t k = 0; k < detrended.size(); ++k) c.residuals[k] = detrended[k] - combined[k];
    const double rm = stats::mean(c.residuals);
    const double rs = stats::stddev(c.residuals);
    const double med = stats::median(c.residuals);
    c.anomaly_mask.resize(c.residuals.size());
    for (std::size_t k = 0; k < c.residuals.size(); ++k) {
        c.anomaly_mask[k] = std::abs(c.residuals[k] - rm) > 3.0 * rs;
        if (c.anomaly_mask[k]) c.residuals[k] = med;
    }

    std::vector<double> x(n);
    std::iota(x.begin(), x.end(), 0.0);
    c.trend_polynomial = stats::Polynomial::fit(x, data, 3).coefficients();
    return c;
}

/// Decomposition forecast with Monte-Carlo residual bands (95%).
inline ForecastResult fallback_predict(const EngineState& state, const TimeSeries& series, std::size_t num_points,
                                       std::size_t num_seasons, FallbackComponents* components = nullptr) {
    FallbackComponents c = fallback_decompose(series, num_points, num_seasons);
    const std::size_t n = series.size();
    const std::size_t h = state.forecast_horizon();

    std::vector<double> x(n);
    std::iota(x.begin(), x.end(), 0.0);
    const auto poly = stats::Polynomial::fit(x, series.values(), 3);

    // Future phases continue from the end of the detrended series.
    const std::size_t detrended_len = c.residuals.size();
    std::vector<double> deterministic(h, 0.0);
    for (std::size_t j = 0; j < h; ++j) {
        deterministic[j] = poly(static_cast<double>(n + j));
        for (std::size_t s = 0; s < c.seasonal_periods.size(); ++s)
            deterministic[j] += c.seasonal_components[s][(detrended_len + j) % c.seasonal_periods[s]];
    }

    // Exponentially decaying weights from exp(-1) (oldest) to 1 (newest).
    const std::size_t len = c.residuals.size();
    std::vector<double> weights(len);
    for (std::size_t k = 0; k < len; ++k)
        weights[k] = std::exp(len == 1 ? -1.0 : -1.0 + static_cast<double>(k) / static_cast<double>(len - 1));
    const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
    double wmean = 0.0;
    for (std::size_t k = 0; k < len; ++k) wmean += c.residuals[k] * weights[k];
    wmean /= wsum;
    double wvar = 0.0;
    for (std::size_t k = 0; k < len; ++k) wvar += weights[k] * (c.residuals[k] - wmean) * (c.residuals[k] - wmean);
    const double wstd = std::sqrt(wvar / wsum);

    Rng rng(state.seed());
    std::vector<std::vector<double>> by_step(h, std::vector<double>(monte_carlo_paths));
    for (std::size_t path = 0; path < monte_carlo_paths; ++path)
        for (std::size_t j = 0; j < h; ++j) by_step[j][path] = rng.normal(wmean, wstd);

    ForecastResult out;
    out.provenance = Provenance::Fallback;
    out.values.resize(h);
    out.ci_lower.emplace(h);
    out.ci_upper.emplace(h);
    for (std::size_t j = 0; j < h; ++j) {
        out.values[j] = deterministic[j] + stats::mean(by_step[j]);
        (*out.ci_lower)[j] = deterministic[j] + stats::percentile(by_step[j], (1.0 - fallback_confidence) / 2.0 * 100.0);
        (*out.ci_upper)[j] = deterministic[j] + stats::percentile(by_step[j], (1.0 + fallback_confidence) / 2.0 * 100.0);
    }
    if (components) *components = std::move(c);
    return out;
}

/// Picks the number of fallback seasonalities (1..4) whose forecast best
/// matches the trailing observations; ties go to the smaller count.
inline std::size_t tune_hyperparameters(const EngineState& state, const TimeSeries& series) {
    std::size_t best = 1;
    double best_mse = std::numeric_limits<double>::infinity();
    const auto data = series.values();
    for (std::size_t seasons = 1; seasons <= 4; ++seasons) {
        const auto pred = fallback_predict(state, series, 20, seasons).values;
        const auto tail = data.subspan(data.size() - std::min(pred.size(), data.size()));
        double acc = 0.0;
        for (std::size_t j = 0; j < tail.size(); ++j) acc += (tail[j] - pred[j]) * (tail[j] - pred[j]);
        const double mse = acc / static_cast<double>(tail.size());
        if (mse < best_mse) {
            best_mse = mse;
            best = seasons;
        }
    }
    return best;
}

inline constexpr std::size_t default_fallback_seasons = 2;

/// Similarity-weighted forecast from the futures of the best-matching
/// historical segments, each shifted to start at the last observation.
/// Anything that prevents that path routes to fallback_predict.
inline ForecastResult predict(EngineState& state, const TimeSeries& series) {
    const std::size_t n = series.size();
    if (n < 4) throw TooShort("predict: need at least 4 points");
    adjust_dynamic_parameters(state, series);
    const std::size_t w = state.window_size();
    const std::size_t h = state.forecast_horizon();
    const auto data = series.values();

    std::optional<ForecastResult> result;
    try {
        const SimilarityProfile profile = find_similar_segments(state, series);
        const auto& sims = profile.scores;
        if (!sims.empty()) {
            (void)dynamic_threshold(state, sims);
            std::vector<std::size_t> valid;
            for (int pct = 95; pct > 70; pct -= 5) {
                const double cut = stats::percentile(sims, pct);
                valid.clear();
                for (std::size_t k = 0; k < sims.size(); ++k)
                    if (sims[k] > cut && profile.first_start + k + w + h <= n) valid.push_back(k);
                if (valid.size() >= 3) break;
            }
            double total = 0.0;
            bool convex = !valid.empty();
            for (std::size_t i : valid) {
                convex = convex && std::isfinite(sims[i]) && sims[i] >= 0.0;
                total += sims[i];
            }
            if (convex && total > 0.0) {
                // Anchored at the last observation: each candidate contributes
                // its increments relative to its own first future value.
                const double last = data[n - 1];
                ForecastResult r;
                r.provenance = Provenance::SimilarityPath;
                r.values.assign(h, 0.0);
                for (std::size_t j = 0; j < h; ++j) {
                    double acc = 0.0;
                    for (std::size_t k : valid) {
                        const std::size_t start = profile.first_start + k + w;
                        acc += sims[k] * (data[start + j] - data[start]);
                    }
                    r.values[j] = last + acc / total;
                }
                result = std::move(r);
            }
        }
    } catch (const std::exception&) {
        result.reset();
    }
    if (!result) result = fallback_predict(state, series, h, default_fallback_seasons);

    const auto& values = result->values;
    const std::size_t m = std::min(values.size(), n);
    const auto actual = data.subspan(n - m);
    double sq = 0.0;
    for (std::size_t j = 0; j < m; ++j) sq += (actual[j] - values[j]) * (actual[j] - values[j]);
    const double mse = m ? sq / static_cast<double>(m) : stats::nan;
    state.record_performance(mse, stats::pearson(actual, std::span<const double>(values).first(m)));
    return *result;
}

} // namespace spinex
