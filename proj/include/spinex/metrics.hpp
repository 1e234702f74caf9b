#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/engine.hpp"
#include "spinex/forecaster.hpp"
#include "spinex/stats.hpp"

namespace spinex {

struct MetricRecord {
    double mse = stats::nan;
    double mae = stats::nan;
    double rmse = stats::nan;
    double mape = stats::nan;
    double smape = stats::nan;
    double r_squared = stats::nan;
    double direction_accuracy = stats::nan;
    double theils_u = stats::nan;
    double mase = stats::nan;
    double dtw_cost = stats::nan;
    double mad = stats::nan;

    static constexpr std::array<std::string_view, 11> names{"mse",   "mae",       "rmse",
                                                            "mape",  "smape",     "r_squared",
                                                            "direction_accuracy", "theils_u", "mase",
                                                            "dtw_cost", "mad"};

    std::array<double, 11> as_array() const {
        return {mse, mae, rmse, mape, smape, r_squared, direction_accuracy, theils_u, mase, dtw_cost, mad};
    }
    static MetricRecord from_array(const std::array<double, 11>& v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]};
    }
};

/// DTW with squared point cost, square-rooted at the end. Used for scoring
/// forecasts; the similarity kernel uses the absolute-cost variant.
inline double evaluation_dtw(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw EmptyInput("evaluation_dtw: empty sequence");
    const std::size_t m = b.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = inf;
        for (std::size_t j = 1; j <= m; ++j) {
            const double d = a[i - 1] - b[j - 1];
            cur[j] = d * d + std::min({prev[j], cur[j - 1], prev[j - 1]});
        }
        std::swap(prev, cur);
    }
    return std::sqrt(prev[m]);
}

/// Full metric record; entries that are undefined for the input are NaN.
inline MetricRecord evaluate(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size()) throw LengthMismatch("evaluate: actual and predicted differ in length");
    MetricRecord r;
    const std::size_t n = actual.size();
    if (n == 0) return r;
    const double dn = static_cast<double>(n);

    double se = 0.0, ae = 0.0, ape = 0.0, sape = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = actual[i] - predicted[i];
        se += e * e;
        ae += std::abs(e);
        ape += std::abs(e / (actual[i] + 1e-8));
        sape += 2.0 * std::abs(e) / (std::abs(actual[i]) + std::abs(predicted[i]) + 1e-8);
    }
    r.mse = se / dn;
    r.mae = ae / dn;
    r.rmse = std::sqrt(r.mse);
    r.mape = ape / dn * 100.0;
    r.smape = sape / dn * 100.0;
    r.mad = r.mae;

    const double ma = stats::mean(actual);
    double tot = 0.0;
    for (double v : actual) tot += (v - ma) * (v - ma);
    if (tot > 0.0) r.r_squared = 1.0 - se / tot;

    if (n >= 2) {
        auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
        std::size_t agree = 0;
        double pc = 0.0, ac = 0.0, scale = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double da = actual[i] - actual[i - 1];
            const double dp = predicted[i] - predicted[i - 1];
            if (sign(da) == sign(dp)) ++agree;
            ac += da * da;
            pc += dp * dp;
            scale += std::abs(da);
        }
        r.direction_accuracy = static_cast<double>(agree) / static_cast<double>(n - 1) * 100.0;
        if (ac != 0.0) r.theils_u = std::sqrt(pc / ac);
        scale /= static_cast<double>(n - 1);
        if (scale > 0.0) r.mase = r.mae / scale;
    }
    r.dtw_cost = evaluation_dtw(actual, predicted);
    return r;
}

/// Per-metric mean with NaN entries excluded; NaN when none remain.
inline MetricRecord average_metrics(std::span<const MetricRecord> records) {
    std::array<double, 11> sum{}, count{};
    for (const auto& rec : records) {
        const auto v = rec.as_array();
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!std::isnan(v[i])) {
                sum[i] += v[i];
                count[i] += 1.0;
            }
    }
    std::array<double, 11> out{};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = count[i] > 0.0 ? sum[i] / count[i] : stats::nan;
    return MetricRecord::from_array(out);
}

struct SplitRecord {
    std::size_t train_end = 0;  // train covers [0, train_end)
    std::size_t test_begin = 0;
    std::size_t test_end = 0;   // exclusive
    MetricRecord metrics;
    Provenance provenance = Provenance::Fallback;
};

struct CrossValidationResult {
    MetricRecord average;
    std::vector<SplitRecord> splits;
    bool single_split = false;
};

/// Expanding-window backtest: each split trains on a prefix and scores the
/// forecast against the next `horizon` points. The engine's caches are
/// cleared per split; its performance history keeps accumulating.
inline CrossValidationResult cross_validate(EngineState& state, const TimeSeries& series, std::size_t splits = 3) {
    const std::size_t n = series.size();
    const std::size_t w = state.window_size();
    const std::size_t h = state.forecast_horizon();
    if (n < w + h) throw TooShort("cross_validate: series shorter than window plus horizon");
    const auto data = series.values();

    CrossValidationResult result;
    auto run_split = [&](std::size_t train_end, std::size_t test_end) {
        const TimeSeries train = series.prefix(train_end);
        state.clear_caches();
        ForecastResult forecast;
        try {
            forecast = predict(state, train);
        } catch (const Error&) {
            return;
        }
        if (forecast.values.empty()) return;
        const std::size_t m = std::min(forecast.values.size(), test_end - train_end);
        if (m == 0) return;
        SplitRecord rec;
        rec.train_end = train_end;
        rec.test_begin = train_end;
        rec.test_end = train_end + m;
        rec.metrics = evaluate(data.subspan(train_end, m), std::span<const double>(forecast.values).first(m));
        rec.provenance = forecast.provenance;
        result.splits.push_back(rec);
    };

    const std::size_t max_splits = (n - w) / h;
    splits = std::min(splits, max_splits);
    if (splits < 2) {
        result.single_split = true;
        run_split(static_cast<std::size_t>(0.8 * static_cast<double>(n)), n);
    } else {
        for (std::size_t i = 0; i < splits; ++i) {
            const std::size_t test_begin = n - (splits - i) * h;
            if (test_begin < w) continue;
            run_split(test_begin, test_begin + h);
        }
    }
    if (result.splits.empty()) throw EmptyResult("cross_validate: no split produced a forecast");
    std::vector<MetricRecord> records;
    for (const auto& s : result.splits) records.push_back(s.metrics);
    result.average = average_metrics(records);
    return result;
}

} // namespace spinex
