#pragma once

// Synthetic data, benchmark runs, rankings, Pareto fronts and empirical
// complexity fits.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "spinex/baselines.hpp"
#include "spinex/core.hpp"
#include "spinex/engine.hpp"
#include "spinex/forecaster.hpp"
#include "spinex/metrics.hpp"
#include "spinex/stats.hpp"

namespace spinex {

enum class SyntheticFunction {
    Linear,
    Quadratic,
    ExponentialGrowth,
    Sine,
    CosineLinear,
    CompositeSines,
    Logistic,
    DampedOscillation,
    Step,
    Sawtooth,
    Square,
    ExponentialDecay,
    Logarithmic,
    CompositeTrendSeasonal,
    Ar1,
    Cubic,
    Sigmoid,
    ImpulseResponse,
    CyclicalTrend,
    ExpGrowthSeasonal,
    Piecewise,
    Brownian,
    MultiTrend,
    ChaoticMap,
    Garch,
};

struct SyntheticInfo {
    SyntheticFunction id;
    std::string_view name;
    double default_sigma;
    bool recursive;
};

inline constexpr std::array<SyntheticInfo, 25> synthetic_catalogue{{
    {SyntheticFunction::Linear, "linear", 0.1, false},
    {SyntheticFunction::Quadratic, "quadratic", 0.1, false},
    {SyntheticFunction::ExponentialGrowth, "exponential_growth", 0.1, false},
    {SyntheticFunction::Sine, "sine", 0.1, false},
    {SyntheticFunction::CosineLinear, "cosine_linear", 0.1, false},
    {SyntheticFunction::CompositeSines, "composite_sines", 0.1, false},
    {SyntheticFunction::Logistic, "logistic", 0.05, false},
    {SyntheticFunction::DampedOscillation, "damped_oscillation", 0.05, false},
    {SyntheticFunction::Step, "step", 0.1, false},
    {SyntheticFunction::Sawtooth, "sawtooth", 0.05, false},
    {SyntheticFunction::Square, "square", 0.1, false},
    {SyntheticFunction::ExponentialDecay, "exponential_decay", 0.05, false},
    {SyntheticFunction::Logarithmic, "logarithmic", 0.1, false},
    {SyntheticFunction::CompositeTrendSeasonal, "composite_trend_seasonal", 1.0, false},
    {SyntheticFunction::Ar1, "ar1", 0.5, true},
    {SyntheticFunction::Cubic, "cubic", 0.1, false},
    {SyntheticFunction::Sigmoid, "sigmoid", 0.05, false},
    {SyntheticFunction::ImpulseResponse, "impulse_response", 0.05, false},
    {SyntheticFunction::CyclicalTrend, "cyclical_trend", 0.1, false},
    {SyntheticFunction::ExpGrowthSeasonal, "exp_growth_seasonal", 0.1, false},
    {SyntheticFunction::Piecewise, "piecewise", 0.1, false},
    {SyntheticFunction::Brownian, "brownian", 0.1, true},
    {SyntheticFunction::MultiTrend, "multi_trend", 0.1, false},
    {SyntheticFunction::ChaoticMap, "chaotic_map", 0.1, true},
    {SyntheticFunction::Garch, "garch", 0.0, true},
}};

inline const SyntheticInfo& synthetic_info(SyntheticFunction f) {
    for (const auto& info : synthetic_catalogue)
        if (info.id == f) return info;
    throw UnknownFunction("unknown synthetic function");
}

inline SyntheticFunction parse_synthetic_function(std::string_view name) {
    for (const auto& info : synthetic_catalogue)
        if (info.name == name) return info.id;
    throw UnknownFunction("unknown synthetic function: " + std::string(name));
}

inline std::string_view to_string(SyntheticFunction f) { return synthetic_info(f).name; }

struct SyntheticSpec {
    SyntheticFunction function = SyntheticFunction::Linear;
    std::size_t n_points = 100;
    double t_max = 10.0;
    double noise_sigma = 0.1;
    std::uint64_t seed = 0;
};

/// Spec with the catalogue's noise level for `f`.
inline SyntheticSpec default_synthetic_spec(SyntheticFunction f, std::size_t n_points = 100, double t_max = 10.0,
                                            std::uint64_t seed = 0) {
    return {f, n_points, t_max, synthetic_info(f).default_sigma, seed};
}

/// Equally spaced grid on [0, t_max]; the last point is exactly t_max.
inline std::vector<double> time_grid(std::size_t n, double t_max) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = i + 1 == n ? t_max : static_cast<double>(i) * t_max / static_cast<double>(n - 1);
    return t;
}

/// Noise-free value of a non-recursive generator.
inline double synthetic_closed_form(SyntheticFunction f, double t, double t_max) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (f) {
    case SyntheticFunction::Linear: return 0.5 * t;
    case SyntheticFunction::Quadratic: return 0.05 * t * t;
    case SyntheticFunction::ExponentialGrowth: return std::exp(0.1 * t);
    case SyntheticFunction::Sine: return std::sin(two_pi * t);
    case SyntheticFunction::CosineLinear: return std::cos(two_pi * t) + 0.1 * t;
    case SyntheticFunction::CompositeSines: return std::sin(two_pi * t) + 0.5 * std::sin(2.0 * two_pi * t);
    case SyntheticFunction::Logistic:
    case SyntheticFunction::Sigmoid: return 1.0 / (1.0 + std::exp(-t + 5.0));
    case SyntheticFunction::DampedOscillation: return std::exp(-0.1 * t) * std::sin(two_pi * t);
    case SyntheticFunction::Step: return std::fmod(std::floor(t), 2.0);
    case SyntheticFunction::Sawtooth: return std::fmod(t, 1.0);
    case SyntheticFunction::Square: {
        const double s = std::sin(two_pi * t);
        return (s > 0.0) - (s < 0.0);
    }
    case SyntheticFunction::ExponentialDecay: return std::exp(-0.2 * t);
    case SyntheticFunction::Logarithmic: return std::log(t + 1.0);
    case SyntheticFunction::CompositeTrendSeasonal: return 0.01 * t * t + std::sin(two_pi * t);
    case SyntheticFunction::Cubic: return 0.01 * t * t * t - 0.1 * t * t + 0.5 * t;
    case SyntheticFunction::ImpulseResponse: return std::exp(-t) * std::sin(two_pi * t);
    case SyntheticFunction::CyclicalTrend: return std::sin(two_pi * t / 5.0) + 0.05 * t;
    case SyntheticFunction::ExpGrowthSeasonal: return std::exp(0.05 * t) + 0.5 * std::sin(two_pi * t);
    case SyntheticFunction::Piecewise: {
        const double a = t_max / 3.0, b = 2.0 * t_max / 3.0;
        if (t < a) return t;
        if (t < b) return a;
        return a - (t - b);
    }
    case SyntheticFunction::MultiTrend:
        return 0.01 * t * t + 0.1 * std::sin(two_pi * t) + 0.05 * std::exp(0.1 * t);
    default: break;
    }
    throw InvalidArgument("synthetic_closed_form: generator is recursive");
}

/// values[i] = f(t_i) + noise_i, noise drawn in index order from Rng(seed).
/// Recursive generators iterate from a zero initial state (the chaotic map
/// starts at 0.1 because 0 is a fixed point).
inline TimeSeries generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_points < 2) throw InvalidArgument("generate_synthetic: need at least 2 points");
    if (!(spec.t_max > 0.0)) throw InvalidArgument("generate_synthetic: t_max must be positive");
    if (!(spec.noise_sigma >= 0.0)) throw InvalidArgument("generate_synthetic: noise_sigma must be non-negative");
    const auto t = time_grid(spec.n_points, spec.t_max);
    Rng rng(spec.seed);
    const double sigma = spec.noise_sigma;
    std::vector<double> y(spec.n_points);
    switch (spec.function) {
    case SyntheticFunction::Ar1: {
        double prev = 0.0;
        for (double& v : y) prev = v = 0.8 * prev + rng.normal(0.0, sigma);
        break;
    }
    case SyntheticFunction::Brownian: {
        double acc = 0.0;
        for (double& v : y) v = acc += rng.normal(0.0, sigma);
        break;
    }
    case SyntheticFunction::ChaoticMap: {
        double x = 0.1;
        for (double& v : y) {
            v = x + rng.normal(0.0, sigma);
            x = 3.9 * x * (1.0 - x);
        }
        break;
    }
    case SyntheticFunction::Garch: {
        double prev = 0.0;
        for (double& v : y) prev = v = rng.normal(0.0, 0.1 + 0.9 * std::abs(prev));
        break;
    }
    case SyntheticFunction::CompositeTrendSeasonal:
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = synthetic_closed_form(spec.function, t[i], spec.t_max) + 0.5 * rng.normal(0.0, sigma);
        break;
    default:
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = synthetic_closed_form(spec.function, t[i], spec.t_max) + rng.normal(0.0, sigma);
    }
    return TimeSeries(std::move(y));
}

// ---------------------------------------------------------------------------
// Benchmark runs

inline constexpr std::array<std::string_view, 4> benchmark_metrics{"direction_accuracy", "dtw_cost", "mase", "mad"};

struct BenchmarkRecord {
    std::string algorithm;
    std::string dataset;
    double direction_accuracy = stats::nan;  // fraction in [0, 1]
    double dtw_cost = stats::nan;
    double mase = stats::nan;
    double mad = stats::nan;
    std::string error;  // empty unless the forecast failed

    std::array<double, 4> metrics() const { return {direction_accuracy, dtw_cost, mase, mad}; }
};

using SeededForecaster = std::function<ForecastResult(const TimeSeries&, std::size_t horizon, std::uint64_t seed)>;

struct Algorithm {
    std::string name;
    SeededForecaster forecast;
};

struct NamedSeries {
    std::string name;
    TimeSeries series;
};

inline Algorithm baseline_algorithm(std::string name, const BaselineSpec& spec) {
    auto f = make_baseline(spec);
    return {std::move(name), [f](const TimeSeries& s, std::size_t h, std::uint64_t) { return f(s, h); }};
}

/// SPINEX with a fresh engine per call.
inline Algorithm spinex_algorithm(EngineConfig config = {}, std::string name = "SPINEX") {
    return {std::move(name), [config](const TimeSeries& s, std::size_t h, std::uint64_t seed) {
                EngineConfig c = config;
                c.forecast_horizon = h;
                c.seed = seed;
                EngineState state(s, c);
                return predict(state, s);
            }};
}

/// Per-dataset seed; independent of the algorithm so identical algorithms
/// registered under different names produce identical rows.
inline std::uint64_t task_seed(std::uint64_t seed, std::string_view dataset) {
    std::uint64_t h = 1469598103934665603ULL ^ seed;
    for (unsigned char c : dataset) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Holds out the final `horizon` points of each dataset, forecasts them from
/// the prefix and scores the holdout. Failures become NaN rows with a reason.
inline std::vector<BenchmarkRecord> run_benchmark(const std::vector<NamedSeries>& datasets,
                                                  const std::vector<Algorithm>& algorithms, std::size_t horizon,
                                                  std::uint64_t seed) {
    if (horizon == 0) throw InvalidArgument("run_benchmark: horizon must be at least 1");
    std::vector<BenchmarkRecord> records;
    for (const auto& algo : algorithms) {
        for (const auto& ds : datasets) {
            BenchmarkRecord rec;
            rec.algorithm = algo.name;
            rec.dataset = ds.name;
            try {
                const std::size_t n = ds.series.size();
                if (n <= horizon) throw TooShort("dataset shorter than holdout");
                const TimeSeries train = ds.series.prefix(n - horizon);
                const auto holdout = ds.series.values().last(horizon);
                const ForecastResult f = algo.forecast(train, horizon, task_seed(seed, ds.name));
                if (f.values.size() != horizon)
                    throw LengthMismatch("forecast has " + std::to_string(f.values.size()) + " values, expected " +
                                         std::to_string(horizon));
                const MetricRecord m = evaluate(holdout, f.values);
                rec.direction_accuracy = m.direction_accuracy / 100.0;
                rec.dtw_cost = m.dtw_cost;
                rec.mase = m.mase;
                rec.mad = m.mad;
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
            records.push_back(std::move(rec));
        }
    }
    return records;
}

// ---------------------------------------------------------------------------
// Rankings

enum class RankingScheme { Average, Normalized, Wins };

inline std::string_view to_string(RankingScheme s) {
    switch (s) {
    case RankingScheme::Average: return "average";
    case RankingScheme::Normalized: return "normalized";
    case RankingScheme::Wins: return "wins";
    }
    return "unknown";
}

struct RankingRow {
    std::string algorithm;
    std::array<double, 4> values{};   // cross-dataset means
    std::array<double, 4> columns{};  // ranks, or normalised scores
    double average = stats::nan;
    std::size_t final_rank = 0;
};

struct RankingTable {
    RankingScheme scheme = RankingScheme::Average;
    std::vector<RankingRow> rows;  // sorted by algorithm name
};

namespace detail {

// Sign that makes smaller better: DA is maximised.
inline double orient(std::size_t metric, double v) { return metric == 0 ? -v : v; }

inline double nan_last(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

// 1 + number of strictly smaller keys (ties share the minimum rank).
inline std::vector<std::size_t> competition_ranks(std::span<const double> keys) {
    std::vector<std::size_t> out(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        std::size_t smaller = 0;
        for (double k : keys)
            if (k < keys[i]) ++smaller;
        out[i] = smaller + 1;
    }
    return out;
}

struct Grouped {
    std::vector<std::string> algorithms;
    std::vector<std::string> datasets;
    // [algorithm][dataset] -> metrics; missing pairs are NaN.
    std::vector<std::vector<std::array<double, 4>>> cells;
};

inline Grouped group_records(std::span<const BenchmarkRecord> records) {
    Grouped g;
    std::map<std::string, std::size_t> ai, di;
    for (const auto& r : records) {
        ai.emplace(r.algorithm, 0);
        di.emplace(r.dataset, 0);
    }
    for (auto& [name, idx] : ai) {
        idx = g.algorithms.size();
        g.algorithms.push_back(name);
    }
    for (auto& [name, idx] : di) {
        idx = g.datasets.size();
        g.datasets.push_back(name);
    }
    std::array<double, 4> missing;
    missing.fill(stats::nan);
    g.cells.assign(g.algorithms.size(), std::vector<std::array<double, 4>>(g.datasets.size(), missing));
    for (const auto& r : records) g.cells[ai.at(r.algorithm)][di.at(r.dataset)] = r.metrics();
    return g;
}

inline std::vector<std::array<double, 4>> cross_dataset_means(const Grouped& g) {
    std::vector<std::array<double, 4>> out(g.algorithms.size());
    for (std::size_t a = 0; a < g.algorithms.size(); ++a)
        for (std::size_t m = 0; m < 4; ++m) {
            std::vector<double> col;
            for (const auto& cell : g.cells[a]) col.push_back(cell[m]);
            const auto kept = stats::drop_nan(col);
            out[a][m] = kept.empty() ? stats::nan : stats::mean(kept);
        }
    return out;
}

inline void check_algorithms(const Grouped& g) {
    if (g.algorithms.size() < 2) throw InsufficientData("ranking needs at least 2 algorithms");
}

inline void assign_final(RankingTable& table) {
    std::vector<double> keys;
    for (const auto& row : table.rows) keys.push_back(nan_last(row.average));
    const auto ranks = competition_ranks(keys);
    for (std::size_t i = 0; i < ranks.size(); ++i) table.rows[i].final_rank = ranks[i];
}

} // namespace detail

/// Per-dataset fractional ranks per metric, averaged over datasets, then
/// averaged over the four metrics.
inline RankingTable rank_average(std::span<const BenchmarkRecord> records) {
    const auto g = detail::group_records(records);
    detail::check_algorithms(g);
    const auto means = detail::cross_dataset_means(g);
    RankingTable table{RankingScheme::Average, {}};
    const std::size_t na = g.algorithms.size();
    std::vector<std::array<double, 4>> rank_sum(na, std::array<double, 4>{});
    for (std::size_t d = 0; d < g.datasets.size(); ++d)
        for (std::size_t m = 0; m < 4; ++m) {
            std::vector<double> keys(na);
            for (std::size_t a = 0; a < na; ++a) keys[a] = detail::nan_last(detail::orient(m, g.cells[a][d][m]));
            const auto ranks = stats::average_ranks(keys);
            for (std::size_t a = 0; a < na; ++a) rank_sum[a][m] += ranks[a];
        }
    for (std::size_t a = 0; a < na; ++a) {
        RankingRow row{g.algorithms[a], means[a]};
        for (std::size_t m = 0; m < 4; ++m) row.columns[m] = rank_sum[a][m] / static_cast<double>(g.datasets.size());
        row.average = stats::mean(row.columns);
        table.rows.push_back(std::move(row));
    }
    detail::assign_final(table);
    return table;
}

/// Min-max normalised cross-dataset means, oriented so 0 is best; a constant
/// column is 0 everywhere and a NaN mean scores 1.
inline RankingTable rank_normalized(std::span<const BenchmarkRecord> records) {
    const auto g = detail::group_records(records);
    detail::check_algorithms(g);
    const auto means = detail::cross_dataset_means(g);
    RankingTable table{RankingScheme::Normalized, {}};
    for (std::size_t a = 0; a < g.algorithms.size(); ++a) table.rows.push_back({g.algorithms[a], means[a]});
    for (std::size_t m = 0; m < 4; ++m) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& mean : means)
            if (!std::isnan(mean[m])) {
                lo = std::min(lo, mean[m]);
                hi = std::max(hi, mean[m]);
            }
        for (std::size_t a = 0; a < means.size(); ++a) {
            const double v = means[a][m];
            double score = 1.0;
            if (!std::isnan(v)) score = hi > lo ? (m == 0 ? (hi - v) / (hi - lo) : (v - lo) / (hi - lo)) : 0.0;
            table.rows[a].columns[m] = score;
        }
    }
    for (auto& row : table.rows) row.average = stats::mean(row.columns);
    detail::assign_final(table);
    return table;
}

/// Competition ranks of the cross-dataset means per metric, averaged.
inline RankingTable rank_wins(std::span<const BenchmarkRecord> records) {
    const auto g = detail::group_records(records);
    detail::check_algorithms(g);
    const auto means = detail::cross_dataset_means(g);
    RankingTable table{RankingScheme::Wins, {}};
    for (std::size_t a = 0; a < g.algorithms.size(); ++a) table.rows.push_back({g.algorithms[a], means[a]});
    for (std::size_t m = 0; m < 4; ++m) {
        std::vector<double> keys;
        for (const auto& mean : means) keys.push_back(detail::nan_last(detail::orient(m, mean[m])));
        const auto ranks = detail::competition_ranks(keys);
        for (std::size_t a = 0; a < ranks.size(); ++a) table.rows[a].columns[m] = static_cast<double>(ranks[a]);
    }
    for (auto& row : table.rows) row.average = stats::mean(row.columns);
    detail::assign_final(table);
    return table;
}

// ---------------------------------------------------------------------------
// Pareto frontier

struct ParetoEntry {
    std::string algorithm;
    std::array<double, 4> normalized{};  // oriented so smaller is better
    bool efficient = true;
};

/// Non-dominated algorithms over min-max normalised cross-dataset means.
inline std::vector<ParetoEntry> pareto_frontier(std::span<const BenchmarkRecord> records) {
    const auto g = detail::group_records(records);
    if (g.algorithms.empty()) throw EmptyInput("pareto_frontier: no records");
    const auto means = detail::cross_dataset_means(g);
    std::vector<ParetoEntry> out;
    for (const auto& name : g.algorithms) out.push_back({name});
    for (std::size_t m = 0; m < 4; ++m) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& mean : means)
            if (!std::isnan(mean[m])) {
                lo = std::min(lo, mean[m]);
                hi = std::max(hi, mean[m]);
            }
        for (std::size_t a = 0; a < means.size(); ++a) {
            const double v = means[a][m];
            double x = std::numeric_limits<double>::infinity();
            if (!std::isnan(v)) {
                x = hi > lo ? (v - lo) / (hi - lo) : 0.0;
                if (m == 0) x = 1.0 - x;
            }
            out[a].normalized[m] = x;
        }
    }
    for (auto& a : out)
        for (const auto& b : out) {
            bool all_le = true, any_lt = false;
            for (std::size_t m = 0; m < 4; ++m) {
                all_le = all_le && b.normalized[m] <= a.normalized[m];
                any_lt = any_lt || b.normalized[m] < a.normalized[m];
            }
            if (all_le && any_lt) {
                a.efficient = false;
                break;
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Complexity fitting

enum class ComplexityClass { Poly, Log, Exp };

inline std::string_view to_string(ComplexityClass c) {
    switch (c) {
    case ComplexityClass::Poly: return "poly";
    case ComplexityClass::Log: return "log";
    case ComplexityClass::Exp: return "exp";
    }
    return "unknown";
}

struct ComplexityFit {
    ComplexityClass model = ComplexityClass::Poly;
    // Poly: exponent; Log: slope on ln(size); Exp: rate on size.
    double exponent_or_rate = stats::nan;
    double intercept = stats::nan;
    double r2 = stats::nan;
    std::array<double, 3> r2_by_model{stats::nan, stats::nan, stats::nan};  // poly, log, exp
    bool degenerate = false;

    std::string big_o() const {
        char buf[64];
        switch (model) {
        case ComplexityClass::Poly: std::snprintf(buf, sizeof buf, "O(n^%.2f)", exponent_or_rate); break;
        case ComplexityClass::Log: std::snprintf(buf, sizeof buf, "O(log n)"); break;
        case ComplexityClass::Exp: std::snprintf(buf, sizeof buf, "O(e^(%.3gn))", exponent_or_rate); break;
        }
        return buf;
    }
};

namespace detail {

inline double r2_in_time_space(std::span<const double> times, const std::vector<double>& predicted) {
    const double m = stats::mean(times);
    double res = 0.0, tot = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        res += (times[i] - predicted[i]) * (times[i] - predicted[i]);
        tot += (times[i] - m) * (times[i] - m);
    }
    return tot > 0.0 ? 1.0 - res / tot : stats::nan;
}

} // namespace detail

/// Fits time ~ size^b (log-log line), time ~ a + b ln(size) and
/// time ~ e^(a + r size); the best R² in time space wins, ties in that order.
inline ComplexityFit fit_complexity(std::span<const double> sizes, std::span<const double> times) {
    if (sizes.size() != times.size()) throw LengthMismatch("fit_complexity: sizes and times differ in length");
    if (sizes.size() < 3) throw TooShort("fit_complexity: need at least 3 points");
    for (std::size_t i = 0; i < sizes.size(); ++i)
        if (!(sizes[i] > 0.0) || !(times[i] > 0.0) || !std::isfinite(sizes[i]) || !std::isfinite(times[i]))
            throw InvalidArgument("fit_complexity: sizes and times must be positive");

    ComplexityFit fit;
    if (std::all_of(times.begin(), times.end(), [&](double t) { return t == times[0]; })) {
        fit.exponent_or_rate = 0.0;
        fit.intercept = times[0];
        fit.degenerate = true;
        return fit;
    }
    const std::size_t n = sizes.size();
    std::vector<double> log_n(n), log_t(n);
    for (std::size_t i = 0; i < n; ++i) {
        log_n[i] = std::log(sizes[i]);
        log_t[i] = std::log(times[i]);
    }
    std::vector<double> pred(n);

    const auto poly = stats::linear_fit(log_n, log_t);
    for (std::size_t i = 0; i < n; ++i) pred[i] = std::exp(poly.intercept + poly.slope * log_n[i]);
    fit.r2_by_model[0] = detail::r2_in_time_space(times, pred);

    const auto lg = stats::linear_fit(log_n, times);
    for (std::size_t i = 0; i < n; ++i) pred[i] = lg.intercept + lg.slope * log_n[i];
    fit.r2_by_model[1] = detail::r2_in_time_space(times, pred);

    const auto ex = stats::linear_fit(sizes, log_t);
    for (std::size_t i = 0; i < n; ++i) pred[i] = std::exp(ex.intercept + ex.slope * sizes[i]);
    fit.r2_by_model[2] = detail::r2_in_time_space(times, pred);

    std::size_t best = 0;
    for (std::size_t k = 1; k < 3; ++k)
        if (detail::nan_last(-fit.r2_by_model[k]) < detail::nan_last(-fit.r2_by_model[best])) best = k;
    fit.r2 = fit.r2_by_model[best];
    switch (best) {
    case 0:
        fit.model = ComplexityClass::Poly;
        fit.exponent_or_rate = poly.slope;
        fit.intercept = poly.intercept;
        break;
    case 1:
        fit.model = ComplexityClass::Log;
        fit.exponent_or_rate = lg.slope;
        fit.intercept = lg.intercept;
        break;
    default:
        fit.model = ComplexityClass::Exp;
        fit.exponent_or_rate = ex.slope;
        fit.intercept = ex.intercept;
    }
    return fit;
}

} // namespace spinex
