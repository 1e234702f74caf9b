#pragma once

// Command-line frontend. `run` is separate from main so tests can drive it
// with captured streams.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinex/spinex.hpp"

namespace spinex::cli {

enum class ExitCode : int { Ok = 0, Usage = 1, Data = 2, Internal = 3 };

struct CliConfig {
    std::string command;
    std::string input;
    std::string output;
    std::string plot;  // optional CSV series for plotting
    std::optional<std::size_t> window;
    std::size_t horizon = 1;
    std::vector<std::string> methods{"cosine", "euclidean", "dtw"};
    std::optional<std::uint64_t> seed;
    std::size_t splits = 3;
    std::size_t k = 5;
    double percentile = 2.0;
    bool no_dynamic_window = false;
    bool no_multi_level = false;
    bool no_dynamic_threshold = false;
    std::optional<std::string> column;

    // generate
    std::string function = "linear";
    std::size_t n_points = 100;
    double t_max = 10.0;
    std::optional<double> sigma;

    // evaluate
    std::string predicted;

    // bench
    std::vector<std::string> datasets{"linear", "sine", "sawtooth", "ar1", "composite_trend_seasonal"};
    std::vector<std::string> algorithms{"SPINEX", "naive", "sma", "ses", "holt_winters", "theta"};
    std::string csv;

    // complexity
    std::vector<double> sizes;
    std::vector<double> times;
};

namespace detail {

// Thrown for argument combinations CLI11 cannot validate on its own.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::uint64_t resolve_seed(const CliConfig& c) {
    if (c.seed) return *c.seed;
    if (const char* env = std::getenv("SPINEX_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument(env);
            return v;
        } catch (const std::exception&) {
            throw UsageError(std::string("SPINEX_SEED is not a non-negative integer: ") + env);
        }
    }
    return 0;
}

inline EngineConfig engine_config(const CliConfig& c, std::uint64_t seed) {
    EngineConfig e;
    e.window_size = c.window;
    e.forecast_horizon = c.horizon;
    e.similarity_methods.clear();
    for (const auto& m : c.methods) e.similarity_methods.push_back(parse_similarity_method(m));
    e.dynamic_window = !c.no_dynamic_window;
    e.multi_level = !c.no_multi_level;
    e.dynamic_threshold = !c.no_dynamic_threshold;
    e.seed = seed;
    return e;
}

inline TimeSeries load_input(const CliConfig& c) {
    if (c.input.empty()) throw UsageError("--input is required");
    if (!c.column) return load_csv(c.input);
    const std::string& col = *c.column;
    if (!col.empty() && std::all_of(col.begin(), col.end(), [](unsigned char ch) { return std::isdigit(ch); }))
        return load_csv(c.input, ColumnSelector{static_cast<std::size_t>(std::stoul(col))});
    return load_csv(c.input, ColumnSelector{col});
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open output file: " + path);
    f << text;
    if (!f) throw IoError("failed writing output file: " + path);
}

// Plot-ready series: index,actual,predicted,ci_lower,ci_upper. History rows
// leave the forecast columns empty; forecast rows leave actual empty.
inline std::string forecast_plot_csv(const TimeSeries& s, const ForecastResult& f) {
    std::ostringstream os;
    os.precision(17);
    os << "index,actual,predicted,ci_lower,ci_upper\n";
    for (std::size_t i = 0; i < s.size(); ++i) os << i << ',' << s[i] << ",,,\n";
    for (std::size_t j = 0; j < f.values.size(); ++j) {
        os << s.size() + j << ",," << f.values[j] << ',';
        if (f.ci_lower) os << (*f.ci_lower)[j];
        os << ',';
        if (f.ci_upper) os << (*f.ci_upper)[j];
        os << '\n';
    }
    return os.str();
}

// One column per neighbour segment (raw values) next to the latest segment.
inline std::string neighbor_plot_csv(const TimeSeries& s, EngineState& state, std::size_t k) {
    const auto neighbors = nearest_neighbors(state, s, k);
    const std::size_t w = state.window_size();
    const auto data = s.values();
    std::ostringstream os;
    os.precision(17);
    os << "index,latest";
    for (const auto& n : neighbors) os << ",segment_" << n.index;
    os << '\n';
    for (std::size_t i = 0; i < w; ++i) {
        os << i << ',' << data[data.size() - w + i];
        for (const auto& n : neighbors) os << ',' << data[n.index + i];
        os << '\n';
    }
    return os.str();
}

inline Algorithm named_algorithm(const std::string& name, const CliConfig& c) {
    if (name == "SPINEX" || name == "spinex") {
        EngineConfig e = engine_config(c, 0);
        return spinex_algorithm(e, "SPINEX");
    }
    BaselineSpec spec;
    spec.kind = parse_baseline_kind(name);
    return baseline_algorithm(name, spec);
}

struct Output {
    std::string report;                                          // main output
    std::vector<std::pair<std::string, std::string>> side_files;  // path -> content
};

inline Output dispatch(const CliConfig& c) {
    Output out;
    if (c.command == "generate") {
        SyntheticSpec spec = default_synthetic_spec(parse_synthetic_function(c.function), c.n_points, c.t_max,
                                                    resolve_seed(c));
        if (c.sigma) spec.noise_sigma = *c.sigma;
        const TimeSeries s = generate_synthetic(spec);
        std::ostringstream os;
        os.precision(17);
        os << "value\n";
        for (double v : s.values()) os << v << '\n';
        out.report = os.str();
        return out;
    }

    if (c.command == "complexity") {
        std::vector<double> sizes = c.sizes, times = c.times;
        if (!c.input.empty()) {
            const auto sz = load_csv(c.input, ColumnSelector{std::size_t{0}});
            const auto tm = load_csv(c.input, ColumnSelector{std::size_t{1}});
            sizes.assign(sz.values().begin(), sz.values().end());
            times.assign(tm.values().begin(), tm.values().end());
        }
        if (sizes.empty()) throw UsageError("complexity needs --sizes/--times or --input");
        const auto fit = fit_complexity(sizes, times);
        out.report = dump({ReportKind::Complexity, resolve_seed(c), complexity_payload(sizes, times, fit)});
        return out;
    }

    const std::uint64_t seed = resolve_seed(c);

    if (c.command == "bench") {
        std::vector<NamedSeries> data;
        for (const auto& name : c.datasets) {
            const auto f = parse_synthetic_function(name);
            data.push_back({name, generate_synthetic(default_synthetic_spec(f, c.n_points, c.t_max, seed))});
        }
        std::vector<Algorithm> algos;
        for (const auto& name : c.algorithms) algos.push_back(named_algorithm(name, c));
        const auto records = run_benchmark(data, algos, c.horizon, seed);
        out.report = dump({ReportKind::Benchmark, seed, benchmark_payload(c.horizon, seed, records)});
        if (!c.csv.empty()) out.side_files.emplace_back(c.csv, benchmark_csv(records));
        return out;
    }

    const TimeSeries series = load_input(c);
    EngineState state(series, engine_config(c, seed));

    if (c.command == "forecast") {
        const auto f = predict(state, series);
        out.report = dump({ReportKind::Forecast, seed, forecast_payload(f, state.window_size(), state.threshold())});
        if (!c.plot.empty()) out.side_files.emplace_back(c.plot, forecast_plot_csv(series, f));
    } else if (c.command == "evaluate") {
        Json payload;
        if (!c.predicted.empty()) {
            const TimeSeries pred = load_csv(c.predicted);
            payload["mode"] = "pair";
            payload["metrics"] = metrics_payload(evaluate(series.values(), pred.values()));
        } else {
            const auto cv = cross_validate(state, series, c.splits);
            payload["mode"] = cv.single_split ? "single_split" : "cross_validation";
            payload["average"] = metrics_payload(cv.average);
            Json splits = Json::array();
            for (const auto& s : cv.splits)
                splits.push_back({{"train_end", s.train_end},
                                  {"test_begin", s.test_begin},
                                  {"test_end", s.test_end},
                                  {"provenance", to_string(s.provenance)},
                                  {"metrics", metrics_payload(s.metrics)}});
            payload["splits"] = std::move(splits);
        }
        out.report = dump({ReportKind::Metrics, seed, payload});
    } else if (c.command == "anomalies") {
        const auto a = detect_anomalies(state, series, c.percentile);
        out.report = dump({ReportKind::Anomalies, seed, anomaly_payload(a)});
    } else if (c.command == "explain") {
        Json payload = explainability_payload(explainability_report(state, series, c.k));
        Json neighbors = Json::array();
        for (const auto& n : nearest_neighbors(state, series, c.k))
            neighbors.push_back(neighbor_payload(n, analyze_segment_similarity(state, series, n.index)));
        payload["nearest_neighbors"] = std::move(neighbors);
        if (!c.plot.empty()) out.side_files.emplace_back(c.plot, neighbor_plot_csv(series, state, c.k));
        out.report = dump({ReportKind::Explainability, seed, payload});
    } else {
        throw UsageError("unknown command: " + c.command);
    }
    return out;
}

inline void add_engine_options(CLI::App* sub, CliConfig& c) {
    sub->add_option("--input,-i", c.input, "CSV file with the series")->required();
    sub->add_option("--column", c.column, "column name or zero-based index");
    sub->add_option("--window", c.window, "segment window size");
    sub->add_option("--horizon", c.horizon, "forecast horizon")->check(CLI::PositiveNumber);
    sub->add_option("--methods", c.methods, "similarity methods")->delimiter(',');
    sub->add_flag("--no-dynamic-window", c.no_dynamic_window, "keep the configured window");
    sub->add_flag("--no-multi-level", c.no_multi_level, "single window scale only");
    sub->add_flag("--no-dynamic-threshold", c.no_dynamic_threshold, "fixed 95th percentile threshold");
}

} // namespace detail

/// Parses arguments and runs one command. Reports go to `out` (or the
/// --output file); diagnostics go to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliConfig c;
    CLI::App app{"SPINEX time series forecasting toolkit", "spinex"};
    app.require_subcommand(1);
    app.add_option("--output,-o", c.output, "write the report here instead of standard output");
    app.add_option("--seed", c.seed, "random seed (default SPINEX_SEED or 0)");

    auto* gen = app.add_subcommand("generate", "write a synthetic series as CSV");
    gen->add_option("--function", c.function, "generator name");
    gen->add_option("--n", c.n_points, "number of points");
    gen->add_option("--tmax", c.t_max, "end of the time grid");
    gen->add_option("--sigma", c.sigma, "noise standard deviation (default per generator)");

    auto* fc = app.add_subcommand("forecast", "forecast the next horizon steps");
    detail::add_engine_options(fc, c);
    fc->add_option("--plot", c.plot, "also write a plot-ready CSV series");

    auto* ev = app.add_subcommand("evaluate", "backtest, or score --predicted against --input");
    detail::add_engine_options(ev, c);
    ev->add_option("--splits", c.splits, "number of expanding-window splits");
    ev->add_option("--predicted", c.predicted, "CSV of predictions to score against the input");

    auto* an = app.add_subcommand("anomalies", "flag unusual segments");
    detail::add_engine_options(an, c);
    an->add_option("--percentile", c.percentile, "score percentile below which segments are flagged")
        ->check(CLI::Range(0.0, 100.0));

    auto* ex = app.add_subcommand("explain", "segments and contributions behind a forecast");
    detail::add_engine_options(ex, c);
    ex->add_option("--k", c.k, "number of segments and neighbours")->check(CLI::PositiveNumber);
    ex->add_option("--plot", c.plot, "also write neighbour segments as CSV columns");

    auto* be = app.add_subcommand("bench", "benchmark forecasters on synthetic datasets");
    be->add_option("--datasets", c.datasets, "synthetic generator names")->delimiter(',');
    be->add_option("--algorithms", c.algorithms, "SPINEX and baseline names")->delimiter(',');
    be->add_option("--horizon", c.horizon, "holdout length")->check(CLI::PositiveNumber);
    be->add_option("--n", c.n_points, "points per dataset");
    be->add_option("--tmax", c.t_max, "end of the time grid");
    be->add_option("--csv", c.csv, "also write long-format CSV records");
    be->add_option("--methods", c.methods, "similarity methods for SPINEX")->delimiter(',');

    auto* cx = app.add_subcommand("complexity", "fit poly/log/exp growth to timings");
    cx->add_option("--sizes", c.sizes, "input sizes")->delimiter(',');
    cx->add_option("--times", c.times, "measured times")->delimiter(',');
    cx->add_option("--input,-i", c.input, "CSV with size,time columns");

    // Every subcommand also accepts the global options after its name.
    for (auto* sub : {gen, fc, ev, an, ex, be, cx}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return static_cast<int>(ExitCode::Ok);
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return static_cast<int>(ExitCode::Ok);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Usage);
    }
    for (auto* sub : app.get_subcommands()) c.command = sub->get_name();

    try {
        const auto result = detail::dispatch(c);
        for (const auto& [path, text] : result.side_files) detail::write_text(path, text);
        if (c.output.empty())
            out << result.report;
        else
            detail::write_text(c.output, result.report);
        return static_cast<int>(ExitCode::Ok);
    } catch (const detail::UsageError& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Usage);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Usage);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Data);
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::Internal);
    }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"spinex"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace spinex::cli
