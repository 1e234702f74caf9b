#pragma once

// JSON report envelope and per-command payloads. Non-finite numbers are
// written as null.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinex/bench.hpp"
#include "spinex/core.hpp"
#include "spinex/diagnostics.hpp"
#include "spinex/metrics.hpp"

namespace spinex {

using Json = nlohmann::ordered_json;

enum class ReportKind { Forecast, Anomalies, Explainability, Benchmark, Complexity, Metrics };

inline std::string_view to_string(ReportKind k) {
    switch (k) {
    case ReportKind::Forecast: return "forecast";
    case ReportKind::Anomalies: return "anomalies";
    case ReportKind::Explainability: return "explainability";
    case ReportKind::Benchmark: return "benchmark";
    case ReportKind::Complexity: return "complexity";
    case ReportKind::Metrics: return "metrics";
    }
    return "unknown";
}

inline ReportKind parse_report_kind(std::string_view s) {
    for (ReportKind k : {ReportKind::Forecast, ReportKind::Anomalies, ReportKind::Explainability,
                         ReportKind::Benchmark, ReportKind::Complexity, ReportKind::Metrics})
        if (to_string(k) == s) return k;
    throw ParseError(0, 0, "unknown report kind: " + std::string(s));
}

inline constexpr std::string_view generator_name = "spinex";

struct Report {
    ReportKind kind = ReportKind::Forecast;
    std::uint64_t seed = 0;
    Json payload = Json::object();
    std::string generated_by{generator_name};

    bool operator==(const Report&) const = default;
};

inline Json to_json(const Report& r) {
    return Json{{"kind", to_string(r.kind)}, {"generated_by", r.generated_by}, {"seed", r.seed}, {"payload", r.payload}};
}

inline Report report_from_json(const Json& j) {
    try {
        Report r;
        r.kind = parse_report_kind(j.at("kind").get<std::string>());
        r.generated_by = j.at("generated_by").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.payload = j.at("payload");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, 0, std::string("malformed report: ") + e.what());
    }
}

inline std::string dump(const Report& r) { return to_json(r).dump(2) + "\n"; }

inline Report parse_report(const std::string& text) {
    try {
        return report_from_json(Json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, 0, std::string("malformed report: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Payload builders

inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json number_array(std::span<const double> xs) {
    Json out = Json::array();
    for (double v : xs) out.push_back(number(v));
    return out;
}

inline Json forecast_payload(const ForecastResult& f, std::size_t window_size, double threshold) {
    Json j;
    j["values"] = number_array(f.values);
    j["ci_lower"] = f.ci_lower ? number_array(*f.ci_lower) : Json(nullptr);
    j["ci_upper"] = f.ci_upper ? number_array(*f.ci_upper) : Json(nullptr);
    j["provenance"] = to_string(f.provenance);
    j["window_size"] = window_size;
    j["threshold"] = number(threshold);
    return j;
}

inline Json anomaly_payload(const AnomalyResult& a) {
    Json j;
    j["threshold"] = number(a.threshold);
    j["percentile"] = number(a.percentile);
    Json list = Json::array();
    for (const auto& r : a.anomalies)
        list.push_back({{"start", r.start_index}, {"end", r.end_index}, {"score", number(r.similarity_score)}});
    j["anomalies"] = std::move(list);
    const auto finite = stats::drop_nan(a.scores);
    j["score_stats"] = {{"min", number(finite.empty() ? stats::nan : *std::min_element(finite.begin(), finite.end()))},
                        {"max", number(finite.empty() ? stats::nan : *std::max_element(finite.begin(), finite.end()))},
                        {"mean", number(stats::mean(finite))},
                        {"median", number(stats::median(finite))}};
    return j;
}

inline Json explainability_payload(const ExplainabilityReport& r) {
    Json j;
    j["top_similar_segments"] = r.top_similar_segments;
    j["similarity_scores"] = number_array(r.similarity_scores);
    j["threshold"] = number(r.threshold);
    Json contributions = Json::array();
    for (const auto& c : r.segment_contributions)
        contributions.push_back({{"segment_index", c.segment_index},
                                 {"similarity_score", number(c.similarity_score)},
                                 {"prediction", number_array(c.prediction)},
                                 {"weighted_contribution", number_array(c.weighted_contribution)},
                                 {"contribution_percentage", number_array(c.contribution_percentage)}});
    j["segment_contributions"] = std::move(contributions);
    j["combined_forecast"] = number_array(r.combined_forecast);
    return j;
}

inline Json neighbor_payload(const Neighbor& n, const SegmentAnalysis& a) {
    Json scores = Json::object();
    for (const auto& [method, score] : a.scores) scores[std::string(to_string(method))] = number(score);
    return {{"index", n.index},
            {"score", number(n.score)},
            {"method_scores", std::move(scores)},
            {"feature_contributions", number_array(a.contributions)},
            {"top_contributing_features", a.top_contributing}};
}

inline Json metrics_payload(const MetricRecord& m) {
    Json j = Json::object();
    const auto values = m.as_array();
    for (std::size_t i = 0; i < values.size(); ++i) j[std::string(MetricRecord::names[i])] = number(values[i]);
    return j;
}

inline Json ranking_payload(const RankingTable& t) {
    Json rows = Json::array();
    for (const auto& r : t.rows) {
        Json row{{"algorithm", r.algorithm}};
        Json values = Json::object(), columns = Json::object();
        for (std::size_t m = 0; m < 4; ++m) {
            values[std::string(benchmark_metrics[m])] = number(r.values[m]);
            columns[std::string(benchmark_metrics[m])] = number(r.columns[m]);
        }
        row["means"] = std::move(values);
        row[t.scheme == RankingScheme::Normalized ? "normalized" : "ranks"] = std::move(columns);
        row["average"] = number(r.average);
        row["final_rank"] = r.final_rank;
        rows.push_back(std::move(row));
    }
    return {{"scheme", to_string(t.scheme)}, {"rows", std::move(rows)}};
}

inline Json benchmark_payload(std::size_t horizon, std::uint64_t seed, std::span<const BenchmarkRecord> records) {
    Json recs = Json::array();
    for (const auto& r : records) {
        Json row{{"algorithm", r.algorithm},
                 {"dataset", r.dataset},
                 {"direction_accuracy", number(r.direction_accuracy)},
                 {"dtw_cost", number(r.dtw_cost)},
                 {"mase", number(r.mase)},
                 {"mad", number(r.mad)}};
        if (!r.error.empty()) row["error"] = r.error;
        recs.push_back(std::move(row));
    }
    Json j{{"horizon", horizon}, {"seed", seed}, {"records", std::move(recs)}};
    Json rankings = Json::object();
    Json pareto = Json::object();
    std::size_t algorithms = 0;
    {
        std::vector<std::string> names;
        for (const auto& r : records) names.push_back(r.algorithm);
        std::sort(names.begin(), names.end());
        algorithms = static_cast<std::size_t>(std::unique(names.begin(), names.end()) - names.begin());
    }
    if (algorithms >= 2) {
        rankings["granularity"] = "per_dataset_records";
        rankings["average"] = ranking_payload(rank_average(records));
        rankings["normalized"] = ranking_payload(rank_normalized(records));
        rankings["wins"] = ranking_payload(rank_wins(records));
    }
    if (algorithms >= 1)
        for (const auto& e : pareto_frontier(records)) pareto[e.algorithm] = e.efficient;
    j["rankings"] = std::move(rankings);
    j["pareto"] = std::move(pareto);
    return j;
}

/// Long-format CSV: algorithm,dataset,metric,value (empty value for NaN).
inline std::string benchmark_csv(std::span<const BenchmarkRecord> records) {
    std::ostringstream os;
    os.precision(17);
    os << "algorithm,dataset,metric,value\n";
    for (const auto& r : records) {
        const auto values = r.metrics();
        for (std::size_t m = 0; m < 4; ++m) {
            os << r.algorithm << ',' << r.dataset << ',' << benchmark_metrics[m] << ',';
            if (std::isfinite(values[m])) os << values[m];
            os << '\n';
        }
    }
    return os.str();
}

inline Json complexity_payload(std::span<const double> sizes, std::span<const double> times, const ComplexityFit& fit) {
    return {{"sizes", number_array(sizes)},
            {"times", number_array(times)},
            {"class", to_string(fit.model)},
            {"exponent_or_rate", number(fit.exponent_or_rate)},
            {"r2", number(fit.r2)},
            {"big_o", fit.big_o()},
            {"r2_by_model",
             {{"poly", number(fit.r2_by_model[0])}, {"log", number(fit.r2_by_model[1])}, {"exp", number(fit.r2_by_model[2])}}}};
}

} // namespace spinex
