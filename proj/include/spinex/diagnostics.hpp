#pragma once

// Anomaly flagging, neighbour retrieval and explainability on top of the
// similarity profile.

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/engine.hpp"
#include "spinex/forecaster.hpp"
#include "spinex/seasonality.hpp"
#include "spinex/segmentation.hpp"
#include "spinex/similarity.hpp"
#include "spinex/stats.hpp"

namespace spinex {

struct AnomalyRecord {
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    std::vector<double> segment;
    double similarity_score = 0.0;
};

struct AnomalyResult {
    std::vector<AnomalyRecord> anomalies;
    double threshold = 0.0;
    double percentile = 2.0;
    std::vector<double> scores;
};

struct Neighbor {
    std::size_t index = 0;
    double score = 0.0;
    bool operator==(const Neighbor&) const = default;
};

struct SegmentAnalysis {
    std::vector<std::pair<SimilarityMethod, double>> scores;
    std::vector<double> contributions;
    std::vector<std::size_t> top_contributing;
};

struct SegmentContribution {
    std::size_t segment_index = 0;
    double similarity_score = 0.0;
    std::vector<double> prediction;
    std::vector<double> weighted_contribution;
    std::vector<double> contribution_percentage;
};

struct ExplainabilityReport {
    std::vector<std::size_t> top_similar_segments;
    std::vector<double> similarity_scores;
    double threshold = 0.0;
    std::vector<SegmentContribution> segment_contributions;
    // Similarity-weighted mean of the contributing futures, per step.
    std::vector<double> combined_forecast;
};

/// Indices of the k largest values, descending; ties go to the smaller index.
/// NaN entries are never selected.
inline std::vector<std::size_t> top_k_indices(std::span<const double> values, std::size_t k) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isnan(values[i])) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    if (order.size() > k) order.resize(k);
    return order;
}

/// Flags every segment whose score is strictly below the given percentile
/// of the similarity profile.
inline AnomalyResult detect_anomalies(EngineState& state, const TimeSeries& series, double threshold_percentile = 2.0) {
    const SimilarityProfile profile = find_similar_segments(state, series);
    if (profile.scores.empty()) throw TooShort("detect_anomalies: no segments to score");
    AnomalyResult out;
    out.percentile = threshold_percentile;
    out.threshold = stats::percentile(profile.scores, threshold_percentile);
    out.scores = profile.scores;
    const std::size_t w = state.window_size();
    const auto data = series.values();
    for (std::size_t k = 0; k < profile.scores.size(); ++k) {
        if (!(profile.scores[k] < out.threshold)) continue;
        AnomalyRecord r;
        r.start_index = profile.first_start + k;
        r.end_index = r.start_index + w;
        const std::size_t stop = std::min(r.end_index, data.size());
        if (r.start_index < stop) r.segment.assign(data.begin() + static_cast<std::ptrdiff_t>(r.start_index),
                                                   data.begin() + static_cast<std::ptrdiff_t>(stop));
        r.similarity_score = profile.scores[k];
        out.anomalies.push_back(std::move(r));
    }
    return out;
}

/// The k historical segments most similar to the latest one.
inline std::vector<Neighbor> nearest_neighbors(EngineState& state, const TimeSeries& series, std::size_t k) {
    if (k == 0) throw InvalidArgument("nearest_neighbors: k must be at least 1");
    const SimilarityProfile profile = find_similar_segments(state, series);
    std::vector<Neighbor> out;
    for (std::size_t i : top_k_indices(profile.scores, k)) out.push_back({profile.first_start + i, profile.scores[i]});
    return out;
}

/// Per-method scores between segment `segment_index` and the latest segment
/// plus element-wise absolute differences of their normalised values.
inline SegmentAnalysis analyze_segment_similarity(const EngineState& state, const TimeSeries& series,
                                                  std::size_t segment_index) {
    const auto segments = extract_segments(series, state.window_size());
    if (segment_index >= segments.size())
        throw IndexOutOfRange("analyze_segment_similarity: segment index " + std::to_string(segment_index) +
                              " out of range");
    const auto current = segments.rows.row(segments.size() - 1);
    const auto historical = segments.rows.row(segment_index);

    SegmentAnalysis out;
    for (SimilarityMethod method : state.similarity_methods()) {
        double score = stats::nan;
        try {
            score = pair_similarity(current, historical, method);
        } catch (const Error&) {
        }
        out.scores.emplace_back(method, score);
    }
    out.contributions.resize(current.size());
    for (std::size_t i = 0; i < current.size(); ++i) out.contributions[i] = std::abs(current[i] - historical[i]);
    out.top_contributing = top_k_indices(out.contributions, 5);
    return out;
}

/// Which segments inform the forecast and how much each contributes per step.
/// Segments above the dynamic threshold are used, else the top_k by score.
inline ExplainabilityReport explainability_report(EngineState& state, const TimeSeries& series,
                                                  std::size_t top_k = 5) {
    const SimilarityProfile profile = find_similar_segments(state, series);
    const auto& sims = profile.scores;
    if (sims.empty()) throw NoValidCandidates("explainability_report: empty similarity profile");

    ExplainabilityReport report;
    report.threshold = dynamic_threshold(state, sims);
    std::vector<std::size_t> picked;
    for (std::size_t k = 0; k < sims.size(); ++k)
        if (sims[k] > report.threshold) picked.push_back(k);
    if (picked.empty()) {
        picked = top_k_indices(sims, top_k);
        std::sort(picked.begin(), picked.end());
    }
    for (std::size_t k : picked) {
        report.top_similar_segments.push_back(profile.first_start + k);
        report.similarity_scores.push_back(sims[k]);
    }

    const auto data = series.values();
    const std::size_t w = state.window_size();
    const std::size_t h = state.forecast_horizon();
    for (std::size_t k : picked) {
        const std::size_t start = profile.first_start + k + w;
        if (start + h > data.size()) continue;
        SegmentContribution c;
        c.segment_index = profile.first_start + k;
        c.similarity_score = sims[k];
        c.prediction.assign(data.begin() + static_cast<std::ptrdiff_t>(start),
                            data.begin() + static_cast<std::ptrdiff_t>(start + h));
        c.weighted_contribution.resize(h);
        for (std::size_t j = 0; j < h; ++j) c.weighted_contribution[j] = c.prediction[j] * c.similarity_score;
        report.segment_contributions.push_back(std::move(c));
    }
    if (report.segment_contributions.empty())
        throw NoValidCandidates("explainability_report: no candidate has a complete future window");

    std::vector<double> step_total(h, 0.0);
    double weight_total = 0.0;
    for (const auto& c : report.segment_contributions) {
        weight_total += c.similarity_score;
        for (std::size_t j = 0; j < h; ++j) step_total[j] += c.weighted_contribution[j];
    }
    for (auto& c : report.segment_contributions) {
        c.contribution_percentage.resize(h);
        for (std::size_t j = 0; j < h; ++j)
            c.contribution_percentage[j] =
                step_total[j] == 0.0 ? stats::nan : c.weighted_contribution[j] / step_total[j] * 100.0;
    }
    report.combined_forecast.resize(h);
    for (std::size_t j = 0; j < h; ++j)
        report.combined_forecast[j] = weight_total == 0.0 ? stats::nan : step_total[j] / weight_total;
    return report;
}

} // namespace spinex
