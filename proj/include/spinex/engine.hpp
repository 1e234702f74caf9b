#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/segmentation.hpp"
#include "spinex/similarity.hpp"

namespace spinex {

struct EngineConfig {
    std::optional<std::size_t> window_size;
    std::size_t forecast_horizon = 1;
    std::vector<SimilarityMethod> similarity_methods{SimilarityMethod::Cosine, SimilarityMethod::Euclidean,
                                                     SimilarityMethod::Dtw};
    bool dynamic_window = true;
    bool multi_level = true;
    bool dynamic_threshold = true;
    std::uint64_t seed = 0;
};

/// Configuration plus mutable history of one forecasting engine. Single owner:
/// do not share one instance between threads.
class EngineState {
public:
    static constexpr std::size_t history_limit = 100;

    EngineState(const TimeSeries& series, EngineConfig config = {}) : config_(std::move(config)) {
        const std::size_t n = series.size();
        const std::size_t half = std::max<std::size_t>(1, n / 2);
        if (config_.window_size)
            window_size_ = std::min(*config_.window_size, half);
        else
            window_size_ = std::min(std::max<std::size_t>(10, n / 10), half);
        window_size_ = std::max<std::size_t>(1, window_size_);
        horizon_ = std::max<std::size_t>(1, std::min(config_.forecast_horizon, n / 10));
        if (config_.similarity_methods.empty())
            config_.similarity_methods = EngineConfig{}.similarity_methods;
        if (config_.dynamic_window && n >= 2) window_size_ = std::min(adaptive_window_size(series), half);
    }

    std::size_t window_size() const noexcept { return window_size_; }
    void set_window_size(std::size_t w) { window_size_ = std::max<std::size_t>(1, w); }
    std::size_t forecast_horizon() const noexcept { return horizon_; }
    const std::vector<SimilarityMethod>& similarity_methods() const noexcept { return config_.similarity_methods; }
    bool dynamic_window() const noexcept { return config_.dynamic_window; }
    bool multi_level() const noexcept { return config_.multi_level; }
    bool dynamic_threshold() const noexcept { return config_.dynamic_threshold; }
    std::uint64_t seed() const noexcept { return config_.seed; }
    const EngineConfig& config() const noexcept { return config_; }

    double threshold() const noexcept { return threshold_; }
    void set_threshold(double t) noexcept { threshold_ = t; }

    const std::deque<double>& recent_errors() const noexcept { return recent_errors_; }
    const std::deque<double>& recent_similarity_scores() const noexcept { return recent_similarity_; }

    /// Appends one (error, similarity) record, keeping the most recent 100 of each.
    void record_performance(double error, double similarity) {
        recent_errors_.push_back(error);
        recent_similarity_.push_back(similarity);
        while (recent_errors_.size() > history_limit) recent_errors_.pop_front();
        while (recent_similarity_.size() > history_limit) recent_similarity_.pop_front();
    }

    /// Stores `segments` under its content digest and returns the key.
    Digest cache_segments(Matrix segments) {
        Digest key = content_digest(segments);
        segments_cache_.try_emplace(key, std::move(segments));
        return key;
    }

    const Matrix& cached_segments(const Digest& key) const { return segments_cache_.at(key); }

    /// Similarity matrix for cached segments, computed at most once per (digest, method).
    const SimilarityMatrix& similarity_matrix(const Digest& key, SimilarityMethod method) {
        const auto cache_key = std::make_pair(key, method);
        auto it = similarity_cache_.find(cache_key);
        if (it == similarity_cache_.end())
            it = similarity_cache_.emplace(cache_key, pairwise_similarity(segments_cache_.at(key), method)).first;
        return it->second;
    }

    std::size_t cached_segment_count() const noexcept { return segments_cache_.size(); }
    std::size_t cached_similarity_count() const noexcept { return similarity_cache_.size(); }

    void clear_caches() {
        segments_cache_.clear();
        similarity_cache_.clear();
    }

private:
    EngineConfig config_;
    std::size_t window_size_ = 1;
    std::size_t horizon_ = 1;
    double threshold_ = 0.5;
    std::deque<double> recent_errors_;
    std::deque<double> recent_similarity_;
    std::map<Digest, Matrix> segments_cache_;
    std::map<std::pair<Digest, SimilarityMethod>, SimilarityMatrix> similarity_cache_;
};

/// Free-function form of EngineState::record_performance.
inline void record_performance(EngineState& state, double error, double similarity) {
    state.record_performance(error, similarity);
}

} // namespace spinex
