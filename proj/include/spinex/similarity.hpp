#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spinex/core.hpp"
#include "spinex/error.hpp"
#include "spinex/stats.hpp"

namespace spinex {

enum class SimilarityMethod { Cosine, Correlation, Euclidean, Spearman, Dtw, Direction };

inline constexpr std::array<SimilarityMethod, 6> all_similarity_methods{
    SimilarityMethod::Cosine, SimilarityMethod::Correlation, SimilarityMethod::Euclidean,
    SimilarityMethod::Spearman, SimilarityMethod::Dtw, SimilarityMethod::Direction};

inline std::string_view to_string(SimilarityMethod m) {
    switch (m) {
    case SimilarityMethod::Cosine: return "cosine";
    case SimilarityMethod::Correlation: return "correlation";
    case SimilarityMethod::Euclidean: return "euclidean";
    case SimilarityMethod::Spearman: return "spearman";
    case SimilarityMethod::Dtw: return "dtw";
    case SimilarityMethod::Direction: return "direction";
    }
    return "unknown";
}

inline SimilarityMethod parse_similarity_method(std::string_view name) {
    for (auto m : all_similarity_methods)
        if (to_string(m) == name) return m;
    throw InvalidArgument("invalid similarity method: " + std::string(name));
}

struct SimilarityMatrix {
    Matrix entries;
    SimilarityMethod method = SimilarityMethod::Cosine;
};

/// Full dynamic-programming DTW with absolute-difference cost and no band.
inline double dtw_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw EmptyInput("dtw_distance: empty sequence");
    const std::size_t m = b.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = inf;
        for (std::size_t j = 1; j <= m; ++j) {
            const double cost = std::abs(a[i - 1] - b[j - 1]);
            cur[j] = cost + std::min({prev[j], cur[j - 1], prev[j - 1]});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

/// Fraction of step directions that agree; sign(0) is its own class.
inline double direction_accuracy(std::span<const double> s1, std::span<const double> s2) {
    if (s1.size() != s2.size()) throw LengthMismatch("direction_accuracy: inputs differ in length");
    if (s1.size() < 2) throw TooShort("direction_accuracy: need at least 2 points");
    auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
    std::size_t matches = 0;
    for (std::size_t i = 1; i < s1.size(); ++i)
        if (sign(s1[i] - s1[i - 1]) == sign(s2[i] - s2[i - 1])) ++matches;
    return static_cast<double>(matches) / static_cast<double>(s1.size() - 1);
}

struct EntropyParams {
    int m = 2;
    double r = 0.2;
};

/// Sample entropy with an absolute tolerance: -log((A + 1e-10) / (B + 1e-10)),
/// where B counts template pairs of length m within r and A those that still
/// match at length m + 1. Pairs are counted once and never against themselves.
inline double sample_entropy(std::span<const double> x, EntropyParams params = {}) {
    if (params.m < 1 || !(params.r > 0.0)) throw InvalidArgument("sample_entropy: need m >= 1 and r > 0");
    const auto m = static_cast<std::size_t>(params.m);
    if (x.size() <= m + 1) throw TooShort("sample_entropy: sequence must be longer than m + 1");
    const std::size_t n_templates = x.size() - m;
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < n_templates; ++i) {
        for (std::size_t j = i + 1; j < n_templates; ++j) {
            bool match = true;
            for (std::size_t k = 0; k < m && match; ++k) match = std::abs(x[i + k] - x[j + k]) <= params.r;
            if (!match) continue;
            b += 1.0;
            if (std::abs(x[i + m] - x[j + m]) <= params.r) a += 1.0;
        }
    }
    return -std::log((a + 1e-10) / (b + 1e-10));
}

namespace detail {

inline bool elementwise_equal(std::span<const double> a, std::span<const double> b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

// Correlation-type score with the degenerate-segment substitution rule.
inline double guarded(double value, std::span<const double> a, std::span<const double> b) {
    if (std::isfinite(value)) return value;
    return elementwise_equal(a, b) ? 1.0 : 0.0;
}

inline double cosine(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return elementwise_equal(a, b) ? 1.0 : 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

} // namespace detail

/// Similarity of one pair of equal-length segments under `method`.
inline double pair_similarity(std::span<const double> a, std::span<const double> b, SimilarityMethod method) {
    if (a.size() != b.size()) throw LengthMismatch("pair_similarity: segments differ in length");
    switch (method) {
    case SimilarityMethod::Cosine: return detail::cosine(a, b);
    case SimilarityMethod::Correlation: return detail::guarded(stats::pearson(a, b), a, b);
    case SimilarityMethod::Euclidean: return 1.0 / (1.0 + detail::euclidean_distance(a, b));
    case SimilarityMethod::Spearman: {
        const auto ra = stats::average_ranks(a);
        const auto rb = stats::average_ranks(b);
        return detail::guarded(stats::pearson(ra, rb), a, b);
    }
    case SimilarityMethod::Dtw: return 1.0 / (1.0 + dtw_distance(a, b));
    case SimilarityMethod::Direction: return direction_accuracy(a, b);
    }
    throw InvalidArgument("pair_similarity: unknown method");
}

/// n x n similarity between all rows of `segments`. Spearman ranks are
/// computed once per row rather than per pair.
inline SimilarityMatrix pairwise_similarity(const Matrix& segments, SimilarityMethod method) {
    const std::size_t n = segments.rows();
    if (n < 2) throw TooShort("pairwise_similarity: need at least 2 segments");
    if (segments.cols() < 2) throw TooShort("pairwise_similarity: segments must hold at least 2 values");

    Matrix ranked;
    if (method == SimilarityMethod::Spearman) {
        ranked = Matrix(n, segments.cols());
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = stats::average_ranks(segments.row(i));
            std::copy(r.begin(), r.end(), ranked.row(i).begin());
        }
    }

    SimilarityMatrix out{Matrix(n, n), method};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            if (method == SimilarityMethod::Spearman)
                s = detail::guarded(stats::pearson(ranked.row(i), ranked.row(j)), segments.row(i), segments.row(j));
            else
                s = pair_similarity(segments.row(i), segments.row(j), method);
            out.entries(i, j) = s;
            out.entries(j, i) = s;
        }
    }
    return out;
}

/// 1 / (1 + sqrt(s)) applied to each raw DTW similarity entry s.
inline SimilarityMatrix adjusted_dtw_similarity(const Matrix& segments) {
    auto m = pairwise_similarity(segments, SimilarityMethod::Dtw);
    for (std::size_t i = 0; i < m.entries.rows(); ++i)
        for (double& v : m.entries.row(i)) v = 1.0 / (1.0 + std::sqrt(v));
    return m;
}

} // namespace spinex
