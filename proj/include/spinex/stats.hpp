#pragma once

// Small numeric helpers shared across modules. Conventions follow the usual
// numeric-stack defaults: population standard deviation (divide by n) and
// percentiles by linear interpolation between order statistics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinex/error.hpp"

namespace spinex::stats {

inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();

inline double mean(std::span<const double> x) {
    if (x.empty()) return nan;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double variance(std::span<const double> x) {
    if (x.empty()) return nan;
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / static_cast<double>(x.size());
}

inline double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

// Linear interpolation between closest ranks; p in [0, 100].
inline double percentile(std::span<const double> x, double p) {
    if (x.empty()) return nan;
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double median(std::span<const double> x) { return percentile(x, 50.0); }

// Pearson correlation; NaN when either side has zero variance or fewer than 2 points.
inline double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) return nan;
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return nan;
    return sab / std::sqrt(saa * sbb);
}

// 1-based ranks, ties receive the average of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
    std::vector<double> ranks(x.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

inline std::vector<double> drop_nan(std::span<const double> x) {
    std::vector<double> out;
    out.reserve(x.size());
    for (double v : x)
        if (!std::isnan(v)) out.push_back(v);
    return out;
}

struct LinearFit {
    double intercept = nan;
    double slope = nan;
    double r2 = nan;
};

// Ordinary least squares y = intercept + slope * x.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw LengthMismatch("linear_fit: x and y differ in length");
    if (x.size() < 2) throw TooShort("linear_fit: need at least 2 points");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxx == 0.0 ? 0.0 : sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy > 0.0) {
        double sse = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - (fit.intercept + fit.slope * x[i]);
            sse += r * r;
        }
        fit.r2 = 1.0 - sse / syy;
    }
    return fit;
}

// Least-squares polynomial on a centred/scaled abscissa for conditioning.
class Polynomial {
public:
    Polynomial() = default;

    static Polynomial fit(std::span<const double> x, std::span<const double> y, int degree) {
        if (x.size() != y.size()) throw LengthMismatch("polyfit: x and y differ in length");
        if (x.empty()) throw EmptyInput("polyfit: no points");
        Polynomial p;
        p.shift_ = mean(x);
        p.scale_ = stddev(x);
        if (!(p.scale_ > 0.0)) p.scale_ = 1.0;
        const int cols = std::min<int>(degree + 1, static_cast<int>(x.size()));
        Eigen::MatrixXd v(static_cast<Eigen::Index>(x.size()), cols);
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(x.size()));
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double u = (x[i] - p.shift_) / p.scale_;
            double pw = 1.0;
            for (int c = 0; c < cols; ++c) {
                v(static_cast<Eigen::Index>(i), c) = pw;
                pw *= u;
            }
            rhs(static_cast<Eigen::Index>(i)) = y[i];
        }
        const Eigen::VectorXd coef = v.colPivHouseholderQr().solve(rhs);
        p.coeffs_.assign(coef.data(), coef.data() + coef.size());
        return p;
    }

    double operator()(double x) const {
        const double u = (x - shift_) / scale_;
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + *it;
        return acc;
    }

    // Coefficients in the scaled variable u = (x - shift) / scale, lowest order first.
    const std::vector<double>& scaled_coefficients() const noexcept { return coeffs_; }
    // Coefficients in x itself, lowest order first.
    std::vector<double> coefficients() const {
        std::vector<double> out(coeffs_.size(), 0.0);
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            const double aj = coeffs_[j] / std::pow(scale_, static_cast<double>(j));
            double binom = 1.0;
            for (std::size_t k = 0; k <= j; ++k) {
                // term C(j,k) x^k (-shift)^(j-k)
                out[k] += aj * binom * std::pow(-shift_, static_cast<double>(j - k));
                binom = binom * static_cast<double>(j - k) / static_cast<double>(k + 1);
            }
        }
        return out;
    }
    double shift() const noexcept { return shift_; }
    double scale() const noexcept { return scale_; }

private:
    std::vector<double> coeffs_;
    double shift_ = 0.0;
    double scale_ = 1.0;
};

// Sum_{t} x[t] * x[t+k] for k = 0..n-1 (un-centred, un-normalised).
inline std::vector<double> raw_autocorrelation(std::span<const double> x) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t k = 0; k < x.size(); ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t + k < x.size(); ++t) acc += x[t] * x[t + k];
        out[k] = acc;
    }
    return out;
}

// Mean-centred autocovariance for lags 0..max_lag (biased estimator, divide by n omitted).
inline std::vector<double> centred_autocovariance(std::span<const double> x, std::size_t max_lag) {
    const double m = mean(x);
    max_lag = std::min(max_lag, x.empty() ? 0 : x.size() - 1);
    std::vector<double> out(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t + k < x.size(); ++t) acc += (x[t] - m) * (x[t + k] - m);
        out[k] = acc;
    }
    return out;
}

} // namespace spinex::stats
