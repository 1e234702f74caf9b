#pragma once

// Independent reference implementations used only by the tests. They favour
// obviousness over speed and share no code with the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

// Minimum over all monotone warping paths ending at (i, j), by plain
// recursion back to (0, 0). No memoisation.
template <class Cost>
double dtw_recursive(const std::vector<double>& a, const std::vector<double>& b, std::size_t i, std::size_t j,
                     Cost cost) {
    const double here = cost(a[i], b[j]);
    if (i == 0 && j == 0) return here;
    double best = std::numeric_limits<double>::infinity();
    if (i > 0) best = std::min(best, dtw_recursive(a, b, i - 1, j, cost));
    if (j > 0) best = std::min(best, dtw_recursive(a, b, i, j - 1, cost));
    if (i > 0 && j > 0) best = std::min(best, dtw_recursive(a, b, i - 1, j - 1, cost));
    return here + best;
}

template <class Cost>
double dtw_recursive(const std::vector<double>& a, const std::vector<double>& b, Cost cost) {
    return dtw_recursive(a, b, a.size() - 1, b.size() - 1, cost);
}

inline double dtw_abs(const std::vector<double>& a, const std::vector<double>& b) {
    return dtw_recursive(a, b, [](double x, double y) { return std::abs(x - y); });
}

inline double dtw_squared_root(const std::vector<double>& a, const std::vector<double>& b) {
    return std::sqrt(dtw_recursive(a, b, [](double x, double y) { return (x - y) * (x - y); }));
}

// Sample entropy by enumerating every template pair (i < j).
inline double sample_entropy(const std::vector<double>& x, std::size_t m, double r) {
    auto count = [&](std::size_t len) {
        double c = 0;
        const std::size_t templates = x.size() - m;  // same template count for m and m+1
        for (std::size_t i = 0; i < templates; ++i)
            for (std::size_t j = i + 1; j < templates; ++j) {
                bool match = true;
                for (std::size_t k = 0; k < len; ++k)
                    if (std::abs(x[i + k] - x[j + k]) > r) match = false;
                if (match) ++c;
            }
        return c;
    };
    const double b = count(m), a = count(m + 1);
    return -std::log((a + 1e-10) / (b + 1e-10));
}

inline double mean(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double pop_std(const std::vector<double>& x) {
    const double m = mean(x);
    double s = 0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(x.size()));
}

inline std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = d(gen);
    return v;
}

} // namespace oracle
