#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <openssl/evp.h>

#include "spinex/error.hpp"

namespace spinex {

/// Ordered, finite, non-empty sequence of observations. Labels (timestamps or
/// ordinal indices) are carried along but never interpreted.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values, std::optional<std::vector<double>> labels = std::nullopt)
        : values_(std::move(values)), labels_(std::move(labels)) {
        if (values_.empty()) throw EmptyInput("time series must hold at least one value");
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!std::isfinite(values_[i]))
                throw InvalidArgument("time series value at index " + std::to_string(i) + " is not finite");
        if (labels_) {
            if (labels_->size() != values_.size()) throw LengthMismatch("labels and values differ in length");
            for (std::size_t i = 1; i < labels_->size(); ++i)
                if (!((*labels_)[i] > (*labels_)[i - 1])) throw InvalidArgument("labels must be strictly increasing");
        }
    }

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    const std::optional<std::vector<double>>& labels() const noexcept { return labels_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double back() const noexcept { return values_.back(); }

    /// Copy of the first `n` observations (labels sliced alike).
    TimeSeries prefix(std::size_t n) const {
        n = std::min(n, values_.size());
        std::vector<double> v(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n));
        std::optional<std::vector<double>> l;
        if (labels_) l.emplace(labels_->begin(), labels_->begin() + static_cast<std::ptrdiff_t>(n));
        return TimeSeries(std::move(v), std::move(l));
    }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> values_;
    std::optional<std::vector<double>> labels_;
};

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// 128-bit content key; rendered as 32 lowercase hex characters.
using Digest = std::string;

/// MD5 over the matrix shape followed by its raw IEEE-754 bytes.
inline Digest content_digest(const Matrix& m) {
    if (m.empty()) throw EmptyInput("content_digest: empty matrix");
    const std::array<std::uint64_t, 2> shape{m.rows(), m.cols()};
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw Error("content_digest: cannot allocate digest context");
    const bool ok = EVP_DigestInit_ex(ctx, EVP_md5(), nullptr) == 1 &&
                    EVP_DigestUpdate(ctx, shape.data(), sizeof(shape)) == 1 &&
                    EVP_DigestUpdate(ctx, m.data().data(), m.data().size_bytes()) == 1 &&
                    EVP_DigestFinal_ex(ctx, md.data(), &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw Error("content_digest: digest computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    Digest out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0x0f]);
    }
    return out;
}

/// Seeded random stream. Same seed, same draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    double normal(double mean = 0.0, double sd = 1.0) {
        if (sd == 0.0) return mean;
        return std::normal_distribution<double>(mean, sd)(engine_);
    }
    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

enum class Provenance { SimilarityPath, Fallback, Baseline };

inline std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::SimilarityPath: return "similarity";
    case Provenance::Fallback: return "fallback";
    case Provenance::Baseline: return "baseline";
    }
    return "unknown";
}

/// Point forecast plus optional bands. Bands bound the simulated residual
/// paths, so only ci_lower <= ci_upper is guaranteed, not containment of values.
struct ForecastResult {
    std::vector<double> values;
    std::optional<std::vector<double>> ci_lower;
    std::optional<std::vector<double>> ci_upper;
    Provenance provenance = Provenance::Fallback;
};

using ColumnSelector = std::variant<std::string, std::size_t>;

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::optional<double> parse_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

} // namespace detail

/// Reads one numeric column from a comma-separated file. A header row is
/// recognised when the first row's selected field is not numeric. Missing or
/// non-numeric values raise ParseError; nothing is imputed.
inline TimeSeries load_csv(const std::string& path, const std::optional<ColumnSelector>& column = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
    if (in.bad()) throw IoError("error while reading '" + path + "'");
    while (!lines.empty() && detail::trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw ParseError(1, 1, "file holds no data");

    const auto first = detail::split_fields(lines.front());
    std::size_t col = first.size() - 1;
    bool has_header = false;
    if (column && std::holds_alternative<std::string>(*column)) {
        const auto& name = std::get<std::string>(*column);
        const auto it = std::find(first.begin(), first.end(), name);
        if (it == first.end()) throw ParseError(1, 1, "no column named '" + name + "'");
        col = static_cast<std::size_t>(it - first.begin());
        has_header = true;
    } else if (column) {
        col = std::get<std::size_t>(*column);
        if (col >= first.size()) throw ParseError(1, col + 1, "column index out of range");
    }
    if (!has_header) has_header = !detail::parse_double(first[col]).has_value();

    std::vector<double> values;
    values.reserve(lines.size());
    for (std::size_t i = has_header ? 1 : 0; i < lines.size(); ++i) {
        const auto fields = detail::split_fields(lines[i]);
        if (col >= fields.size()) throw ParseError(i + 1, col + 1, "missing value");
        const auto v = detail::parse_double(fields[col]);
        if (!v) throw ParseError(i + 1, col + 1, "not a finite number: '" + std::string(fields[col]) + "'");
        values.push_back(*v);
    }
    if (values.empty()) throw ParseError(lines.size(), col + 1, "file holds a header but no data");
    return TimeSeries(std::move(values));
}

/// Writes a single `value` column with round-trip precision.
inline void save_csv(const std::string& path, const TimeSeries& series) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "value\n" << std::setprecision(17);
    for (double v : series.values()) out << v << '\n';
    if (!out) throw IoError("error while writing '" + path + "'");
}

} // namespace spinex
