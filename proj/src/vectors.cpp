#include "checkembed/vectors.hpp"

#include "checkembed/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace checkembed {

namespace {

void require_finite(std::span<const double> xs, const char* what) {
    for (double x : xs) {
        if (!std::isfinite(x)) {
            throw Error(ErrorCode::NonFinite, std::string(what) + " contains a non-finite value");
        }
    }
}

void require_same_length(std::span<const double> a, std::span<const double> b, ErrorCode code) {
    if (a.size() != b.size()) {
        throw Error(code, "lengths differ: " + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()));
    }
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

bool is_constant(std::span<const double> xs) {
    return std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) == xs.end();
}

} // namespace

Embedding::Embedding(std::vector<double> values, std::string model_id)
    : values_(std::move(values)), model_id_(std::move(model_id)) {
    if (values_.empty()) {
        throw Error(ErrorCode::InvalidInput, "embedding must have dim >= 1");
    }
    require_finite(values_, "embedding");
}

double cosine(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b, ErrorCode::DimensionMismatch);
    if (a.empty()) {
        throw Error(ErrorCode::InvalidInput, "cosine of empty vectors");
    }
    require_finite(a, "first vector");
    require_finite(b, "second vector");

    double dot = 0.0;
    double norm_a = 0.0;
    double norm_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        norm_a += a[i] * a[i];
        norm_b += b[i] * b[i];
    }
    if (norm_a == 0.0 || norm_b == 0.0) {
        throw Error(ErrorCode::ZeroVector, "cosine requires nonzero vectors");
    }
    // sqrt of the product makes identical inputs give exactly 1; separate
    // roots only when the product leaves the normal range
    const double product = norm_a * norm_b;
    const double denom = std::isnormal(product) ? std::sqrt(product) : std::sqrt(norm_a) * std::sqrt(norm_b);
    return clamp_unit(dot / denom);
}

double cosine(const Embedding& a, const Embedding& b) { return cosine(a.values(), b.values()); }

double pearson(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b, ErrorCode::DimensionMismatch);
    if (a.size() < 2) {
        throw Error(ErrorCode::InvalidInput, "pearson needs at least two values");
    }
    require_finite(a, "first sequence");
    require_finite(b, "second sequence");
    if (is_constant(a) || is_constant(b)) {
        throw Error(ErrorCode::ConstantVector, "correlation undefined for a constant sequence");
    }

    // Welford-style single pass over means and co-moments.
    double mean_a = 0.0;
    double mean_b = 0.0;
    double m2_a = 0.0;
    double m2_b = 0.0;
    double co = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        mean_a += da / n;
        mean_b += db / n;
        m2_a += da * (a[i] - mean_a);
        m2_b += db * (b[i] - mean_b);
        // both forms of the co-moment update, averaged, so pearson(a, b) and
        // pearson(b, a) agree bit for bit
        co += 0.5 * (da * (b[i] - mean_b) + db * (a[i] - mean_a));
    }
    if (m2_a <= 0.0 || m2_b <= 0.0) {
        throw Error(ErrorCode::ConstantVector, "correlation undefined for zero variance");
    }
    return clamp_unit(co / (std::sqrt(m2_a) * std::sqrt(m2_b)));
}

double pearson(const Embedding& a, const Embedding& b) { return pearson(a.values(), b.values()); }

std::vector<double> average_ranks(std::span<const double> xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return xs[l] < xs[r]; });

    std::vector<double> ranks(xs.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) {
            ++j;
        }
        // positions i..j (0-based) share rank mean(i+1 .. j+1)
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            ranks[order[t]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
    require_same_length(xs, ys, ErrorCode::LengthMismatch);
    if (xs.size() < 2) {
        throw Error(ErrorCode::InvalidInput, "spearman needs at least two values");
    }
    require_finite(xs, "first sequence");
    require_finite(ys, "second sequence");
    if (is_constant(xs) || is_constant(ys)) {
        throw Error(ErrorCode::ConstantSequence, "rank correlation undefined for all-equal values");
    }
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    return pearson(rx, ry);
}

} // namespace checkembed
