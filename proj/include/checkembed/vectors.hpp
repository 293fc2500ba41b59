#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace checkembed {

/// Dense vector for one whole item (an answer, a token, an image...).
/// Construction validates dim >= 1 and that every value is finite.
class Embedding {
public:
    explicit Embedding(std::vector<double> values, std::string model_id = {});

    std::span<const double> values() const noexcept { return values_; }
    std::size_t dim() const noexcept { return values_.size(); }
    const std::string& model_id() const noexcept { return model_id_; }

    friend bool operator==(const Embedding&, const Embedding&) = default;

private:
    std::vector<double> values_;
    std::string model_id_;
};

// Similarity kernels. All results are clamped to [-1, 1]; inputs with NaN or
// infinities are rejected with ErrorCode::NonFinite.

double cosine(std::span<const double> a, std::span<const double> b);
double cosine(const Embedding& a, const Embedding& b);

/// Sample Pearson correlation of two index-aligned sequences (length >= 2).
/// A constant sequence raises ConstantVector.
double pearson(std::span<const double> a, std::span<const double> b);
double pearson(const Embedding& a, const Embedding& b);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> xs, std::span<const double> ys);

/// 1-based ranks, ties share the mean of the positions they occupy.
std::vector<double> average_ranks(std::span<const double> xs);

} // namespace checkembed
