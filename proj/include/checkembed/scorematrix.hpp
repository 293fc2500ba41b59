#pragma once

#include "checkembed/vectors.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace checkembed {

enum class Measure { Cosine, Pearson };

std::string_view to_string(Measure m) noexcept;
Measure parse_measure(std::string_view name);

/// Label used for the ground-truth row/column, always the last one.
inline constexpr std::string_view kGroundTruthLabel = "GT";

/// Symmetric n x n matrix of pairwise similarity scores with unit diagonal.
/// Rows 0..k-1 are replies; an optional final row holds the ground truth.
class SimilarityMatrix {
public:
    /// Validates symmetry, unit diagonal, entries in [-1, 1] and labels.
    SimilarityMatrix(std::size_t order, std::vector<double> entries, bool has_gt, Measure measure);

    std::size_t order() const noexcept { return order_; }
    std::size_t reply_count() const noexcept { return has_gt_ ? order_ - 1 : order_; }
    bool has_gt() const noexcept { return has_gt_; }
    Measure measure() const noexcept { return measure_; }

    double at(std::size_t row, std::size_t col) const { return entries_[row * order_ + col]; }
    std::span<const double> entries() const noexcept { return entries_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    friend bool operator==(const SimilarityMatrix&, const SimilarityMatrix&) = default;

private:
    std::size_t order_;
    std::vector<double> entries_;
    bool has_gt_;
    Measure measure_;
    std::vector<std::string> labels_;
};

struct BuildOptions {
    /// Worker threads for pair evaluation; output is identical for any value.
    std::size_t threads = 1;
};

/// Evaluates the kernel once per unordered pair and mirrors it.
SimilarityMatrix build_matrix(std::span<const Embedding> embeddings,
                              const std::optional<Embedding>& gt, Measure measure,
                              const BuildOptions& options = {});

struct ConfidenceThresholds {
    double mean_min = 0.9;
    double std_max = 0.05;

    void validate() const;
};

enum class Verdict { HighConfidence, Inspect };

std::string_view to_string(Verdict v) noexcept;

struct MatrixSummary {
    double frobenius_normalized = 0.0;
    double mean_offdiag = 0.0;
    double std_offdiag = 0.0;
    std::optional<double> gt_alignment;
    Verdict verdict = Verdict::Inspect;

    friend bool operator==(const MatrixSummary&, const MatrixSummary&) = default;
};

/// Reduces the reply block of the matrix (GT excluded) to mean/std over the
/// strict upper triangle and ||A'||_F / n'. Population std is used.
/// gt_alignment is the mean of the GT column over reply rows.
///
/// Values are summed in sorted order, so the summary of a permuted matrix is
/// bit-identical to the original.
MatrixSummary summarize(const SimilarityMatrix& matrix, const ConfidenceThresholds& thresholds);

struct HeatmapCell {
    std::string row_label;
    std::string col_label;
    double value;

    friend bool operator==(const HeatmapCell&, const HeatmapCell&) = default;
};

/// Row-major cell list with exact values.
std::vector<HeatmapCell> heatmap_data(const SimilarityMatrix& matrix);

/// Inverse of heatmap_data.
SimilarityMatrix matrix_from_cells(std::span<const HeatmapCell> cells, Measure measure);

} // namespace checkembed
