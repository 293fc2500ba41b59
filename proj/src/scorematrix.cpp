#include "checkembed/scorematrix.hpp"

#include "checkembed/error.hpp"
#include "checkembed/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace checkembed {

std::string_view to_string(Measure m) noexcept {
    return m == Measure::Cosine ? "cosine" : "pearson";
}

Measure parse_measure(std::string_view name) {
    if (name == "cosine") return Measure::Cosine;
    if (name == "pearson") return Measure::Pearson;
    throw Error(ErrorCode::InvalidInput,
                "unknown measure '" + std::string(name) + "' (expected cosine or pearson)");
}

std::string_view to_string(Verdict v) noexcept {
    return v == Verdict::HighConfidence ? "HighConfidence" : "Inspect";
}

SimilarityMatrix::SimilarityMatrix(std::size_t order, std::vector<double> entries, bool has_gt,
                                   Measure measure)
    : order_(order), entries_(std::move(entries)), has_gt_(has_gt), measure_(measure) {
    if (order_ < 2) {
        throw Error(ErrorCode::DegenerateMatrix, "matrix order must be at least 2");
    }
    if (entries_.size() != order_ * order_) {
        throw Error(ErrorCode::InvalidInput, "entry count does not match order");
    }
    for (std::size_t i = 0; i < order_; ++i) {
        if (at(i, i) != 1.0) {
            throw Error(ErrorCode::InvalidInput, "diagonal entry " + std::to_string(i) + " is not 1");
        }
        for (std::size_t j = 0; j < order_; ++j) {
            const double v = at(i, j);
            if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
                throw Error(ErrorCode::InvalidInput, "entry out of [-1, 1]");
            }
            if (v != at(j, i)) {
                throw Error(ErrorCode::InvalidInput, "matrix is not symmetric");
            }
        }
    }
    labels_.reserve(order_);
    for (std::size_t i = 0; i < reply_count(); ++i) {
        labels_.push_back(std::to_string(i));
    }
    if (has_gt_) {
        labels_.emplace_back(kGroundTruthLabel);
    }
}

SimilarityMatrix build_matrix(std::span<const Embedding> embeddings,
                              const std::optional<Embedding>& gt, Measure measure,
                              const BuildOptions& options) {
    if (embeddings.size() < 2) {
        throw Error(ErrorCode::DegenerateMatrix, "need at least two embeddings, got " +
                                                     std::to_string(embeddings.size()));
    }
    const auto& first = embeddings.front();
    for (std::size_t i = 1; i < embeddings.size(); ++i) {
        if (embeddings[i].dim() != first.dim()) {
            throw Error(ErrorCode::DimensionMismatch,
                        "embedding " + std::to_string(i) + " has dim " +
                            std::to_string(embeddings[i].dim()) + ", expected " +
                            std::to_string(first.dim()));
        }
        if (embeddings[i].model_id() != first.model_id()) {
            throw Error(ErrorCode::InvalidInput, "embedding " + std::to_string(i) +
                                                     " comes from a different model");
        }
    }
    if (gt && gt->dim() != first.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "ground-truth embedding has dim " +
                                                      std::to_string(gt->dim()));
    }

    std::vector<const Embedding*> rows;
    rows.reserve(embeddings.size() + 1);
    for (const auto& e : embeddings) rows.push_back(&e);
    if (gt) rows.push_back(&*gt);
    const std::size_t n = rows.size();

    // Fixed enumeration of the strict upper triangle.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }

    std::vector<double> entries(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) entries[i * n + i] = 1.0;

    auto failures = detail::run_indexed(pairs.size(), options.threads, [&](std::size_t p) {
        const auto [i, j] = pairs[p];
        const double v = measure == Measure::Cosine ? cosine(*rows[i], *rows[j])
                                                    : pearson(*rows[i], *rows[j]);
        entries[i * n + j] = v;
        entries[j * n + i] = v;
    });
    for (std::size_t p = 0; p < failures.size(); ++p) {
        if (!failures[p]) continue;
        const auto [i, j] = pairs[p];
        try {
            std::rethrow_exception(failures[p]);
        } catch (const Error& e) {
            throw e.with_context("pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        }
    }
    return SimilarityMatrix(n, std::move(entries), gt.has_value(), measure);
}

void ConfidenceThresholds::validate() const {
    if (!(mean_min > -1.0 && mean_min <= 1.0)) {
        throw Error(ErrorCode::InvalidInput, "mean_min must lie in (-1, 1]");
    }
    if (!(std_max >= 0.0) || !std::isfinite(std_max)) {
        throw Error(ErrorCode::InvalidInput, "std_max must be a finite value >= 0");
    }
}

namespace {

double sorted_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return std::accumulate(values.begin(), values.end(), 0.0);
}

} // namespace

MatrixSummary summarize(const SimilarityMatrix& matrix, const ConfidenceThresholds& thresholds) {
    thresholds.validate();
    const std::size_t k = matrix.reply_count();
    if (k < 2) {
        throw Error(ErrorCode::DegenerateMatrix, "need at least two replies to summarize");
    }

    std::vector<double> offdiag;
    offdiag.reserve(k * (k - 1) / 2);
    std::vector<double> squares;
    squares.reserve(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double v = matrix.at(i, j);
            squares.push_back(v * v);
            if (j > i) offdiag.push_back(v);
        }
    }

    MatrixSummary s;
    s.frobenius_normalized = std::sqrt(sorted_sum(squares)) / static_cast<double>(k);

    const bool all_equal = std::adjacent_find(offdiag.begin(), offdiag.end(),
                                              std::not_equal_to<>()) == offdiag.end();
    const double m = static_cast<double>(offdiag.size());
    if (all_equal) {
        s.mean_offdiag = offdiag.front();
        s.std_offdiag = 0.0;
    } else {
        s.mean_offdiag = sorted_sum(offdiag) / m;
        std::vector<double> dev2;
        dev2.reserve(offdiag.size());
        for (double v : offdiag) dev2.push_back((v - s.mean_offdiag) * (v - s.mean_offdiag));
        s.std_offdiag = std::sqrt(sorted_sum(std::move(dev2)) / m);
    }

    if (matrix.has_gt()) {
        std::vector<double> column;
        column.reserve(k);
        for (std::size_t i = 0; i < k; ++i) column.push_back(matrix.at(i, k));
        s.gt_alignment = sorted_sum(std::move(column)) / static_cast<double>(k);
    }

    s.verdict = (s.mean_offdiag > thresholds.mean_min && s.std_offdiag < thresholds.std_max)
                    ? Verdict::HighConfidence
                    : Verdict::Inspect;
    return s;
}

std::vector<HeatmapCell> heatmap_data(const SimilarityMatrix& matrix) {
    std::vector<HeatmapCell> cells;
    const std::size_t n = matrix.order();
    cells.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cells.push_back({matrix.labels()[i], matrix.labels()[j], matrix.at(i, j)});
        }
    }
    return cells;
}

SimilarityMatrix matrix_from_cells(std::span<const HeatmapCell> cells, Measure measure) {
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(cells.size()))));
    if (n * n != cells.size() || n < 2) {
        throw Error(ErrorCode::ParseError, "cell count is not a square of at least 4");
    }
    const bool has_gt = cells[(n - 1) * n].row_label == kGroundTruthLabel;
    std::vector<double> entries;
    entries.reserve(cells.size());
    for (const auto& c : cells) entries.push_back(c.value);
    SimilarityMatrix m(n, std::move(entries), has_gt, measure);
    for (std::size_t idx = 0; idx < cells.size(); ++idx) {
        if (cells[idx].row_label != m.labels()[idx / n] ||
            cells[idx].col_label != m.labels()[idx % n]) {
            throw Error(ErrorCode::ParseError, "cell labels are not in row-major order");
        }
    }
    return m;
}

} // namespace checkembed
