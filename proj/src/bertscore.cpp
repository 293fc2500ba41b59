#include "checkembed/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace checkembed::baselines {

void TokenEmbeddingSeq::validate() const {
    if (tokens.empty() || vectors.empty()) {
        throw Error(ErrorCode::EmptySequence, "token sequence is empty");
    }
    if (tokens.size() != vectors.size()) {
        throw Error(ErrorCode::LengthMismatch, "tokens and vectors differ in length");
    }
    for (const auto& v : vectors) {
        if (v.dim() != vectors.front().dim()) {
            throw Error(ErrorCode::DimensionMismatch, "token vectors have mixed dims");
        }
    }
    if (idf) {
        if (idf->size() != tokens.size()) {
            throw Error(ErrorCode::LengthMismatch, "idf weights differ in length from tokens");
        }
        bool any_positive = false;
        for (double w : *idf) {
            if (!std::isfinite(w) || w < 0.0) {
                throw Error(ErrorCode::InvalidInput, "idf weights must be finite and >= 0");
            }
            any_positive = any_positive || w > 0.0;
        }
        if (!any_positive) throw Error(ErrorCode::InvalidInput, "idf weights are all zero");
    }
}

double f1_from(double precision, double recall) noexcept {
    const bool same_sign = (precision > 0.0 && recall > 0.0) || (precision < 0.0 && recall < 0.0);
    if (!same_sign) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

namespace {

double weighted_mean(std::span<const double> best, const std::optional<std::vector<double>>& idf) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < best.size(); ++i) {
        const double w = idf ? (*idf)[i] : 1.0;
        num += w * best[i];
        den += w;
    }
    return num / den;
}

} // namespace

BertScore bertscore_greedy(const TokenEmbeddingSeq& candidate, const TokenEmbeddingSeq& reference) {
    candidate.validate();
    reference.validate();
    if (candidate.vectors.front().dim() != reference.vectors.front().dim()) {
        throw Error(ErrorCode::DimensionMismatch, "candidate and reference token dims differ");
    }

    const std::size_t nc = candidate.vectors.size();
    const std::size_t nr = reference.vectors.size();
    constexpr double lowest = -std::numeric_limits<double>::infinity();
    std::vector<double> row_best(nc, lowest); // candidate token -> best reference match
    std::vector<double> col_best(nr, lowest); // reference token -> best candidate match
    for (std::size_t i = 0; i < nc; ++i) {
        for (std::size_t j = 0; j < nr; ++j) {
            const double s = cosine(candidate.vectors[i], reference.vectors[j]);
            row_best[i] = std::max(row_best[i], s);
            col_best[j] = std::max(col_best[j], s);
        }
    }

    BertScore out;
    out.precision = weighted_mean(row_best, candidate.idf);
    out.recall = weighted_mean(col_best, reference.idf);
    out.f1 = f1_from(out.precision, out.recall);
    return out;
}

IdfTable::IdfTable(std::span<const std::vector<std::string>> corpus) : documents_(corpus.size()) {
    for (const auto& doc : corpus) {
        std::vector<std::string> unique(doc.begin(), doc.end());
        std::sort(unique.begin(), unique.end());
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
        for (const auto& t : unique) ++df_[t];
    }
}

double IdfTable::weight(const std::string& token) const {
    const auto it = df_.find(token);
    const double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
    return std::log((static_cast<double>(documents_) + 1.0) / (df + 1.0));
}

std::vector<double> IdfTable::weights(std::span<const std::string> tokens) const {
    std::vector<double> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(weight(t));
    return out;
}

TokenEmbeddingSeq encode_tokens(std::string_view text, Embedder& embedder, const IdfTable* idf) {
    TokenEmbeddingSeq seq;
    seq.tokens = bag_tokens(text);
    if (seq.tokens.empty()) throw Error(ErrorCode::EmptySequence, "text has no tokens");
    seq.vectors.reserve(seq.tokens.size());
    for (const auto& t : seq.tokens) seq.vectors.push_back(embedder.embed(t));
    if (idf) seq.idf = idf->weights(seq.tokens);
    return seq;
}

} // namespace checkembed::baselines
