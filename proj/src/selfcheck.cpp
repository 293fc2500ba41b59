#include "checkembed/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace checkembed::baselines {

std::vector<double> selfcheck_bert(std::span<const TokenEmbeddingSeq> reply_sentences,
                                   std::span<const std::vector<TokenEmbeddingSeq>> sample_docs) {
    if (reply_sentences.empty()) throw Error(ErrorCode::EmptySequence, "reply has no sentences");
    if (sample_docs.empty()) throw Error(ErrorCode::EmptySample, "selfcheck needs k >= 1 samples");
    for (std::size_t j = 0; j < sample_docs.size(); ++j) {
        if (sample_docs[j].empty()) {
            throw Error(ErrorCode::EmptySample, "sample " + std::to_string(j) + " has no sentences");
        }
    }

    std::vector<double> scores;
    scores.reserve(reply_sentences.size());
    for (const auto& sentence : reply_sentences) {
        double total = 0.0;
        for (const auto& doc : sample_docs) {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& other : doc) best = std::max(best, bertscore_greedy(sentence, other).f1);
            total += best;
        }
        scores.push_back(total / static_cast<double>(sample_docs.size()));
    }
    return scores;
}

std::vector<double> selfcheck_nli(std::span<const std::string> reply_sentences,
                                  std::span<const std::string> samples, NliScorer& nli) {
    if (reply_sentences.empty()) throw Error(ErrorCode::EmptySequence, "reply has no sentences");
    if (samples.empty()) throw Error(ErrorCode::EmptySample, "selfcheck needs k >= 1 samples");

    std::vector<double> scores;
    scores.reserve(reply_sentences.size());
    for (std::size_t i = 0; i < reply_sentences.size(); ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < samples.size(); ++j) {
            const double p = nli.contradiction(samples[j], reply_sentences[i]);
            if (!(p >= 0.0 && p <= 1.0)) {
                throw Error(ErrorCode::OutOfRangeScore,
                            "nli returned " + std::to_string(p) + " for sentence " + std::to_string(i) +
                                ", sample " + std::to_string(j));
            }
            total += p;
        }
        scores.push_back(total / static_cast<double>(samples.size()));
    }
    return scores;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    const auto push_trimmed = [&](std::string_view piece) {
        std::size_t b = 0;
        std::size_t e = piece.size();
        while (b < e && is_space(piece[b])) ++b;
        while (e > b && is_space(piece[e - 1])) --e;
        if (b < e) out.emplace_back(piece.substr(b, e - b));
    };

    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        if (i + 1 == text.size() || is_space(text[i + 1])) {
            push_trimmed(text.substr(start, i + 1 - start));
            start = i + 1;
        }
    }
    if (start < text.size()) push_trimmed(text.substr(start));
    return out;
}

} // namespace checkembed::baselines
