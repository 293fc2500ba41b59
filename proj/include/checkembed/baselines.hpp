#pragma once

#include "checkembed/error.hpp"
#include "checkembed/providers.hpp"
#include "checkembed/vectors.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace checkembed::baselines {

/// Tokens of one text with one vector per token and optional idf weights.
struct TokenEmbeddingSeq {
    std::vector<std::string> tokens;
    std::vector<Embedding> vectors;
    std::optional<std::vector<double>> idf;

    /// |tokens| == |vectors| >= 1, uniform dims, idf same length, >= 0 and not all zero.
    void validate() const;
};

struct BertScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    friend bool operator==(const BertScore&, const BertScore&) = default;
};

/// Harmonic mean of P and R when both share a strict sign, else 0.
double f1_from(double precision, double recall) noexcept;

/// Greedy matching over the token cosine matrix. Recall averages, over
/// reference tokens, the best match among candidate tokens (idf-weighted by
/// the reference's weights when present); precision swaps the roles.
BertScore bertscore_greedy(const TokenEmbeddingSeq& candidate, const TokenEmbeddingSeq& reference);

/// For each reply sentence: max f1 against the sentences of each sample,
/// averaged over samples.
std::vector<double> selfcheck_bert(std::span<const TokenEmbeddingSeq> reply_sentences,
                                   std::span<const std::vector<TokenEmbeddingSeq>> sample_docs);

/// For each sentence: mean over samples of nli.contradiction(sample, sentence).
std::vector<double> selfcheck_nli(std::span<const std::string> reply_sentences,
                                  std::span<const std::string> samples, NliScorer& nli);

/// Splits after '.', '!' or '?' when followed by whitespace or end of text.
std::vector<std::string> split_sentences(std::string_view text);

/// Document frequencies over a tokenised corpus; idf(w) = ln((N + 1) / (df(w) + 1)).
class IdfTable {
public:
    explicit IdfTable(std::span<const std::vector<std::string>> corpus);

    double weight(const std::string& token) const;
    std::vector<double> weights(std::span<const std::string> tokens) const;
    std::size_t documents() const noexcept { return documents_; }

private:
    std::size_t documents_;
    std::map<std::string, std::size_t> df_;
};

/// bag_tokens(text), each token embedded with `embedder`.
TokenEmbeddingSeq encode_tokens(std::string_view text, Embedder& embedder,
                                const IdfTable* idf = nullptr);

// LLM-as-a-Judge

enum class JudgeTask {
    SimilarDescriptions,
    LegalSummary,
    ScientificPassage,
    WikiBio,
    WikiBioWithReference,
    RagTruth,
};

std::string_view to_string(JudgeTask task) noexcept;
JudgeTask parse_judge_task(std::string_view name);
std::span<const JudgeTask> all_judge_tasks() noexcept;

/// The raw template text, slots written as {name}.
std::string_view judge_template(JudgeTask task) noexcept;
/// Slot names the template requires, in order of appearance.
std::vector<std::string> judge_slots(JudgeTask task);

/// Substitutes every {slot}; inserted values are not rescanned.
std::string assemble_judge_prompt(JudgeTask task, const std::map<std::string, std::string>& slots);

struct JudgeVerdict {
    int score = 0;
    std::string raw_reply;
};

/// Raised for replies that are not a bare integer in [0, 100].
class UnparsableVerdict : public Error {
public:
    UnparsableVerdict(std::string raw_reply, const std::string& why)
        : Error(ErrorCode::UnparsableVerdict, why), raw_reply_(std::move(raw_reply)) {}
    const std::string& raw_reply() const noexcept { return raw_reply_; }

private:
    std::string raw_reply_;
};

JudgeVerdict parse_judge_reply(std::string_view raw_reply);

JudgeVerdict llm_judge(JudgeTask task, const std::map<std::string, std::string>& slots,
                       TextGenerator& generator, const GenerationRequest& settings);

} // namespace checkembed::baselines
