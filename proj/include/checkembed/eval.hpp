#pragma once

#include "checkembed/baselines.hpp"
#include "checkembed/providers.hpp"
#include "checkembed/scorematrix.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace checkembed::eval {

enum class Label { MajorInaccurate, MinorInaccurate, Accurate };
enum class Binary { Hallucinated, Faithful };

/// Which side of the threshold a scheme flags as hallucinated.
enum class Polarity { LowScoreFlags, HighScoreFlags };

std::string_view to_string(Label l) noexcept;
std::string_view to_string(Binary b) noexcept;
std::string_view to_string(Polarity p) noexcept;
Label parse_label(std::string_view name);
Binary parse_binary(std::string_view name);

struct LabeledPassage {
    std::string id;
    std::vector<std::string> sentences;
    std::vector<Label> labels;
    std::vector<std::string> samples;

    /// |sentences| == |labels| >= 1.
    void validate() const;

    friend bool operator==(const LabeledPassage&, const LabeledPassage&) = default;
};

struct BinaryRecord {
    std::string id;
    std::string response;
    Binary label = Binary::Faithful;
    std::vector<std::string> samples;
    /// Original request; only the ragtruth judge template needs it.
    std::optional<std::string> prompt;
};

/// Major -> 0, Minor -> 0.5, Accurate -> 1, averaged.
double passage_score(std::span<const Label> labels);

struct Correlation {
    /// Percentages rounded to one decimal.
    double pearson = 0.0;
    double spearman = 0.0;
    double pearson_raw = 0.0;
    double spearman_raw = 0.0;
};

double round_percent(double r) noexcept;
Correlation correlate(std::span<const double> predicted, std::span<const double> gold);

struct PrF1 {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    friend bool operator==(const PrF1&, const PrF1&) = default;
};

bool flags(double score, double threshold, Polarity polarity) noexcept;

/// Positive class is Hallucinated. Zero denominators give 0.
PrF1 pr_f1(std::span<const double> scores, std::span<const Binary> labels, double threshold,
           Polarity polarity);

struct ThresholdPoint {
    double threshold;
    PrF1 metrics;
};

struct ThresholdSweep {
    double best_threshold = 0.0;
    double best_f1 = 0.0;
    std::vector<ThresholdPoint> curve; // in grid order
};

/// Exhaustive over `grid`; equal f1 resolves to the smaller threshold.
ThresholdSweep threshold_sweep(std::span<const double> scores, std::span<const Binary> labels,
                               Polarity polarity, std::span<const double> grid);

/// Thresholds realising every distinct split of `scores` under either polarity.
std::vector<double> default_grid(std::span<const double> scores);

// Scoring schemes

enum class Scheme { CheckEmbed, BertScore, SelfCheckBert, SelfCheckNli, LlmJudge };

std::string_view to_string(Scheme s) noexcept;
Scheme parse_scheme(std::string_view name);
std::span<const Scheme> all_schemes() noexcept;
Polarity polarity_of(Scheme s) noexcept;

/// Which CheckEmbed summary value becomes the record score.
enum class Statistic { MeanOffdiag, Frobenius, GtAlignment };

std::string_view to_string(Statistic s) noexcept;
Statistic parse_statistic(std::string_view name);

/// Providers a scheme may need. Unused members may stay null.
struct Scorers {
    Embedder* embedder = nullptr;       // whole-text vectors (checkembed)
    Embedder* token_embedder = nullptr; // per-token vectors (bertscore, selfcheck_bert)
    NliScorer* nli = nullptr;
    TextGenerator* judge = nullptr;
    GenerationRequest judge_settings;
    Measure measure = Measure::Cosine;
    Statistic statistic = Statistic::MeanOffdiag;
    const baselines::IdfTable* idf = nullptr;
    std::size_t threads = 1;
};

struct ScoringInput {
    std::string_view response;
    std::span<const std::string> sentences; // response split into sentences
    std::span<const std::string> samples;
    std::optional<std::string_view> prompt;
    baselines::JudgeTask judge_task = baselines::JudgeTask::WikiBio;
};

/// Raw scheme score for one record, in the scheme's own orientation.
double score_record(Scheme scheme, const ScoringInput& input, const Scorers& scorers);

/// Scheme score turned so that larger means more faithful.
double oriented(Scheme scheme, double score) noexcept;

struct PassageEvaluation {
    Scheme scheme = Scheme::CheckEmbed;
    std::size_t k = 0;
    std::vector<std::string> ids;
    std::vector<double> predicted; // oriented
    std::vector<double> gold;
    Correlation correlation;
};

/// Scores each passage with its first `k` samples (all when unset), then
/// correlates against passage_score.
PassageEvaluation evaluate_passages(std::span<const LabeledPassage> dataset, Scheme scheme,
                                    const Scorers& scorers, std::optional<std::size_t> k = std::nullopt);

struct SampleSweepRow {
    std::size_t k;
    Correlation correlation;
};

std::vector<SampleSweepRow> sample_sweep(std::span<const LabeledPassage> dataset,
                                         std::span<const std::size_t> k_values, Scheme scheme,
                                         const Scorers& scorers);

struct BinaryEvaluation {
    Scheme scheme = Scheme::CheckEmbed;
    Polarity polarity = Polarity::LowScoreFlags;
    std::vector<std::string> ids;
    std::vector<double> scores; // raw orientation
    std::vector<Binary> labels;
    ThresholdSweep sweep;
    PrF1 best;
};

BinaryEvaluation evaluate_binary(std::span<const BinaryRecord> dataset, Scheme scheme,
                                 const Scorers& scorers);

/// JSON reports and plain-text tables for the CLI.
std::string report_json(const PassageEvaluation& e);
std::string report_json(const BinaryEvaluation& e);
std::string report_table(const PassageEvaluation& e);
std::string report_table(const BinaryEvaluation& e);

// Dataset files (JSON Lines)

std::vector<LabeledPassage> load_passages(const std::filesystem::path& path);
std::vector<BinaryRecord> load_binary_records(const std::filesystem::path& path);
std::string passages_to_jsonl(std::span<const LabeledPassage> dataset);
std::string binary_records_to_jsonl(std::span<const BinaryRecord> dataset);

// Synthetic corpus

struct SyntheticOptions {
    std::size_t records = 100;
    std::size_t replies = 10;
    std::size_t sentences = 10;
    std::size_t words_per_sentence = 12;
    std::uint64_t seed = 20240601;
};

/// Record i has corruption fraction p = (i mod 10) / 10: each reply replaces
/// every base token independently with probability p by a fresh noise token.
/// round(10 p) of its sentences are labelled Major, so passage_score = 1 - p.
std::vector<LabeledPassage> synthetic_corpus(const SyntheticOptions& options = {});

/// Corruption fraction the generator used for record `index`.
double synthetic_fraction(std::size_t index) noexcept;

} // namespace checkembed::eval
