#include "checkembed/eval.hpp"

#include "checkembed/error.hpp"
#include "checkembed/parallel.hpp"
#include "checkembed/vectors.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

namespace checkembed::eval {

namespace {

constexpr std::array kSchemes{Scheme::CheckEmbed, Scheme::BertScore, Scheme::SelfCheckBert,
                              Scheme::SelfCheckNli, Scheme::LlmJudge};

template <typename T>
void require_same_length(std::span<const double> a, std::span<const T> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::LengthMismatch,
                    std::to_string(a.size()) + " scores vs " + std::to_string(b.size()) + " labels");
    }
}

template <typename T>
T& require(T* p, std::string_view what, Scheme scheme) {
    if (!p) {
        throw Error(ErrorCode::ConfigError,
                    "scheme " + std::string(to_string(scheme)) + " needs " + std::string(what));
    }
    return *p;
}

double mean(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

std::string join_sentences(std::span<const std::string> sentences) {
    std::string out;
    for (const auto& s : sentences) {
        if (!out.empty()) out.push_back(' ');
        out += s;
    }
    return out;
}

/// Scores records in parallel; the first failing record (by index) is rethrown.
template <typename Fn>
std::vector<double> score_all(std::size_t count, std::size_t threads,
                              const std::function<std::string(std::size_t)>& id_of, Fn&& fn) {
    std::vector<double> out(count);
    auto failures = detail::run_indexed(count, threads, [&](std::size_t i) { out[i] = fn(i); });
    for (std::size_t i = 0; i < count; ++i) {
        if (!failures[i]) continue;
        try {
            std::rethrow_exception(failures[i]);
        } catch (const Error& e) {
            throw e.with_context("record " + id_of(i));
        }
    }
    return out;
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

nlohmann::ordered_json correlation_json(const Correlation& c) {
    return {{"pearson", c.pearson},
            {"spearman", c.spearman},
            {"pearson_raw", c.pearson_raw},
            {"spearman_raw", c.spearman_raw}};
}

nlohmann::ordered_json prf_json(const PrF1& m) {
    return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

} // namespace

std::string_view to_string(Label l) noexcept {
    switch (l) {
    case Label::MajorInaccurate: return "major";
    case Label::MinorInaccurate: return "minor";
    case Label::Accurate: return "accurate";
    }
    return "unknown";
}

std::string_view to_string(Binary b) noexcept {
    return b == Binary::Hallucinated ? "hallucinated" : "faithful";
}

std::string_view to_string(Polarity p) noexcept {
    return p == Polarity::LowScoreFlags ? "low_score_flags" : "high_score_flags";
}

Label parse_label(std::string_view name) {
    for (Label l : {Label::MajorInaccurate, Label::MinorInaccurate, Label::Accurate}) {
        if (to_string(l) == name) return l;
    }
    throw Error(ErrorCode::ParseError,
                "unknown label '" + std::string(name) + "' (valid: major, minor, accurate)");
}

Binary parse_binary(std::string_view name) {
    for (Binary b : {Binary::Hallucinated, Binary::Faithful}) {
        if (to_string(b) == name) return b;
    }
    throw Error(ErrorCode::ParseError,
                "unknown label '" + std::string(name) + "' (valid: hallucinated, faithful)");
}

void LabeledPassage::validate() const {
    if (labels.empty()) throw Error(ErrorCode::EmptyLabels, "passage " + id + " has no labels");
    if (sentences.size() != labels.size()) {
        throw Error(ErrorCode::LengthMismatch, "passage " + id + ": " + std::to_string(sentences.size()) +
                                                   " sentences vs " + std::to_string(labels.size()) +
                                                   " labels");
    }
}

double passage_score(std::span<const Label> labels) {
    if (labels.empty()) throw Error(ErrorCode::EmptyLabels, "passage_score needs at least one label");
    // Summed in halves so the result does not depend on label order.
    std::size_t halves = 0;
    for (Label l : labels) {
        if (l == Label::MinorInaccurate) halves += 1;
        if (l == Label::Accurate) halves += 2;
    }
    return static_cast<double>(halves) / (2.0 * static_cast<double>(labels.size()));
}

double round_percent(double r) noexcept { return std::round(r * 1000.0) / 10.0; }

Correlation correlate(std::span<const double> predicted, std::span<const double> gold) {
    if (predicted.size() != gold.size()) {
        throw Error(ErrorCode::LengthMismatch, "correlate needs equal-length sequences");
    }
    if (predicted.size() < 3) throw Error(ErrorCode::InvalidInput, "correlate needs at least 3 pairs");
    Correlation c;
    try {
        c.pearson_raw = pearson(predicted, gold);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ConstantVector) throw;
        throw Error(ErrorCode::ConstantSequence, e.detail());
    }
    c.spearman_raw = spearman(predicted, gold);
    c.pearson = round_percent(c.pearson_raw);
    c.spearman = round_percent(c.spearman_raw);
    return c;
}

bool flags(double score, double threshold, Polarity polarity) noexcept {
    return polarity == Polarity::LowScoreFlags ? score < threshold : score > threshold;
}

PrF1 pr_f1(std::span<const double> scores, std::span<const Binary> labels, double threshold,
           Polarity polarity) {
    require_same_length(scores, labels);
    if (scores.empty()) throw Error(ErrorCode::InvalidInput, "pr_f1 needs at least one record");
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = flags(scores[i], threshold, polarity);
        const bool actual = labels[i] == Binary::Hallucinated;
        if (predicted && actual) ++tp;
        if (predicted && !actual) ++fp;
        if (!predicted && actual) ++fn;
    }
    PrF1 m;
    if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

ThresholdSweep threshold_sweep(std::span<const double> scores, std::span<const Binary> labels,
                               Polarity polarity, std::span<const double> grid) {
    if (grid.empty()) throw Error(ErrorCode::InvalidInput, "threshold grid is empty");
    ThresholdSweep out;
    out.curve.reserve(grid.size());
    bool have_best = false;
    for (double t : grid) {
        const PrF1 m = pr_f1(scores, labels, t, polarity);
        out.curve.push_back({t, m});
        if (!have_best || m.f1 > out.best_f1 || (m.f1 == out.best_f1 && t < out.best_threshold)) {
            out.best_f1 = m.f1;
            out.best_threshold = t;
            have_best = true;
        }
    }
    return out;
}

std::vector<double> default_grid(std::span<const double> scores) {
    if (scores.empty()) throw Error(ErrorCode::InvalidInput, "no scores to derive a grid from");
    std::vector<double> grid(scores.begin(), scores.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const double inf = std::numeric_limits<double>::infinity();
    grid.insert(grid.begin(), std::nextafter(grid.front(), -inf));
    grid.push_back(std::nextafter(grid.back(), inf));
    return grid;
}

std::string_view to_string(Scheme s) noexcept {
    switch (s) {
    case Scheme::CheckEmbed: return "checkembed";
    case Scheme::BertScore: return "bertscore";
    case Scheme::SelfCheckBert: return "selfcheck_bert";
    case Scheme::SelfCheckNli: return "selfcheck_nli";
    case Scheme::LlmJudge: return "llm_judge";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    for (Scheme s : kSchemes) {
        if (to_string(s) == name) return s;
    }
    std::string valid;
    for (Scheme s : kSchemes) {
        if (!valid.empty()) valid += ", ";
        valid += to_string(s);
    }
    throw Error(ErrorCode::InvalidInput, "unknown scheme '" + std::string(name) + "' (valid: " + valid + ")");
}

std::span<const Scheme> all_schemes() noexcept { return kSchemes; }

Polarity polarity_of(Scheme s) noexcept {
    return s == Scheme::SelfCheckNli ? Polarity::HighScoreFlags : Polarity::LowScoreFlags;
}

double oriented(Scheme scheme, double score) noexcept {
    return polarity_of(scheme) == Polarity::HighScoreFlags ? -score : score;
}

std::string_view to_string(Statistic s) noexcept {
    switch (s) {
    case Statistic::MeanOffdiag: return "mean_offdiag";
    case Statistic::Frobenius: return "frobenius";
    case Statistic::GtAlignment: return "gt_alignment";
    }
    return "unknown";
}

Statistic parse_statistic(std::string_view name) {
    for (Statistic s : {Statistic::MeanOffdiag, Statistic::Frobenius, Statistic::GtAlignment}) {
        if (to_string(s) == name) return s;
    }
    throw Error(ErrorCode::InvalidInput, "unknown statistic '" + std::string(name) +
                                             "' (valid: mean_offdiag, frobenius, gt_alignment)");
}

double score_record(Scheme scheme, const ScoringInput& input, const Scorers& scorers) {
    if (input.samples.empty()) throw Error(ErrorCode::EmptySample, "record has no samples");

    switch (scheme) {
    case Scheme::CheckEmbed: {
        Embedder& embedder = require(scorers.embedder, "an embedder", scheme);
        std::vector<Embedding> vectors;
        vectors.reserve(input.samples.size());
        for (const auto& s : input.samples) vectors.push_back(embedder.embed(s));
        std::optional<Embedding> gt;
        if (scorers.statistic == Statistic::GtAlignment) gt = embedder.embed(input.response);
        const auto matrix = build_matrix(vectors, gt, scorers.measure);
        const auto summary = summarize(matrix, ConfidenceThresholds{});
        switch (scorers.statistic) {
        case Statistic::MeanOffdiag: return summary.mean_offdiag;
        case Statistic::Frobenius: return summary.frobenius_normalized;
        case Statistic::GtAlignment: return *summary.gt_alignment;
        }
        return summary.mean_offdiag;
    }
    case Scheme::BertScore: {
        Embedder& embedder = require(scorers.token_embedder, "a token embedder", scheme);
        const auto candidate = baselines::encode_tokens(input.response, embedder, scorers.idf);
        std::vector<double> f1s;
        for (const auto& s : input.samples) {
            f1s.push_back(baselines::bertscore_greedy(
                              candidate, baselines::encode_tokens(s, embedder, scorers.idf))
                              .f1);
        }
        return mean(f1s);
    }
    case Scheme::SelfCheckBert: {
        Embedder& embedder = require(scorers.token_embedder, "a token embedder", scheme);
        std::vector<baselines::TokenEmbeddingSeq> reply;
        for (const auto& s : input.sentences) reply.push_back(baselines::encode_tokens(s, embedder, scorers.idf));
        std::vector<std::vector<baselines::TokenEmbeddingSeq>> docs;
        for (const auto& sample : input.samples) {
            auto& doc = docs.emplace_back();
            for (const auto& s : baselines::split_sentences(sample)) {
                doc.push_back(baselines::encode_tokens(s, embedder, scorers.idf));
            }
        }
        return mean(baselines::selfcheck_bert(reply, docs));
    }
    case Scheme::SelfCheckNli: {
        NliScorer& nli = require(scorers.nli, "an nli provider", scheme);
        return mean(baselines::selfcheck_nli(input.sentences, input.samples, nli));
    }
    case Scheme::LlmJudge: {
        TextGenerator& judge = require(scorers.judge, "a judge generator", scheme);
        std::map<std::string, std::string> slots;
        switch (input.judge_task) {
        case baselines::JudgeTask::WikiBio:
            slots["biography"] = std::string(input.response);
            break;
        case baselines::JudgeTask::RagTruth:
            if (!input.prompt) {
                throw Error(ErrorCode::InvalidInput, "ragtruth judge needs the record's prompt");
            }
            slots["generated_answer"] = std::string(input.response);
            slots["original_prompt"] = std::string(*input.prompt);
            break;
        default:
            throw Error(ErrorCode::InvalidInput, "judge task " +
                                                     std::string(baselines::to_string(input.judge_task)) +
                                                     " is not a dataset task");
        }
        return baselines::llm_judge(input.judge_task, slots, judge, scorers.judge_settings).score;
    }
    }
    throw Error(ErrorCode::InvalidInput, "unhandled scheme");
}

PassageEvaluation evaluate_passages(std::span<const LabeledPassage> dataset, Scheme scheme,
                                    const Scorers& scorers, std::optional<std::size_t> k) {
    PassageEvaluation e;
    e.scheme = scheme;
    std::size_t min_samples = std::numeric_limits<std::size_t>::max();
    for (const auto& p : dataset) {
        p.validate();
        min_samples = std::min(min_samples, p.samples.size());
        e.ids.push_back(p.id);
        e.gold.push_back(passage_score(p.labels));
    }
    e.k = k.value_or(dataset.empty() ? 0 : min_samples);
    if (k && !dataset.empty() && min_samples < *k) {
        throw Error(ErrorCode::InsufficientSamples, "a record has " + std::to_string(min_samples) +
                                                        " samples, k = " + std::to_string(*k));
    }

    const auto id_of = [&](std::size_t i) { return dataset[i].id; };
    const auto raw = score_all(dataset.size(), scorers.threads, id_of, [&](std::size_t i) {
        const auto& p = dataset[i];
        const std::string response = join_sentences(p.sentences);
        const std::size_t take = k ? *k : p.samples.size();
        ScoringInput input{response, p.sentences, std::span(p.samples).first(take), std::nullopt,
                           baselines::JudgeTask::WikiBio};
        return score_record(scheme, input, scorers);
    });
    for (double r : raw) e.predicted.push_back(oriented(scheme, r));
    e.correlation = correlate(e.predicted, e.gold);
    return e;
}

std::vector<SampleSweepRow> sample_sweep(std::span<const LabeledPassage> dataset,
                                         std::span<const std::size_t> k_values, Scheme scheme,
                                         const Scorers& scorers) {
    if (k_values.empty()) throw Error(ErrorCode::InvalidInput, "no k values to sweep");
    const std::size_t k_max = *std::max_element(k_values.begin(), k_values.end());
    for (const auto& p : dataset) {
        if (p.samples.size() < k_max) {
            throw Error(ErrorCode::InsufficientSamples, "record " + p.id + " has " +
                                                            std::to_string(p.samples.size()) +
                                                            " samples, sweep needs " + std::to_string(k_max));
        }
    }
    std::vector<SampleSweepRow> rows;
    for (std::size_t k : k_values) {
        rows.push_back({k, evaluate_passages(dataset, scheme, scorers, k).correlation});
    }
    return rows;
}

BinaryEvaluation evaluate_binary(std::span<const BinaryRecord> dataset, Scheme scheme,
                                 const Scorers& scorers) {
    if (dataset.empty()) throw Error(ErrorCode::InvalidInput, "dataset is empty");
    BinaryEvaluation e;
    e.scheme = scheme;
    e.polarity = polarity_of(scheme);
    for (const auto& r : dataset) {
        e.ids.push_back(r.id);
        e.labels.push_back(r.label);
    }
    const auto id_of = [&](std::size_t i) { return dataset[i].id; };
    e.scores = score_all(dataset.size(), scorers.threads, id_of, [&](std::size_t i) {
        const auto& r = dataset[i];
        const auto sentences = baselines::split_sentences(r.response);
        std::optional<std::string_view> prompt;
        if (r.prompt) prompt = *r.prompt;
        ScoringInput input{r.response, sentences, r.samples, prompt, baselines::JudgeTask::RagTruth};
        return score_record(scheme, input, scorers);
    });
    const auto grid = default_grid(e.scores);
    e.sweep = threshold_sweep(e.scores, e.labels, e.polarity, grid);
    e.best = pr_f1(e.scores, e.labels, e.sweep.best_threshold, e.polarity);
    return e;
}

std::string report_json(const PassageEvaluation& e) {
    nlohmann::ordered_json j;
    j["protocol"] = "passage_correlation";
    j["scheme"] = to_string(e.scheme);
    j["k"] = e.k;
    j["records"] = e.ids.size();
    j["correlation"] = correlation_json(e.correlation);
    auto& rows = j["per_record"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < e.ids.size(); ++i) {
        rows.push_back({{"id", e.ids[i]}, {"predicted", e.predicted[i]}, {"gold", e.gold[i]}});
    }
    return j.dump(2) + "\n";
}

std::string report_json(const BinaryEvaluation& e) {
    nlohmann::ordered_json j;
    j["protocol"] = "binary_detection";
    j["scheme"] = to_string(e.scheme);
    j["polarity"] = to_string(e.polarity);
    j["records"] = e.ids.size();
    // The threshold is chosen on the evaluated data itself.
    j["threshold_selection"] = "sweep_on_evaluation_data";
    j["best_threshold"] = e.sweep.best_threshold;
    j["best"] = prf_json(e.best);
    auto& curve = j["curve"] = nlohmann::ordered_json::array();
    for (const auto& p : e.sweep.curve) {
        auto row = prf_json(p.metrics);
        row["threshold"] = p.threshold;
        curve.push_back(std::move(row));
    }
    auto& rows = j["per_record"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < e.ids.size(); ++i) {
        rows.push_back({{"id", e.ids[i]}, {"score", e.scores[i]}, {"label", to_string(e.labels[i])}});
    }
    return j.dump(2) + "\n";
}

std::string report_table(const PassageEvaluation& e) {
    std::string out;
    out += "scheme        k   records  PE      SP\n";
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-13s %-3zu %-8zu %-7.1f %.1f\n", std::string(to_string(e.scheme)).c_str(),
                  e.k, e.ids.size(), e.correlation.pearson, e.correlation.spearman);
    out += buf;
    return out;
}

std::string report_table(const BinaryEvaluation& e) {
    std::string out;
    out += "scheme          records  threshold     P       R       F1\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-15s %-8zu %-13s %-7.4f %-7.4f %.4f\n",
                  std::string(to_string(e.scheme)).c_str(), e.ids.size(),
                  fmt("%.6g", e.sweep.best_threshold).c_str(), e.best.precision, e.best.recall, e.best.f1);
    out += buf;
    out += "(threshold swept on the evaluated records)\n";
    return out;
}

} // namespace checkembed::eval
