#pragma once

#include "checkembed/providers.hpp"
#include "checkembed/scorematrix.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace checkembed {

struct SampleSet {
    std::string prompt_id;
    std::string prompt;
    std::vector<std::string> replies;
    std::vector<Embedding> embeddings;
    std::optional<std::string> gt_text;
    std::optional<Embedding> gt_embedding;
};

struct Provenance {
    std::string generation_model;
    std::string embedding_model;
    double temperature = 1.0;
    std::string samples_generated_at;
    std::string embeddings_computed_at;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct VerificationReport {
    std::string prompt_id;
    std::size_t k = 0;
    Measure measure = Measure::Cosine;
    ConfidenceThresholds thresholds;
    MatrixSummary summary;
    SimilarityMatrix matrix;
    Provenance provenance;
};

/// Pretty-printed JSON, stable field order.
std::string report_to_json(const VerificationReport& report);
/// Parses report_to_json output; the matrix is re-validated.
VerificationReport report_from_json(std::string_view text);

/// Writes via a temporary file in the same directory, then renames.
void atomic_write(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// On-disk stage cache:
///   <root>/<prompt_hash>/samples/<i>.txt
///   <root>/<prompt_hash>/embeddings/<model_id>/<i>.json
///   <root>/<prompt_hash>/report.json
class SampleCache {
public:
    explicit SampleCache(std::filesystem::path root);

    const std::filesystem::path& root() const noexcept { return root_; }
    std::filesystem::path prompt_dir(std::string_view prompt_hash) const;
    std::filesystem::path sample_path(std::string_view prompt_hash, std::size_t index) const;
    std::filesystem::path embedding_path(std::string_view prompt_hash, std::string_view model_id,
                                         std::string_view name) const;
    std::filesystem::path report_path(std::string_view prompt_hash) const;

    std::optional<std::string> load_sample(std::string_view prompt_hash, std::size_t index) const;
    void store_sample(std::string_view prompt_hash, std::size_t index, std::string_view text) const;

    std::optional<Embedding> load_embedding(std::string_view prompt_hash, std::string_view model_id,
                                            std::string_view name) const;
    void store_embedding(std::string_view prompt_hash, std::string_view name,
                         const Embedding& embedding) const;

    /// Small key/value metadata (timestamps) kept next to each stage.
    std::optional<std::string> load_stamp(const std::filesystem::path& dir) const;
    void store_stamp(const std::filesystem::path& dir, std::string_view stamp) const;

private:
    std::filesystem::path root_;
};

struct VerifySettings {
    std::size_t k = 10;
    std::string generation_model;
    double temperature = 1.0;
    std::size_t max_tokens = 1024;
    std::optional<double> top_p;
    std::optional<int> top_k;
    Measure measure = Measure::Cosine;
    ConfidenceThresholds thresholds;
    std::size_t max_concurrency = 4;
    /// Timestamp source for provenance; defaults to UTC wall clock.
    std::function<std::string()> clock;
};

/// Cache key of a prompt under a generation setup.
std::string prompt_hash(std::string_view prompt, std::string_view generation_model, double temperature);

/// generate -> embed -> build_matrix -> summarize. With a cache, every
/// completed stage artifact is persisted and reused on later runs.
VerificationReport verify(std::string_view prompt, const std::optional<std::string>& gt,
                          const VerifySettings& settings, TextGenerator& generator,
                          Embedder& embedder, const SampleCache* cache = nullptr);

/// Same as verify, also returning the replies and embeddings used.
VerificationReport verify(std::string_view prompt, const std::optional<std::string>& gt,
                          const VerifySettings& settings, TextGenerator& generator,
                          Embedder& embedder, const SampleCache* cache, SampleSet& samples_out);

/// Greedy whitespace-token packing into chunks of at most max_tokens. A chunk
/// ends after the last sentence-final token in its window when there is one.
/// Consecutive chunks share `overlap_tokens` tokens.
std::vector<std::string> chunk_document(std::string_view document, std::size_t max_tokens,
                                        std::size_t overlap_tokens = 0);

/// JSON Lines, one array of numbers per line. Blank lines are skipped.
std::vector<Embedding> ingest_vectors(const std::filesystem::path& path, std::string model_id = {});
void write_vectors(const std::filesystem::path& path, std::span<const Embedding> embeddings);

} // namespace checkembed
