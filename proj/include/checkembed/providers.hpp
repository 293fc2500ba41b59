#pragma once

#include "checkembed/vectors.hpp"

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace checkembed {

struct GenerationRequest {
    std::string prompt;
    std::size_t k = 1;
    double temperature = 1.0;
    std::size_t max_tokens = 1024;
    std::string model_id;
    // Passed through to the endpoint only when set.
    std::optional<double> top_p;
    std::optional<int> top_k;

    void validate() const;
};

struct ProviderConfig {
    std::string base_url;
    /// Name of the environment variable holding the API key. Empty means no
    /// Authorization header is sent.
    std::string api_key_env;
    double timeout_s = 60.0;
    int max_retries = 3;
    std::size_t max_concurrency = 4;
    double backoff_initial_s = 1.0;

    void validate() const;
};

/// One independent completion per call. Implementations must be safe to call
/// from several threads at once.
class TextGenerator {
public:
    virtual ~TextGenerator() = default;
    virtual std::string complete(const GenerationRequest& request, std::size_t sample_index) = 0;
};

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual Embedding embed(std::string_view text) = 0;
    virtual std::string model_id() const = 0;
};

/// Probability that `premise` contradicts `hypothesis`.
class NliScorer {
public:
    virtual ~NliScorer() = default;
    virtual double contradiction(std::string_view premise, std::string_view hypothesis) = 0;
};

/// k texts ordered by sample index, each from its own completion call with up
/// to `max_concurrency` calls in flight. The lowest failing index is rethrown.
std::vector<std::string> generate_samples(TextGenerator& generator, const GenerationRequest& request,
                                          std::size_t max_concurrency);

struct EmbeddingPreset {
    std::string_view name;
    std::string_view wire_model;
    std::size_t dim;
};

/// Known embedding models and their default output lengths.
std::span<const EmbeddingPreset> embedding_presets() noexcept;
std::optional<EmbeddingPreset> find_preset(std::string_view model_id) noexcept;

/// Chat-completions endpoint: POST {base_url}/chat/completions, n = 1.
class HttpChatClient final : public TextGenerator {
public:
    explicit HttpChatClient(ProviderConfig config);
    std::string complete(const GenerationRequest& request, std::size_t sample_index) override;
    std::size_t request_count() const noexcept { return requests_.load(); }

private:
    ProviderConfig config_;
    std::atomic<std::size_t> requests_{0};
};

/// Embeddings endpoint: POST {base_url}/embeddings with {model, input}.
/// Preset model ids map to their wire name and have their dim enforced.
class HttpEmbeddingClient final : public Embedder {
public:
    HttpEmbeddingClient(ProviderConfig config, std::string model_id,
                        std::optional<std::size_t> expected_dim = std::nullopt);
    Embedding embed(std::string_view text) override;
    std::string model_id() const override { return model_id_; }
    std::size_t request_count() const noexcept { return requests_.load(); }

private:
    ProviderConfig config_;
    std::string model_id_;
    std::string wire_model_;
    std::optional<std::size_t> expected_dim_;
    std::atomic<std::size_t> requests_{0};
};

Embedding embed_text(std::string_view text, const ProviderConfig& config, const std::string& model_id);

/// NLI endpoint: POST {premise, hypothesis} to base_url, reply {contradiction}.
class HttpNliScorer final : public NliScorer {
public:
    explicit HttpNliScorer(ProviderConfig config);
    double contradiction(std::string_view premise, std::string_view hypothesis) override;

private:
    ProviderConfig config_;
};

/// Offline generator that replays a fixed reply list, cycling by sample index.
class CannedGenerator final : public TextGenerator {
public:
    explicit CannedGenerator(std::vector<std::string> replies);
    std::string complete(const GenerationRequest& request, std::size_t sample_index) override;
    std::size_t call_count() const noexcept { return calls_.load(); }

private:
    std::vector<std::string> replies_;
    std::atomic<std::size_t> calls_{0};
};

/// Lowercased alphanumeric runs of `text`.
std::vector<std::string> bag_tokens(std::string_view text);

/// Deterministic offline embedding: signed feature hashing of lowercase
/// alphanumeric tokens into `dim` buckets, then L2 normalisation.
Embedding mock_embed(std::string_view text, std::size_t dim, std::uint64_t seed);

class MockEmbedder final : public Embedder {
public:
    MockEmbedder(std::size_t dim, std::uint64_t seed);
    Embedding embed(std::string_view text) override;
    std::string model_id() const override { return model_id_; }
    std::size_t call_count() const noexcept { return calls_.load(); }

private:
    std::size_t dim_;
    std::uint64_t seed_;
    std::string model_id_;
    std::atomic<std::size_t> calls_{0};
};

} // namespace checkembed
