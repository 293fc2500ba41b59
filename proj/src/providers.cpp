#include "checkembed/providers.hpp"

#include "checkembed/error.hpp"
#include "checkembed/parallel.hpp"
#include "http_json.hpp"

#include <array>
#include <cmath>

namespace checkembed {

void GenerationRequest::validate() const {
    if (k < 1) throw Error(ErrorCode::InvalidInput, "k must be >= 1");
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw Error(ErrorCode::InvalidInput, "temperature must be >= 0");
    }
    if (max_tokens < 1) throw Error(ErrorCode::InvalidInput, "max_tokens must be >= 1");
}

void ProviderConfig::validate() const {
    if (!(timeout_s > 0.0)) throw Error(ErrorCode::ConfigError, "timeout must be > 0");
    if (max_retries < 0) throw Error(ErrorCode::ConfigError, "max_retries must be >= 0");
    if (max_concurrency < 1) throw Error(ErrorCode::ConfigError, "max_concurrency must be >= 1");
    if (!(backoff_initial_s >= 0.0)) throw Error(ErrorCode::ConfigError, "backoff must be >= 0");
}

std::vector<std::string> generate_samples(TextGenerator& generator, const GenerationRequest& request,
                                          std::size_t max_concurrency) {
    request.validate();
    std::vector<std::string> texts(request.k);
    auto failures = detail::run_indexed(request.k, max_concurrency, [&](std::size_t i) {
        texts[i] = generator.complete(request, i);
    });
    for (std::size_t i = 0; i < failures.size(); ++i) {
        if (!failures[i]) continue;
        try {
            std::rethrow_exception(failures[i]);
        } catch (const Error& e) {
            throw e.with_context("sample " + std::to_string(i));
        }
    }
    return texts;
}

namespace {

constexpr std::array kPresets{
    EmbeddingPreset{"gpt-text-embedding-large", "text-embedding-3-large", 3072},
    EmbeddingPreset{"sfr-embedding-mistral", "Salesforce/SFR-Embedding-Mistral", 4096},
    EmbeddingPreset{"e5-mistral-7b-instruct", "intfloat/e5-mistral-7b-instruct", 4096},
    EmbeddingPreset{"gte-qwen1.5-7b-instruct", "Alibaba-NLP/gte-Qwen1.5-7B-instruct", 4096},
    EmbeddingPreset{"stella-en-1.5b-v5", "NovaSearch/stella_en_1.5B_v5", 4096},
    EmbeddingPreset{"stella-en-400m-v5", "NovaSearch/stella_en_400M_v5", 4096},
    EmbeddingPreset{"deberta-xlarge-mnli", "microsoft/deberta-xlarge-mnli", 1024},
    EmbeddingPreset{"roberta-large", "roberta-large", 1024},
    EmbeddingPreset{"clip-vit-large", "openai/clip-vit-large-patch14", 768},
};

} // namespace

std::span<const EmbeddingPreset> embedding_presets() noexcept { return kPresets; }

std::optional<EmbeddingPreset> find_preset(std::string_view model_id) noexcept {
    for (const auto& p : kPresets) {
        if (p.name == model_id) return p;
    }
    return std::nullopt;
}

HttpChatClient::HttpChatClient(ProviderConfig config) : config_(std::move(config)) {
    config_.validate();
}

std::string HttpChatClient::complete(const GenerationRequest& request, std::size_t /*sample_index*/) {
    nlohmann::json body{
        {"model", request.model_id},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
        {"n", 1},
    };
    if (request.top_p) body["top_p"] = *request.top_p;
    if (request.top_k) body["top_k"] = *request.top_k;

    ++requests_;
    const auto reply = detail::post_json(config_, "/chat/completions", body);
    try {
        const auto& content = reply.at("choices").at(0).at("message").at("content");
        return content.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedResponse,
                    std::string("missing choices[0].message.content: ") + e.what());
    }
}

HttpEmbeddingClient::HttpEmbeddingClient(ProviderConfig config, std::string model_id,
                                         std::optional<std::size_t> expected_dim)
    : config_(std::move(config)), model_id_(std::move(model_id)), wire_model_(model_id_),
      expected_dim_(expected_dim) {
    config_.validate();
    if (const auto preset = find_preset(model_id_)) {
        wire_model_ = std::string(preset->wire_model);
        if (!expected_dim_) expected_dim_ = preset->dim;
    }
}

Embedding HttpEmbeddingClient::embed(std::string_view text) {
    if (text.empty()) throw Error(ErrorCode::EmptyText, "cannot embed empty text");
    const nlohmann::json body{{"model", wire_model_}, {"input", text}};

    ++requests_;
    const auto reply = detail::post_json(config_, "/embeddings", body);
    std::vector<double> values;
    try {
        values = reply.at("data").at(0).at("embedding").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedResponse,
                    std::string("missing data[0].embedding: ") + e.what());
    }
    if (expected_dim_ && values.size() != *expected_dim_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "model " + model_id_ + " returned " + std::to_string(values.size()) +
                        " values, expected " + std::to_string(*expected_dim_));
    }
    try {
        return Embedding(std::move(values), model_id_);
    } catch (const Error& e) {
        throw Error(ErrorCode::MalformedResponse, e.detail());
    }
}

Embedding embed_text(std::string_view text, const ProviderConfig& config, const std::string& model_id) {
    HttpEmbeddingClient client(config, model_id);
    return client.embed(text);
}

HttpNliScorer::HttpNliScorer(ProviderConfig config) : config_(std::move(config)) {
    config_.validate();
}

double HttpNliScorer::contradiction(std::string_view premise, std::string_view hypothesis) {
    const nlohmann::json body{{"premise", premise}, {"hypothesis", hypothesis}};
    const auto reply = detail::post_json(config_, "", body);
    try {
        return reply.at("contradiction").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedResponse, std::string("missing contradiction: ") + e.what());
    }
}

CannedGenerator::CannedGenerator(std::vector<std::string> replies) : replies_(std::move(replies)) {
    if (replies_.empty()) throw Error(ErrorCode::ConfigError, "canned generator needs replies");
}

std::string CannedGenerator::complete(const GenerationRequest& /*request*/, std::size_t sample_index) {
    ++calls_;
    return replies_[sample_index % replies_.size()];
}

} // namespace checkembed
