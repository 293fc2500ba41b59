#include "checkembed/pipeline.hpp"

#include "checkembed/error.hpp"
#include "checkembed/hashing.hpp"
#include "checkembed/parallel.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace checkembed {

namespace fs = std::filesystem;

namespace {

std::string safe_dir_name(std::string_view model_id) {
    std::string out(model_id);
    for (char& c : out) {
        if (c == '/' || c == '\\' || c == ':' || c == ' ') c = '_';
    }
    return out.empty() ? "default" : out;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_indices(const std::vector<std::size_t>& indices) {
    std::string out = "[";
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(indices[i]);
    }
    return out + "]";
}

/// Rethrows per-index failures of one stage. All indices failing propagates
/// the provider error; a subset failing is a PartialFailure.
void raise_stage_failures(std::string_view stage, const std::vector<std::exception_ptr>& failures) {
    std::vector<std::size_t> failed;
    std::exception_ptr first;
    for (std::size_t i = 0; i < failures.size(); ++i) {
        if (!failures[i]) continue;
        failed.push_back(i);
        if (!first) first = failures[i];
    }
    if (failed.empty()) return;
    std::string first_detail;
    ErrorCode first_code = ErrorCode::TransportError;
    try {
        std::rethrow_exception(first);
    } catch (const Error& e) {
        first_detail = e.detail();
        first_code = e.code();
    } catch (const std::exception& e) {
        first_detail = e.what();
    }
    const std::string where = std::string(stage) + ": index " + std::to_string(failed.front());
    if (failed.size() == failures.size()) {
        throw Error(first_code, where + ": " + first_detail);
    }
    throw Error(ErrorCode::PartialFailure, std::string(stage) + ": indices " +
                                               format_indices(failed) + " failed (first: " +
                                               std::string(to_string(first_code)) + ": " + first_detail + ")");
}

} // namespace

SampleCache::SampleCache(fs::path root) : root_(std::move(root)) {}

fs::path SampleCache::prompt_dir(std::string_view hash) const { return root_ / std::string(hash); }

fs::path SampleCache::sample_path(std::string_view hash, std::size_t index) const {
    return prompt_dir(hash) / "samples" / (std::to_string(index) + ".txt");
}

fs::path SampleCache::embedding_path(std::string_view hash, std::string_view model_id,
                                     std::string_view name) const {
    return prompt_dir(hash) / "embeddings" / safe_dir_name(model_id) / (std::string(name) + ".json");
}

fs::path SampleCache::report_path(std::string_view hash) const {
    return prompt_dir(hash) / "report.json";
}

std::optional<std::string> SampleCache::load_sample(std::string_view hash, std::size_t index) const {
    const auto path = sample_path(hash, index);
    if (!fs::exists(path)) return std::nullopt;
    return read_file(path);
}

void SampleCache::store_sample(std::string_view hash, std::size_t index, std::string_view text) const {
    atomic_write(sample_path(hash, index), text);
}

std::optional<Embedding> SampleCache::load_embedding(std::string_view hash, std::string_view model_id,
                                                     std::string_view name) const {
    const auto path = embedding_path(hash, model_id, name);
    if (!fs::exists(path)) return std::nullopt;
    try {
        auto values = nlohmann::json::parse(read_file(path)).get<std::vector<double>>();
        return Embedding(std::move(values), std::string(model_id));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

void SampleCache::store_embedding(std::string_view hash, std::string_view name,
                                  const Embedding& embedding) const {
    const nlohmann::json values(std::vector<double>(embedding.values().begin(), embedding.values().end()));
    atomic_write(embedding_path(hash, embedding.model_id(), name), values.dump());
}

std::optional<std::string> SampleCache::load_stamp(const fs::path& dir) const {
    const auto path = dir / "stamp.txt";
    if (!fs::exists(path)) return std::nullopt;
    return read_file(path);
}

void SampleCache::store_stamp(const fs::path& dir, std::string_view stamp) const {
    atomic_write(dir / "stamp.txt", stamp);
}

std::string prompt_hash(std::string_view prompt, std::string_view generation_model, double temperature) {
    char temp[32];
    std::snprintf(temp, sizeof temp, "%.17g", temperature);
    std::string key;
    key.reserve(prompt.size() + generation_model.size() + 32);
    key.append(prompt).push_back('\0');
    key.append(generation_model).push_back('\0');
    key.append(temp);
    return sha256_hex(key).substr(0, 16);
}

VerificationReport verify(std::string_view prompt, const std::optional<std::string>& gt,
                          const VerifySettings& settings, TextGenerator& generator,
                          Embedder& embedder, const SampleCache* cache) {
    SampleSet unused;
    return verify(prompt, gt, settings, generator, embedder, cache, unused);
}

VerificationReport verify(std::string_view prompt, const std::optional<std::string>& gt,
                          const VerifySettings& settings, TextGenerator& generator,
                          Embedder& embedder, const SampleCache* cache, SampleSet& out) {
    if (settings.k < 2) throw Error(ErrorCode::InvalidInput, "verify needs k >= 2");
    settings.thresholds.validate();
    const auto clock = settings.clock ? settings.clock : std::function<std::string()>(utc_now);

    GenerationRequest request;
    request.prompt = std::string(prompt);
    request.k = settings.k;
    request.temperature = settings.temperature;
    request.max_tokens = settings.max_tokens;
    request.model_id = settings.generation_model;
    request.top_p = settings.top_p;
    request.top_k = settings.top_k;
    request.validate();

    const std::string hash = prompt_hash(prompt, settings.generation_model, settings.temperature);
    const std::size_t k = settings.k;

    // generate
    std::vector<std::string> replies(k);
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < k; ++i) {
        auto cached = cache ? cache->load_sample(hash, i) : std::nullopt;
        if (cached) {
            replies[i] = std::move(*cached);
        } else {
            missing.push_back(i);
        }
    }
    std::string samples_stamp;
    const fs::path samples_dir = cache ? cache->prompt_dir(hash) / "samples" : fs::path{};
    if (!missing.empty()) {
        samples_stamp = clock();
        auto failures = detail::run_indexed(missing.size(), settings.max_concurrency, [&](std::size_t m) {
            const std::size_t i = missing[m];
            replies[i] = generator.complete(request, i);
            if (cache) cache->store_sample(hash, i, replies[i]);
        });
        std::vector<std::exception_ptr> by_index(k);
        for (std::size_t m = 0; m < missing.size(); ++m) by_index[missing[m]] = failures[m];
        // cached indices count as successes
        raise_stage_failures("generate", by_index);
        if (cache) cache->store_stamp(samples_dir, samples_stamp);
    } else {
        samples_stamp = cache->load_stamp(samples_dir).value_or("");
    }

    // embed
    const std::string model = embedder.model_id();
    std::vector<std::optional<Embedding>> embedded(k);
    std::optional<Embedding> gt_embedding;
    const std::string gt_name = gt ? "gt-" + sha256_hex(*gt).substr(0, 16) : std::string{};
    std::vector<std::size_t> to_embed;
    for (std::size_t i = 0; i < k; ++i) {
        embedded[i] = cache ? cache->load_embedding(hash, model, std::to_string(i)) : std::nullopt;
        if (!embedded[i]) to_embed.push_back(i);
    }
    if (gt) {
        gt_embedding = cache ? cache->load_embedding(hash, model, gt_name) : std::nullopt;
    }
    const bool embed_gt = gt && !gt_embedding;
    std::string embed_stamp;
    const fs::path embed_dir =
        cache ? cache->embedding_path(hash, model, "x").parent_path() : fs::path{};
    if (!to_embed.empty() || embed_gt) {
        embed_stamp = clock();
        const std::size_t jobs = to_embed.size() + (embed_gt ? 1 : 0);
        auto failures = detail::run_indexed(jobs, settings.max_concurrency, [&](std::size_t m) {
            if (m == to_embed.size()) {
                auto e = embedder.embed(*gt);
                if (cache) cache->store_embedding(hash, gt_name, e);
                gt_embedding = std::move(e);
                return;
            }
            const std::size_t i = to_embed[m];
            auto e = embedder.embed(replies[i]);
            if (cache) cache->store_embedding(hash, std::to_string(i), e);
            embedded[i] = std::move(e);
        });
        if (embed_gt && failures.back()) {
            try {
                std::rethrow_exception(failures.back());
            } catch (const Error& e) {
                throw e.with_context("embed: ground truth");
            }
        }
        std::vector<std::exception_ptr> by_index(k);
        for (std::size_t m = 0; m < to_embed.size(); ++m) by_index[to_embed[m]] = failures[m];
        raise_stage_failures("embed", by_index);
        if (cache) cache->store_stamp(embed_dir, embed_stamp);
    } else {
        embed_stamp = cache->load_stamp(embed_dir).value_or("");
    }

    std::vector<Embedding> embeddings;
    embeddings.reserve(k);
    for (auto& e : embedded) embeddings.push_back(std::move(*e));

    // score
    auto matrix = build_matrix(embeddings, gt_embedding, settings.measure,
                               BuildOptions{settings.max_concurrency});
    auto summary = summarize(matrix, settings.thresholds);

    VerificationReport report{
        hash,
        k,
        settings.measure,
        settings.thresholds,
        summary,
        std::move(matrix),
        {settings.generation_model, model, settings.temperature, samples_stamp, embed_stamp},
    };
    if (cache) atomic_write(cache->report_path(hash), report_to_json(report));

    out.prompt_id = hash;
    out.prompt = std::string(prompt);
    out.replies = std::move(replies);
    out.embeddings = std::move(embeddings);
    out.gt_text = gt;
    out.gt_embedding = std::move(gt_embedding);
    return report;
}

} // namespace checkembed
