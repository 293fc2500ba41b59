#include "checkembed/config.hpp"

#include "checkembed/error.hpp"
#include "checkembed/pipeline.hpp"

#include "json.hpp"

#include <set>

namespace checkembed::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) fail(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename T>
void read(const json& j, const char* key, std::optional<T>& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

ProviderSection parse_section(const json& j, const std::string& where,
                              const std::set<std::string>& types) {
    if (!j.is_object()) fail(where + " must be an object");
    reject_unknown(j,
                   {"type", "base_url", "api_key_env", "timeout_s", "max_retries", "max_concurrency",
                    "backoff_initial_s", "model", "temperature", "max_tokens", "top_p", "top_k",
                    "replies", "dim", "seed", "contradiction"},
                   where);
    ProviderSection s;
    s.type = j.value("type", std::string{});
    if (!types.count(s.type)) {
        std::string valid;
        for (const auto& t : types) valid += (valid.empty() ? "" : "|") + t;
        fail(where + ".type must be " + valid + ", got '" + s.type + "'");
    }
    read(j, "base_url", s.http.base_url);
    read(j, "api_key_env", s.http.api_key_env);
    read(j, "timeout_s", s.http.timeout_s);
    read(j, "max_retries", s.http.max_retries);
    read(j, "max_concurrency", s.http.max_concurrency);
    read(j, "backoff_initial_s", s.http.backoff_initial_s);
    read(j, "model", s.model);
    read(j, "temperature", s.temperature);
    read(j, "max_tokens", s.max_tokens);
    read(j, "top_p", s.top_p);
    read(j, "top_k", s.top_k);
    read(j, "replies", s.replies);
    read(j, "dim", s.dim);
    read(j, "seed", s.seed);
    read(j, "contradiction", s.contradiction);
    if (s.type == "http") {
        try {
            s.http.validate();
        } catch (const Error& e) {
            fail(where + ": " + e.detail());
        }
    }
    return s;
}

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

class ConstantNli final : public NliScorer {
public:
    explicit ConstantNli(double value) : value_(value) {}
    double contradiction(std::string_view, std::string_view) override { return value_; }

private:
    double value_;
};

} // namespace

void RunConfig::validate() const {
    if (k < 2) fail("k must be >= 2");
    if (max_concurrency < 1) fail("max_concurrency must be >= 1");
    try {
        thresholds.validate();
    } catch (const Error& e) {
        fail("thresholds: " + e.detail());
    }
    if (output_dir.empty()) fail("output_dir must not be empty");
}

fs::path RunConfig::effective_cache_dir() const {
    return cache_dir.empty() ? output_dir / "cache" : cache_dir;
}

RunConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
    RunConfig cfg;
    try {
        const json j = json::parse(json_text);
        if (!j.is_object()) fail("config must be a JSON object");
        reject_unknown(j,
                       {"generation", "embedding", "token_embedding", "nli", "judge", "k", "measure",
                        "thresholds", "cache_dir", "output_dir", "max_concurrency", "statistic"},
                       "config");
        if (!j.contains("generation")) fail("config: missing 'generation'");
        if (!j.contains("embedding")) fail("config: missing 'embedding'");
        cfg.generation = parse_section(j.at("generation"), "generation", {"http", "stub"});
        cfg.embedding = parse_section(j.at("embedding"), "embedding", {"http", "mock"});
        if (j.contains("token_embedding")) {
            cfg.token_embedding = parse_section(j.at("token_embedding"), "token_embedding", {"http", "mock"});
        }
        if (j.contains("nli")) cfg.nli = parse_section(j.at("nli"), "nli", {"http", "stub"});
        if (j.contains("judge")) cfg.judge = parse_section(j.at("judge"), "judge", {"http", "stub"});
        read(j, "k", cfg.k);
        if (j.contains("measure")) cfg.measure = parse_measure(j.at("measure").get<std::string>());
        if (j.contains("thresholds")) {
            const auto& t = j.at("thresholds");
            reject_unknown(t, {"mean_min", "std_max"}, "thresholds");
            read(t, "mean_min", cfg.thresholds.mean_min);
            read(t, "std_max", cfg.thresholds.std_max);
        }
        if (j.contains("cache_dir")) cfg.cache_dir = resolve(base_dir, j.at("cache_dir").get<std::string>());
        cfg.output_dir = resolve(base_dir, j.value("output_dir", std::string("out")));
        read(j, "max_concurrency", cfg.max_concurrency);
        if (j.contains("statistic")) cfg.statistic = eval::parse_statistic(j.at("statistic").get<std::string>());
    } catch (const json::exception& e) {
        fail(e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        fail(e.detail());
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const fs::path& path) {
    if (!fs::is_regular_file(path)) throw Error(ErrorCode::ConfigError, "config not found: " + path.string());
    return parse_config(read_file(path), path.parent_path());
}

std::unique_ptr<TextGenerator> make_generator(const ProviderSection& s) {
    if (s.type == "stub") {
        if (s.replies.empty()) fail("stub generation needs a non-empty 'replies' list");
        return std::make_unique<CannedGenerator>(s.replies);
    }
    return std::make_unique<HttpChatClient>(s.http);
}

std::unique_ptr<Embedder> make_embedder(const ProviderSection& s) {
    if (s.type == "mock") return std::make_unique<MockEmbedder>(s.dim.value_or(4096), s.seed);
    if (s.model.empty()) fail("http embedding needs 'model'");
    return std::make_unique<HttpEmbeddingClient>(s.http, s.model, s.dim);
}

std::unique_ptr<NliScorer> make_nli(const ProviderSection& s) {
    if (s.type == "stub") {
        if (!(s.contradiction >= 0.0 && s.contradiction <= 1.0)) fail("stub nli contradiction must be in [0, 1]");
        return std::make_unique<ConstantNli>(s.contradiction);
    }
    return std::make_unique<HttpNliScorer>(s.http);
}

} // namespace checkembed::cli
