#pragma once

#include "checkembed/eval.hpp"
#include "checkembed/providers.hpp"
#include "checkembed/scorematrix.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace checkembed::cli {

/// One provider block of the config file. `type` picks the backend:
/// generation http|stub, embedding http|mock, nli http|stub.
struct ProviderSection {
    std::string type;
    ProviderConfig http;
    std::string model;
    // generation
    double temperature = 1.0;
    std::size_t max_tokens = 1024;
    std::optional<double> top_p;
    std::optional<int> top_k;
    std::vector<std::string> replies; // stub
    // embedding
    std::optional<std::size_t> dim;
    std::uint64_t seed = 0; // mock
    // nli
    double contradiction = 0.0; // stub
};

struct RunConfig {
    ProviderSection generation;
    ProviderSection embedding;
    /// Per-token vectors for bertscore/selfcheck_bert; defaults to `embedding`.
    std::optional<ProviderSection> token_embedding;
    std::optional<ProviderSection> nli;
    /// Generator for llm_judge; defaults to `generation`.
    std::optional<ProviderSection> judge;
    std::size_t k = 10;
    Measure measure = Measure::Cosine;
    ConfidenceThresholds thresholds;
    std::filesystem::path cache_dir;  // empty: <output_dir>/cache
    std::filesystem::path output_dir = "out";
    std::size_t max_concurrency = 4;
    eval::Statistic statistic = eval::Statistic::MeanOffdiag;

    void validate() const;
    std::filesystem::path effective_cache_dir() const;
};

/// Relative paths in the file resolve against `base_dir`.
RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

std::unique_ptr<TextGenerator> make_generator(const ProviderSection& section);
std::unique_ptr<Embedder> make_embedder(const ProviderSection& section);
std::unique_ptr<NliScorer> make_nli(const ProviderSection& section);

} // namespace checkembed::cli
