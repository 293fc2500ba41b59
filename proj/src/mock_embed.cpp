#include "checkembed/error.hpp"
#include "checkembed/providers.hpp"

#include <cctype>
#include <cmath>

namespace checkembed {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::vector<std::string> bag_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Embedding mock_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
    if (dim < 8) throw Error(ErrorCode::InvalidInput, "mock embedding dim must be >= 8");
    const auto tokens = bag_tokens(text);
    if (tokens.empty()) throw Error(ErrorCode::EmptyText, "text has no alphanumeric tokens");

    const std::uint64_t salt = splitmix64(seed);
    std::vector<double> values(dim, 0.0);
    for (const auto& token : tokens) {
        const std::uint64_t h = splitmix64(fnv1a(token) ^ salt);
        const double sign = (h >> 63) != 0 ? -1.0 : 1.0;
        values[h % dim] += sign;
    }

    double norm2 = 0.0;
    for (double v : values) norm2 += v * v;
    if (norm2 == 0.0) {
        throw Error(ErrorCode::ZeroVector, "token hashes cancelled out; try a larger dim");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : values) v *= inv;
    return Embedding(std::move(values), "mock-" + std::to_string(dim) + "-" + std::to_string(seed));
}

MockEmbedder::MockEmbedder(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed), model_id_("mock-" + std::to_string(dim) + "-" + std::to_string(seed)) {
    if (dim_ < 8) throw Error(ErrorCode::InvalidInput, "mock embedding dim must be >= 8");
}

Embedding MockEmbedder::embed(std::string_view text) {
    ++calls_;
    return mock_embed(text, dim_, seed_);
}

} // namespace checkembed
