#include "http_json.hpp"

#include "checkembed/error.hpp"

#include "httplib.h"
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <random>
#include <thread>

namespace checkembed::detail {

namespace {

struct SplitUrl {
    std::string origin; // scheme://host[:port]
    std::string prefix; // path without trailing slash
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::ConfigError, "base_url must include a scheme: '" + url + "'");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    SplitUrl out;
    out.origin = url.substr(0, path_start);
    out.prefix = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
    return out;
}

std::string api_key(const ProviderConfig& config) {
    if (config.api_key_env.empty()) return {};
    const char* value = std::getenv(config.api_key_env.c_str());
    if (value == nullptr || *value == '\0') {
        throw Error(ErrorCode::AuthError,
                    "environment variable " + config.api_key_env + " is not set");
    }
    return value;
}

void sleep_backoff(const ProviderConfig& config, int attempt) {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    const double base = config.backoff_initial_s * static_cast<double>(1ULL << attempt);
    std::uniform_real_distribution<double> jitter(0.0, 0.25 * base);
    std::this_thread::sleep_for(std::chrono::duration<double>(base + jitter(rng)));
}

} // namespace

nlohmann::json post_json(const ProviderConfig& config, const std::string& path,
                         const nlohmann::json& body) {
    const auto url = split_url(config.base_url);
    const auto key = api_key(config);
    const auto payload = body.dump();

    httplib::Client client(url.origin);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::duration<double>(config.timeout_s));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers headers;
    if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);

    std::string target = url.prefix + path;
    if (target.empty()) target = "/";
    std::string last_failure;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
        if (attempt > 0) sleep_backoff(config, attempt - 1);
        spdlog::debug("POST {}{} (attempt {}) authorization={} body={}", url.origin, target,
                      attempt + 1, key.empty() ? "none" : "Bearer ***", payload);

        auto res = client.Post(target, headers, payload, "application/json");
        if (!res) {
            last_failure = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        spdlog::debug("HTTP {} from {}{}: {}", res->status, url.origin, target, res->body);
        if (res->status == 401 || res->status == 403) {
            throw Error(ErrorCode::AuthError, "endpoint rejected credentials (HTTP " +
                                                  std::to_string(res->status) + ")");
        }
        if (res->status == 429 || res->status >= 500) {
            last_failure = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw Error(ErrorCode::TransportError,
                        "HTTP " + std::to_string(res->status) + " from " + target);
        }
        try {
            return nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MalformedResponse, std::string("reply is not JSON: ") + e.what());
        }
    }
    throw Error(ErrorCode::TransportError,
                last_failure + " after " + std::to_string(config.max_retries + 1) + " attempts");
}

} // namespace checkembed::detail
