#pragma once

#include "checkembed/providers.hpp"

#include "json.hpp"

#include <string>

namespace checkembed::detail {

/// POSTs `body` to base_url + path and returns the parsed JSON reply.
/// Connection failures, 429 and 5xx are retried with exponential backoff;
/// 401/403 raise AuthError at once.
nlohmann::json post_json(const ProviderConfig& config, const std::string& path,
                         const nlohmann::json& body);

} // namespace checkembed::detail
