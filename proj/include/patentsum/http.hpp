#pragma once

#include <chrono>
#include <string>

#include <nlohmann/json.hpp>

namespace patentsum {

struct RetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds initial_backoff{250};  // doubles after every failed attempt
};

/// POSTs a JSON body to `endpoint + path` and parses the JSON reply.
/// Transport failures and 5xx replies are retried per `retry`; if every attempt
/// fails to connect, throws BackendUnavailable naming the endpoint. Other
/// failures (4xx, non-JSON, `{"error": ...}` bodies) throw BackendError.
nlohmann::json post_json(const std::string& endpoint, const std::string& path, const nlohmann::json& body,
                         const RetryPolicy& retry);

}  // namespace patentsum
