#include "patentsum/http.hpp"

#include <thread>

#include "httplib.h"
#include "patentsum/error.hpp"

namespace patentsum {

nlohmann::json post_json(const std::string& endpoint, const std::string& path, const nlohmann::json& body,
                         const RetryPolicy& retry) {
    httplib::Client client(endpoint);
    if (!client.is_valid()) throw BackendUnavailable("invalid backend endpoint '" + endpoint + "'");
    client.set_connection_timeout(std::chrono::seconds(5));
    client.set_read_timeout(std::chrono::seconds(600));

    const auto payload = body.dump();
    auto backoff = retry.initial_backoff;
    std::string last_error;
    bool reached = false;

    for (int attempt = 1; attempt <= std::max(1, retry.attempts); ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        auto res = client.Post(path, payload, "application/json; charset=utf-8");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        reached = true;
        if (res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        nlohmann::json reply;
        try {
            reply = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception&) {
            throw BackendError(endpoint + path + ": reply is not JSON (HTTP " + std::to_string(res->status) + ")");
        }
        if (reply.is_object() && reply.contains("error")) {
            throw BackendError(endpoint + path + ": " + reply["error"].dump());
        }
        if (res->status != 200) {
            throw BackendError(endpoint + path + ": HTTP " + std::to_string(res->status));
        }
        return reply;
    }
    auto msg = endpoint + path + " failed after " + std::to_string(retry.attempts) + " attempts: " + last_error;
    if (reached) throw BackendError(msg);
    throw BackendUnavailable("backend endpoint " + endpoint + " unreachable: " + last_error);
}

}  // namespace patentsum
