#pragma once

// HTTP provider for a remote completion service. The request is a JSON POST
// carrying the model name, the prompt (as a chat message list or a plain
// prompt field) and the temperature; the completion is read from a
// configurable JSON pointer in the response. Define
// CPPHTTPLIB_OPENSSL_SUPPORT before including this header for https.

#include "provider.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <regex>

namespace logiclm::pipeline {

struct Endpoint {
    std::string scheme_host_port;  // e.g. "https://api.example.com:443"
    std::string path;
};

inline std::optional<Endpoint> split_endpoint(const std::string& url) {
    static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(url, m, kUrl)) return std::nullopt;
    return Endpoint{m[1].str(), m[2].matched ? m[2].str() : "/"};
}

class LiveProvider : public Provider {
public:
    explicit LiveProvider(ProviderConfig config) : config_(std::move(config)) {
        auto errors = validate(config_);
        if (!errors.empty()) throw ProviderError("invalid provider configuration: " + errors.front());
        auto endpoint = split_endpoint(config_.endpoint_url);
        if (!endpoint) throw ProviderError("endpoint_url '" + config_.endpoint_url + "' is not an http(s) URL");
        endpoint_ = *endpoint;
    }

    nlohmann::json request_body(const std::string& prompt) const {
        nlohmann::json body{{"model", config_.model_name}, {"temperature", config_.temperature}};
        if (config_.chat_messages) body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
        else body["prompt"] = prompt;
        return body;
    }

    std::string complete(const ProviderRequest& request) override {
        httplib::Client client(endpoint_.scheme_host_port);
        auto timeout = std::chrono::milliseconds(static_cast<long long>(config_.timeout_seconds * 1000));
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);

        httplib::Headers headers;
        if (const char* token = std::getenv(config_.auth_env_var.c_str()); token && *token)
            headers.emplace("Authorization", std::string("Bearer ") + token);

        auto res = client.Post(endpoint_.path, headers, request_body(request.prompt).dump(), "application/json");
        if (!res) throw ProviderError("request to " + endpoint_.scheme_host_port + " failed: " + httplib::to_string(res.error()));
        if (res->status != 200)
            throw ProviderError("provider returned HTTP " + std::to_string(res->status) + " for problem '" +
                                request.problem_id + "'");
        auto j = nlohmann::json::parse(res->body, nullptr, false);
        if (j.is_discarded()) throw ProviderError("provider response is not JSON");
        try {
            const auto& field = j.at(nlohmann::json::json_pointer(config_.response_pointer));
            if (!field.is_string()) throw ProviderError("response field " + config_.response_pointer + " is not a string");
            return field.get<std::string>();
        } catch (const nlohmann::json::exception&) {
            throw ProviderError("provider response has no field " + config_.response_pointer);
        }
    }

    std::string name() const override { return "live"; }

private:
    ProviderConfig config_;
    Endpoint endpoint_;
};

} // namespace logiclm::pipeline
