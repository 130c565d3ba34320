#include "memoria/llm/http_backend.hpp"

#include "memoria/errors.hpp"

#include <httplib.h>

#include <cstdlib>

namespace memoria::llm {

using nlohmann::json;

namespace {

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v != nullptr && *v != '\0' ? std::string(v) : std::move(fallback);
}

struct SplitUrl {
    std::string origin; // scheme://host[:port]
    std::string prefix; // path part, no trailing slash
};

SplitUrl split_url(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) throw GatewayError("endpoint URL needs a scheme: '" + url + "'");
    const auto path = url.find('/', scheme + 3);
    SplitUrl out{url.substr(0, path), path == std::string::npos ? "" : url.substr(path)};
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
    return out;
}

} // namespace

HttpConfig HttpConfig::from_env() {
    HttpConfig c;
    c.base_url = env_or("MEMORIA_LLM_BASE_URL", c.base_url);
    c.model = env_or("MEMORIA_LLM_MODEL", c.model);
    c.api_key = env_or("MEMORIA_LLM_API_KEY", "");
    const auto timeout = env_or("MEMORIA_LLM_TIMEOUT", std::to_string(c.timeout.count()));
    const auto in_flight = env_or("MEMORIA_LLM_MAX_IN_FLIGHT", std::to_string(c.max_in_flight));
    try {
        c.timeout = std::chrono::seconds(std::stol(timeout));
        c.max_in_flight = std::stoul(in_flight);
    } catch (const std::exception&) {
        throw PreconditionError("MEMORIA_LLM_TIMEOUT and MEMORIA_LLM_MAX_IN_FLIGHT must be numbers");
    }
    if (c.timeout.count() <= 0 || c.max_in_flight == 0) {
        throw PreconditionError("MEMORIA_LLM_TIMEOUT and MEMORIA_LLM_MAX_IN_FLIGHT must be positive");
    }
    return c;
}

json http_post_json(const HttpConfig& config, std::string_view path, const json& body) {
    const auto url = split_url(config.base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(config.timeout);
    client.set_read_timeout(config.timeout);
    client.set_write_timeout(config.timeout);
    httplib::Headers headers;
    if (!config.api_key.empty()) headers.emplace("Authorization", "Bearer " + config.api_key);

    const std::string target = url.prefix + std::string(path);
    auto res = client.Post(target, headers, body.dump(), "application/json");
    if (!res) {
        throw GatewayError("POST " + config.base_url + std::string(path) + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        throw GatewayError("POST " + target + " returned HTTP " + std::to_string(res->status) + ": " +
                           res->body.substr(0, 200));
    }
    auto reply = json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (reply.is_discarded()) throw GatewayError("POST " + target + " returned a non-JSON body");
    return reply;
}

HttpBackend::HttpBackend(HttpConfig config) : config_(std::move(config)) {}

std::string HttpBackend::complete(const GatewayRequest&, const Prompt& prompt) {
    json messages = json::array();
    for (const auto& m : prompt.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
    const json body = {{"model", config_.model},
                       {"messages", messages},
                       {"temperature", 0},
                       {"response_format", {{"type", "json_object"}}}};
    const json reply = http_post_json(config_, "/chat/completions", body);
    try {
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw GatewayError("chat completion reply has no choices[0].message.content");
    }
}

} // namespace memoria::llm
