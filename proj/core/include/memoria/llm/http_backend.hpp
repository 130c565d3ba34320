#pragma once

#include "memoria/llm/gateway.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <string>
#include <string_view>

namespace memoria::llm {

struct HttpConfig {
    std::string base_url = "https://api.openai.com/v1"; // endpoint root, without /chat/completions
    std::string model = "gpt-4o-mini";
    std::string api_key;
    std::chrono::seconds timeout{30};
    std::size_t max_in_flight = 4;

    /// Reads MEMORIA_LLM_BASE_URL, MEMORIA_LLM_MODEL, MEMORIA_LLM_API_KEY,
    /// MEMORIA_LLM_TIMEOUT (seconds) and MEMORIA_LLM_MAX_IN_FLIGHT over the defaults.
    static HttpConfig from_env();
};

/// POSTs `body` as JSON to base_url + path and returns the decoded reply.
/// Throws GatewayError on transport failure, non-2xx status or a non-JSON body.
nlohmann::json http_post_json(const HttpConfig& config, std::string_view path, const nlohmann::json& body);

/// Chat-completions client. The model's message content is the raw text the
/// gateway parses.
class HttpBackend final : public Backend {
public:
    explicit HttpBackend(HttpConfig config);

    std::string_view name() const override { return "http"; }
    std::string complete(const GatewayRequest& request, const Prompt& prompt) override;
    std::size_t max_in_flight() const override { return config_.max_in_flight; }

    const HttpConfig& config() const noexcept { return config_; }

private:
    HttpConfig config_;
};

} // namespace memoria::llm
