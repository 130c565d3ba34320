#pragma once

#include "memoria/llm/gateway.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace memoria::llm {

/// How the mock reacts to an adjust_weights request.
enum class WeightRule {
    toward_hits,   // shift toward the graph whose hits matched more keywords; ties favour memory
    toward_memory,
    toward_daily,
};

/// Rule tables for the deterministic mock model.
struct MockScript {
    std::uint64_t seed = 0;
    std::map<std::string, std::string> categories;              // token -> persons|locations|items|events
    std::map<std::string, std::vector<std::string>> related;    // keyword -> related terms
    WeightRule weight_rule = WeightRule::toward_hits;
    double weight_delta = 0.2;
    /// When non-empty, evaluate replays these scores in call order and
    /// repeats the last one afterwards.
    std::vector<double> efficiency_script;

    /// Tables filled from the shared vocabulary.
    static MockScript standard(std::uint64_t seed = 0);
};

/// Rule-based stand-in for a chat model. Reads the structured request
/// payload, ignores the rendered prompt, and answers in the task schema.
/// Output depends only on the script and the payload (plus the call index
/// when an efficiency script is set).
class MockBackend final : public Backend {
public:
    explicit MockBackend(MockScript script = MockScript::standard());

    std::string_view name() const override { return "mock"; }
    std::string complete(const GatewayRequest& request, const Prompt& prompt) override;

    const MockScript& script() const noexcept { return script_; }

private:
    nlohmann::json decompose(const nlohmann::json& payload) const;
    nlohmann::json evaluate(const nlohmann::json& payload);
    nlohmann::json adjust_weights(const nlohmann::json& payload) const;
    nlohmann::json suggest_keywords(const nlohmann::json& payload) const;
    nlohmann::json generate(const nlohmann::json& payload) const;
    nlohmann::json followup(const nlohmann::json& payload) const;
    nlohmann::json judge(const nlohmann::json& payload) const;

    MockScript script_;
    std::atomic<std::size_t> evaluate_calls_{0};
};

} // namespace memoria::llm
