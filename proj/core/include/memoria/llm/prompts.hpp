#pragma once

#include "memoria/llm/gateway.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

namespace memoria::llm {

inline constexpr std::string_view kPromptTemplateVersion = "prompts-v1";

/// Task instructions are fixed text; the payload is attached per call as a
/// JSON block in the user message.
Prompt render_prompt(Task task, const nlohmann::json& payload);

/// Follow-up message asking the model to fix its previous answer.
ChatMessage repair_message(Task task, std::string_view problem);

/// Scoring rubric shown to the judge model.
std::string_view judge_rubric() noexcept;

} // namespace memoria::llm
