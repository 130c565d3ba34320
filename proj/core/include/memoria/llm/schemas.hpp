#pragma once

#include "memoria/llm/gateway.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string_view>

namespace memoria::llm {

/// Pulls a JSON object out of model output: the whole text, a fenced
/// ```json block, or the outermost {...} span, in that order.
std::optional<nlohmann::json> extract_json(std::string_view raw);

/// Structural check of a task's output document; throws OutputRejected.
///   decompose        {persons?, locations?, items?, events?: [string]}
///   evaluate         {efficiency: number}
///   adjust_weights   {daily: number, memory: number}
///   suggest_keywords {keywords: [string]}
///   generate         {text: non-empty string}
///   followup         {question: non-empty string}
///   judge            {coherence, empathy, memory_support, emotional_safety, problem_solving: number}
///   synthesize       any object (callers pass their own validator)
void validate_task_output(Task task, const nlohmann::json& doc);

/// Short human-readable shape of the expected output, used in prompts.
std::string_view output_shape(Task task) noexcept;

} // namespace memoria::llm
