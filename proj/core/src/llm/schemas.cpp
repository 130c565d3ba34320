#include "memoria/llm/schemas.hpp"

namespace memoria::llm {

using nlohmann::json;

namespace {

std::optional<json> try_parse(std::string_view text) {
    auto doc = json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    return doc;
}

void require_number(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_number()) {
        throw OutputRejected(std::string("'") + key + "' must be a number");
    }
}

void require_text(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_string() || it->get_ref<const std::string&>().empty()) {
        throw OutputRejected(std::string("'") + key + "' must be a non-empty string");
    }
}

void require_string_list(const json& doc, const char* key, bool optional) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) {
        if (optional) return;
        throw OutputRejected(std::string("'") + key + "' is required");
    }
    if (!it->is_array()) throw OutputRejected(std::string("'") + key + "' must be an array of strings");
    for (const auto& v : *it) {
        if (!v.is_string()) throw OutputRejected(std::string("'") + key + "' must be an array of strings");
    }
}

} // namespace

std::optional<json> extract_json(std::string_view raw) {
    if (auto doc = try_parse(raw)) return doc;

    if (auto fence = raw.find("```"); fence != std::string_view::npos) {
        auto body = raw.find('\n', fence);
        auto close = body == std::string_view::npos ? body : raw.find("```", body);
        if (close != std::string_view::npos) {
            if (auto doc = try_parse(raw.substr(body + 1, close - body - 1))) return doc;
        }
    }

    auto open = raw.find('{');
    auto close = raw.rfind('}');
    if (open != std::string_view::npos && close != std::string_view::npos && close > open) {
        return try_parse(raw.substr(open, close - open + 1));
    }
    return std::nullopt;
}

void validate_task_output(Task task, const json& doc) {
    if (!doc.is_object()) throw OutputRejected("output must be a JSON object");
    switch (task) {
    case Task::decompose:
        for (const char* key : {"persons", "locations", "items", "events"}) require_string_list(doc, key, true);
        return;
    case Task::evaluate: require_number(doc, "efficiency"); return;
    case Task::adjust_weights:
        require_number(doc, "daily");
        require_number(doc, "memory");
        return;
    case Task::suggest_keywords: require_string_list(doc, "keywords", false); return;
    case Task::generate: require_text(doc, "text"); return;
    case Task::followup: require_text(doc, "question"); return;
    case Task::judge:
        for (const char* key : {"coherence", "empathy", "memory_support", "emotional_safety", "problem_solving"}) {
            require_number(doc, key);
        }
        return;
    case Task::synthesize: return;
    }
}

std::string_view output_shape(Task task) noexcept {
    switch (task) {
    case Task::decompose:
        return R"({"persons": [string], "locations": [string], "items": [string], "events": [string]})";
    case Task::evaluate: return R"({"efficiency": number between 0 and 1})";
    case Task::adjust_weights: return R"({"daily": number, "memory": number})";
    case Task::suggest_keywords: return R"({"keywords": [string]})";
    case Task::generate: return R"({"text": string})";
    case Task::followup: return R"({"question": string})";
    case Task::judge:
        return R"({"coherence": number, "empathy": number, "memory_support": number, "emotional_safety": number, "problem_solving": number})";
    case Task::synthesize: return R"(a JSON object following the schema given in the input)";
    }
    return "{}";
}

} // namespace memoria::llm
