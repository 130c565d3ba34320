#include "memoria/llm/mock_backend.hpp"

#include "memoria/errors.hpp"
#include "memoria/kg/tokenize.hpp"
#include "memoria/vocabulary.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <set>

namespace memoria::llm {

using nlohmann::json;

namespace {

constexpr std::array kCategoryNames = {"persons", "locations", "items", "events"};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string text_of(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it != obj.end() && it->is_string() ? it->get<std::string>() : std::string{};
}

std::vector<std::string> strings_of(const json& obj, const char* key) {
    std::vector<std::string> out;
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_array()) return out;
    for (const auto& v : *it) {
        if (v.is_string()) out.push_back(v.get<std::string>());
    }
    return out;
}

std::uint64_t mix(std::uint64_t seed, std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

bool contains_ci(const std::string& haystack_lower, std::string_view needle) {
    const auto n = lower(needle);
    return !n.empty() && haystack_lower.find(n) != std::string::npos;
}

} // namespace

MockScript MockScript::standard(std::uint64_t seed) {
    MockScript s;
    s.seed = seed;
    auto add = [&](auto const& words, const char* category) {
        for (std::string_view w : words) s.categories.emplace(lower(w), category);
    };
    add(vocab::kPatientFirstNames, "persons");
    add(vocab::kFamilyFirstNames, "persons");
    add(vocab::kFriendNames, "persons");
    add(vocab::kCaregiverNames, "persons");
    add(vocab::kFamilyRelations, "persons");
    add(vocab::kPersonWords, "persons");
    add(vocab::kLocationWords, "locations");
    add(vocab::kItemWords, "items");
    add(vocab::kEventWords, "events");
    for (const auto& [key, terms] : vocab::kRelatedTerms) {
        auto& list = s.related[std::string(key)];
        for (std::string_view t : terms) {
            if (!t.empty()) list.emplace_back(t);
        }
    }
    return s;
}

MockBackend::MockBackend(MockScript script) : script_(std::move(script)) {}

std::string MockBackend::complete(const GatewayRequest& request, const Prompt&) {
    const json& p = request.payload;
    switch (request.task) {
    case Task::decompose: return decompose(p).dump();
    case Task::evaluate: return evaluate(p).dump();
    case Task::adjust_weights: return adjust_weights(p).dump();
    case Task::suggest_keywords: return suggest_keywords(p).dump();
    case Task::generate: return generate(p).dump();
    case Task::followup: return followup(p).dump();
    case Task::judge: return judge(p).dump();
    case Task::synthesize:
        throw GatewayError("mock backend does not synthesize; corpus generation uses its template source");
    }
    throw GatewayError("mock backend: unsupported task");
}

json MockBackend::decompose(const json& payload) const {
    json out = {{"persons", json::array()}, {"locations", json::array()}, {"items", json::array()},
                {"events", json::array()}};
    std::set<std::string> seen;
    for (const auto& token : kg::tokenize(text_of(payload, "text"))) {
        auto it = script_.categories.find(token);
        if (it == script_.categories.end() || !seen.insert(token).second) continue;
        out[it->second].push_back(token);
    }
    return out;
}

// Category coverage: a decomposition category counts as covered when one of
// its terms, or a related term from the script, appears among the keywords
// matched by the retrieved nodes.
json MockBackend::evaluate(const json& payload) {
    const std::size_t call = evaluate_calls_++;
    if (!script_.efficiency_script.empty()) {
        const auto& s = script_.efficiency_script;
        return {{"efficiency", s[std::min(call, s.size() - 1)]}};
    }

    std::set<std::string> matched;
    if (auto it = payload.find("nodes"); it != payload.end() && it->is_array()) {
        for (const auto& node : *it) {
            for (const auto& kw : strings_of(node, "matched_keywords")) matched.insert(kw);
        }
    }
    auto hit = [&](const std::string& token) {
        if (matched.contains(token)) return true;
        if (auto rel = script_.related.find(token); rel != script_.related.end()) {
            return std::any_of(rel->second.begin(), rel->second.end(),
                               [&](const std::string& r) { return matched.contains(r); });
        }
        return false;
    };

    int present = 0;
    int covered = 0;
    const json decomposition = payload.value("decomposition", json::object());
    for (const char* category : kCategoryNames) {
        const auto terms = strings_of(decomposition, category);
        if (terms.empty()) continue;
        ++present;
        bool any = false;
        for (const auto& term : terms) {
            for (const auto& token : kg::tokenize(term)) any = any || hit(token);
        }
        covered += any ? 1 : 0;
    }
    if (present > 0) return {{"efficiency", static_cast<double>(covered) / present}};

    // Nothing specific was named: the turn is about the present moment, which
    // the current activity answers.
    if (auto it = payload.find("nodes"); it != payload.end() && it->is_array()) {
        const bool has_current = std::any_of(it->begin(), it->end(),
                                             [](const json& node) { return node.value("current", false); });
        if (has_current) return {{"efficiency", 1.0}};
    }

    const auto keywords = strings_of(payload, "keywords");
    if (keywords.empty()) return {{"efficiency", 0.0}};
    const auto n = std::count_if(keywords.begin(), keywords.end(), [&](const std::string& k) { return hit(k); });
    return {{"efficiency", static_cast<double>(n) / static_cast<double>(keywords.size())}};
}

json MockBackend::adjust_weights(const json& payload) const {
    const json weights = payload.value("weights", json::object());
    const double daily = weights.value("daily", 0.5);
    const double memory = weights.value("memory", 0.5);

    bool toward_memory = true;
    switch (script_.weight_rule) {
    case WeightRule::toward_memory: toward_memory = true; break;
    case WeightRule::toward_daily: toward_memory = false; break;
    case WeightRule::toward_hits: {
        auto distinct = [&](const char* key) {
            std::set<std::string> kws;
            if (auto it = payload.find(key); it != payload.end() && it->is_array()) {
                for (const auto& node : *it) {
                    for (const auto& kw : strings_of(node, "matched_keywords")) kws.insert(kw);
                }
            }
            return kws.size();
        };
        toward_memory = distinct("memory_hits") >= distinct("daily_hits");
        break;
    }
    }
    const double d = script_.weight_delta;
    return toward_memory ? json{{"daily", daily - d}, {"memory", memory + d}}
                         : json{{"daily", daily + d}, {"memory", memory - d}};
}

json MockBackend::suggest_keywords(const json& payload) const {
    const auto keywords = strings_of(payload, "keywords");
    std::set<std::string> have(keywords.begin(), keywords.end());
    json out = json::array();
    for (const auto& kw : keywords) {
        auto it = script_.related.find(kw);
        if (it == script_.related.end()) continue;
        for (const auto& r : it->second) {
            if (have.insert(r).second) out.push_back(r);
        }
    }
    return {{"keywords", out}};
}

json MockBackend::generate(const json& payload) const {
    static constexpr std::array kOpenings = {"I'm right here with you.", "It's okay, I'm here to help.",
                                             "Don't worry, we'll work it out together."};
    static constexpr std::array kClosings = {"Shall we take it one step at a time?",
                                             "Would you like to talk about it a little more?",
                                             "I'll stay with you while we get ready."};
    const std::string dialogue = text_of(payload, "dialogue");
    const auto h = mix(script_.seed, dialogue);

    std::string text = kOpenings[h % kOpenings.size()];
    std::string current_id;
    if (auto it = payload.find("current_activity"); it != payload.end() && it->is_object()) {
        const auto& ca = *it;
        current_id = text_of(ca, "id");
        text += " Right now it's time for " + lower(text_of(ca, "name")) + " in the " + text_of(ca, "location") +
                ", from " + text_of(ca, "start") + " to " + text_of(ca, "end") + ".";
    }
    if (auto it = payload.find("nodes"); it != payload.end() && it->is_array()) {
        for (const auto& node : *it) {
            if (text_of(node, "id") == current_id) continue;
            const std::string kind = text_of(node, "kind");
            const std::string label = text_of(node, "label");
            if (kind == "activity") {
                text += " " + label + " is at " + text_of(node, "start") + " in the " + text_of(node, "location") + ".";
            } else if (kind == "event") {
                text += " You might remember " + label + ": " + text_of(node, "description");
                if (!text.empty() && text.back() != '.') text += ".";
            } else {
                const std::string role = text_of(node, "role");
                const std::string relation = text_of(node, "relation");
                if (role == "caregiver") {
                    text += " " + label + " is one of the caregivers looking after you.";
                } else if (role == "patient") {
                    continue;
                } else if (!relation.empty()) {
                    text += " " + label + ", your " + relation + ", is one of the people close to you.";
                } else {
                    text += " " + label + " is one of the people close to you.";
                }
            }
        }
    }
    text += " ";
    text += kClosings[(h >> 8) % kClosings.size()];
    return {{"text", text}};
}

json MockBackend::followup(const json& payload) const {
    const auto unresolved = strings_of(payload, "unresolved");
    std::string question = "I'd like to help. ";
    const std::string first = unresolved.empty() ? "" : unresolved.front();
    if (first == "persons") {
        question += "Could you tell me who you are thinking of?";
    } else if (first == "locations") {
        question += "Could you tell me which place you mean?";
    } else if (first == "items") {
        question += "Could you tell me a little more about the thing you are looking for?";
    } else if (first == "events") {
        question += "Could you tell me a bit more about the event you have in mind?";
    } else {
        question += "I want to make sure I understand you. Could you tell me a little more?";
    }
    return {{"question", question}};
}

// Keyword heuristics standing in for a judge model; only meant to be
// monotone in the obvious things (grounded names, warmth, concrete steps).
json MockBackend::judge(const json& payload) const {
    const std::string response = text_of(payload, "response");
    const auto words = kg::tokenize(response);
    if (words.empty()) {
        return {{"coherence", 0}, {"empathy", 0}, {"memory_support", 0}, {"emotional_safety", 0},
                {"problem_solving", 0}};
    }
    const std::string lc = lower(response);
    auto count_phrases = [&](std::initializer_list<std::string_view> phrases) {
        return static_cast<double>(
            std::count_if(phrases.begin(), phrases.end(), [&](std::string_view p) { return contains_ci(lc, p); }));
    };

    const auto dialogue_tokens = kg::tokenize(text_of(payload, "dialogue"));
    const std::set<std::string> response_set(words.begin(), words.end());
    const bool on_topic = std::any_of(dialogue_tokens.begin(), dialogue_tokens.end(), [&](const std::string& t) {
        return t.size() > 3 && response_set.contains(t);
    });
    const auto sentences = std::count_if(response.begin(), response.end(),
                                         [](char c) { return c == '.' || c == '?' || c == '!'; });
    double coherence = 5.0;
    if (sentences >= 1 && sentences <= 6) coherence += 2.0;
    if (sentences > 0 && static_cast<double>(words.size()) / static_cast<double>(sentences) <= 20.0) {
        coherence += 1.0;
    }
    if (on_topic) coherence += 2.0;

    const double empathy = 5.0 + 1.5 * count_phrases({"here with you", "it's okay", "don't worry", "together",
                                                       "i understand", "close to you", "stay with you",
                                                       "i'd like to help"});

    const auto expected = strings_of(payload, "expected_terms");
    const auto grounded = static_cast<double>(
        std::count_if(expected.begin(), expected.end(), [&](const std::string& t) { return contains_ci(lc, t); }));
    double memory = 1.0;
    if (grounded > 0) memory += 5.0 + std::min(2.0, grounded - 1.0);
    if (auto ref = text_of(payload, "reference"); !ref.empty()) {
        const auto ref_tokens = kg::tokenize(ref);
        const auto overlap = std::count_if(ref_tokens.begin(), ref_tokens.end(),
                                           [&](const std::string& t) { return response_set.contains(t); });
        memory += 2.0 * static_cast<double>(overlap) / static_cast<double>(ref_tokens.size());
    }

    const double triggers = count_phrases({"wrong", "dead", "died", "already told", "stupid", "you forgot"});
    const double safety = 9.0 + (count_phrases({"here with you", "it's okay", "don't worry"}) > 0 ? 1.0 : 0.0) -
                          2.5 * triggers;

    static const std::regex clock(R"(\b\d{1,2}:\d{2}\b)");
    double solving = 4.0;
    if (std::regex_search(response, clock)) solving += 2.0;
    if (count_phrases({"step", "let's", "shall we", "we can", "get ready"}) > 0) solving += 2.0;
    if (grounded > 0) solving += 2.0;

    auto clamp10 = [](double v) { return std::clamp(v, 0.0, 10.0); };
    return {{"coherence", clamp10(coherence)},
            {"empathy", clamp10(empathy)},
            {"memory_support", clamp10(memory)},
            {"emotional_safety", clamp10(safety)},
            {"problem_solving", clamp10(solving)}};
}

} // namespace memoria::llm
