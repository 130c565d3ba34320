#include "memoria/query/analysis.hpp"

#include "memoria/errors.hpp"
#include "memoria/kg/tokenize.hpp"
#include "memoria/llm/gateway.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>
#include <utility>

namespace memoria::query {

std::string_view to_string(Speaker speaker) noexcept {
    return speaker == Speaker::patient ? "patient" : "caregiver";
}

Speaker parse_speaker(std::string_view text) {
    if (text == "patient") return Speaker::patient;
    if (text == "caregiver") return Speaker::caregiver;
    throw ParseError("unknown speaker '" + std::string(text) + "'");
}

void validate(const DialogueTurn& turn) {
    const bool blank = std::all_of(turn.text.begin(), turn.text.end(),
                                   [](unsigned char c) { return std::isspace(c) != 0; });
    if (blank) throw PreconditionError("dialogue turn text is empty");
}

KeywordSet::KeywordSet(std::initializer_list<std::string> words) {
    for (const auto& w : words) insert(w);
}

bool KeywordSet::insert(std::string word) {
    if (contains(word)) return false;
    words_.push_back(std::move(word));
    return true;
}

bool KeywordSet::contains(std::string_view word) const {
    return std::find(words_.begin(), words_.end(), word) != words_.end();
}

bool KeywordSet::subset_of(const KeywordSet& other) const {
    return std::all_of(words_.begin(), words_.end(), [&](const std::string& w) { return other.contains(w); });
}

std::string_view to_string(Category category) noexcept {
    switch (category) {
    case Category::persons: return "persons";
    case Category::locations: return "locations";
    case Category::items: return "items";
    case Category::events: return "events";
    }
    return "persons";
}

const std::vector<std::string>& QueryDecomposition::operator[](Category c) const {
    switch (c) {
    case Category::persons: return persons;
    case Category::locations: return locations;
    case Category::items: return items;
    case Category::events: return events;
    }
    return persons;
}

std::vector<std::string>& QueryDecomposition::operator[](Category c) {
    return const_cast<std::vector<std::string>&>(std::as_const(*this)[c]);
}

bool QueryDecomposition::empty() const {
    return persons.empty() && locations.empty() && items.empty() && events.empty();
}

nlohmann::json to_json(const QueryDecomposition& q) {
    return {{"persons", q.persons}, {"locations", q.locations}, {"items", q.items}, {"events", q.events}};
}

std::vector<std::string> content_terms(std::string_view text) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (auto& token : kg::tokenize(text)) {
        if (is_stopword(token) || !seen.insert(token).second) continue;
        out.push_back(std::move(token));
    }
    return out;
}

KeywordSet extract_keywords(const DialogueTurn& turn) {
    validate(turn);
    KeywordSet keywords;
    for (auto& term : content_terms(turn.text)) keywords.insert(std::move(term));
    if (keywords.empty()) throw EmptyQuery("no content words in '" + turn.text + "'");
    return keywords;
}

namespace {

std::string normalize_entry(std::string_view raw) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : raw) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

} // namespace

QueryDecomposition normalize(QueryDecomposition q) {
    for (Category c : kCategories) {
        std::vector<std::string> cleaned;
        for (const auto& raw : q[c]) {
            auto entry = normalize_entry(raw);
            if (!entry.empty() && std::find(cleaned.begin(), cleaned.end(), entry) == cleaned.end()) {
                cleaned.push_back(std::move(entry));
            }
        }
        q[c] = std::move(cleaned);
    }
    return q;
}

QueryDecomposition decompose(const DialogueTurn& turn, const llm::Gateway& gateway) {
    validate(turn);
    const auto response = gateway.call({llm::Task::decompose, {{"text", turn.text}}});
    QueryDecomposition q;
    for (Category c : kCategories) {
        auto it = response.document.find(std::string(to_string(c)));
        if (it == response.document.end() || it->is_null()) continue;
        q[c] = it->get<std::vector<std::string>>();
    }
    return normalize(std::move(q));
}

KeywordSet merge_decomposition(KeywordSet keywords, const QueryDecomposition& q) {
    for (Category c : kCategories) {
        for (const auto& entry : q[c]) {
            for (auto& term : content_terms(entry)) keywords.insert(std::move(term));
        }
    }
    return keywords;
}

} // namespace memoria::query
