#pragma once

#include "memoria/time.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace memoria::llm {
class Gateway;
}

namespace memoria::query {

enum class Speaker { patient, caregiver };

std::string_view to_string(Speaker speaker) noexcept;
Speaker parse_speaker(std::string_view text);

struct DialogueTurn {
    std::string text;
    Timestamp timestamp{};
    Speaker speaker = Speaker::patient;
};

/// Throws PreconditionError when the text is blank.
void validate(const DialogueTurn& turn);

/// Insertion-ordered set of lowercase keywords.
class KeywordSet {
public:
    KeywordSet() = default;
    KeywordSet(std::initializer_list<std::string> words);

    /// Returns false if already present.
    bool insert(std::string word);
    bool contains(std::string_view word) const;

    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }
    auto begin() const noexcept { return words_.begin(); }
    auto end() const noexcept { return words_.end(); }
    const std::vector<std::string>& words() const noexcept { return words_; }

    /// True if every keyword here is also in `other`.
    bool subset_of(const KeywordSet& other) const;

    bool operator==(const KeywordSet&) const = default;

private:
    std::vector<std::string> words_;
};

enum class Category { persons, locations, items, events };
inline constexpr std::array kCategories = {Category::persons, Category::locations, Category::items, Category::events};
std::string_view to_string(Category category) noexcept;

struct QueryDecomposition {
    std::vector<std::string> persons;
    std::vector<std::string> locations;
    std::vector<std::string> items;
    std::vector<std::string> events;

    const std::vector<std::string>& operator[](Category c) const;
    std::vector<std::string>& operator[](Category c);
    bool empty() const;
    bool operator==(const QueryDecomposition&) const = default;
};

nlohmann::json to_json(const QueryDecomposition& q);

inline constexpr std::string_view kStopwordListVersion = "en-1";
bool is_stopword(std::string_view token);

/// Tokenizes `text` and drops stopwords, keeping first occurrences in order.
std::vector<std::string> content_terms(std::string_view text);

/// Content terms of the turn in first-occurrence order. Throws EmptyQuery when
/// nothing survives filtering.
KeywordSet extract_keywords(const DialogueTurn& turn);

/// Lowercases, trims, collapses inner whitespace and de-duplicates every
/// category; drops empty entries.
QueryDecomposition normalize(QueryDecomposition q);

/// Person/location/item/event split of the turn via the gateway.
/// Blank turns are rejected before any call.
QueryDecomposition decompose(const DialogueTurn& turn, const llm::Gateway& gateway);

/// `keywords` followed by the content terms of every decomposition entry,
/// category by category.
KeywordSet merge_decomposition(KeywordSet keywords, const QueryDecomposition& q);

} // namespace memoria::query
