#include "memoria/query/analysis.hpp"

#include <algorithm>
#include <array>

namespace memoria::query {

namespace {

// Sorted; binary-searched. Bump kStopwordListVersion when editing.
constexpr std::array<std::string_view, 160> kStopwords = {
    "a",        "about",     "above",   "after",    "again",    "against",  "all",      "also",
    "am",       "an",        "and",     "any",      "are",      "aren",     "as",       "at",
    "be",       "because",   "been",    "before",   "being",    "below",    "between",  "both",
    "but",      "by",        "can",     "cannot",   "could",    "couldn",   "did",      "didn",
    "do",       "does",      "doesn",   "doing",    "don",      "down",     "during",   "each",
    "even",     "ever",      "few",     "for",      "from",     "further",  "get",      "got",
    "had",      "hadn",      "has",     "hasn",     "have",     "haven",    "having",   "he",
    "her",      "here",      "hers",    "herself",  "him",      "himself",  "his",      "how",
    "if",       "in",        "into",    "is",       "isn",      "it",       "its",      "itself",
    "just",     "let",       "ll",      "me",       "might",    "more",     "most",     "much",
    "must",     "my",        "myself",  "no",       "nor",      "not",      "now",      "of",
    "off",      "oh",        "ok",      "okay",     "on",       "once",     "only",     "or",
    "other",    "ought",     "our",     "ours",     "ourselves", "out",     "over",     "own",
    "re",       "really",    "same",    "she",      "should",   "shouldn",  "so",       "some",
    "such",     "than",      "that",    "the",      "their",    "theirs",   "them",     "themselves",
    "then",     "there",     "these",   "they",     "this",     "those",    "through",  "to",
    "too",      "um",        "under",   "until",    "up",       "ve",       "very",     "was",
    "wasn",     "we",        "well",    "were",     "weren",    "what",     "when",     "where",
    "which",    "while",     "who",     "whom",     "why",      "will",     "with",     "won",
    "would",    "wouldn",    "yes",     "yet",      "you",      "your",     "yours",    "yourself",
};

} // namespace

bool is_stopword(std::string_view token) {
    return std::binary_search(kStopwords.begin(), kStopwords.end(), token);
}

} // namespace memoria::query
