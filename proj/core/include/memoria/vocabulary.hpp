#pragma once

#include <array>
#include <string_view>
#include <utility>

// Word pools shared by the synthetic corpus generator and the mock model
// backend, so that mock decomposition recognises every name and place the
// generator can emit.
namespace memoria::vocab {

inline constexpr auto kPatientFirstNames = std::to_array<std::string_view>({
    "Margaret", "Harold", "Dorothy", "Walter", "Evelyn", "Frank",   "Ruth",
    "George",                     "Helen",  "Arthur",  "Edith",  "Albert", "Irene",   "Stanley",
    "Gladys",                     "Raymond", "Mildred", "Ernest", "Florence", "Leonard"});

inline constexpr auto kSurnames = std::to_array<std::string_view>({"Smith", "Brown", "Taylor", "Wilson", "Clarke",
                                         "Walker", "Hughes", "Evans", "Turner", "Baker", "Harris", "Cooper"});

inline constexpr auto kFamilyFirstNames = std::to_array<std::string_view>({
    "Tom", "Sarah", "Emily", "James", "Laura", "David", "Kate",   "Michael",
    "Lucy",                  "Peter", "Susan", "Paul",  "Claire", "Mark", "Jenny", "Robert"});

inline constexpr auto kFriendNames = std::to_array<std::string_view>({"Betty", "Joan", "Ronald", "Alice",
                                            "Norman", "Vera", "Douglas", "Mabel"});

inline constexpr auto kCaregiverNames = std::to_array<std::string_view>({"Anna", "Maria", "Grace", "Daniel",
                                               "Sofia", "Liam", "Nadia", "Oliver"});

inline constexpr auto kFamilyRelations = std::to_array<std::string_view>({"daughter", "son", "granddaughter", "grandson",
                                                "niece", "nephew", "sister", "brother"});
inline constexpr auto kFemaleRelations = std::to_array<std::string_view>({"daughter", "granddaughter", "niece", "sister"});
inline constexpr auto kMaleRelations = std::to_array<std::string_view>({"son", "grandson", "nephew", "brother"});
inline constexpr auto kFemaleFamilyNames = std::to_array<std::string_view>(
    {"Sarah", "Emily", "Laura", "Kate", "Lucy", "Susan", "Claire", "Jenny"});

/// Extra person words recognised by the mock decomposer.
inline constexpr auto kPersonWords = std::to_array<std::string_view>({
    "nurse", "doctor", "man", "woman", "friend", "friends", "family", "mother", "father",
    "mum", "dad", "wife", "husband", "visitor", "grandchildren", "children", "carer", "caregiver"});

inline constexpr auto kLocationWords = std::to_array<std::string_view>({
    "kitchen", "garden", "house", "home", "room", "bedroom", "lounge", "dining", "hall",
    "bathroom", "church", "park", "lake", "seaside", "beach", "school", "office", "shop", "village",
    "chapel", "library", "hospital", "greenhouse"});

inline constexpr auto kItemWords = std::to_array<std::string_view>({
    "gloves", "bag", "decorations", "medication", "medicine", "pills", "glasses", "photos",
    "photo", "album", "book", "flowers", "tea", "coat", "keys", "radio", "television", "newspaper", "letter",
    "piano", "hat", "shoes", "cake", "seeds", "cards"});

inline constexpr auto kEventWords = std::to_array<std::string_view>({
    "visit", "lunch", "breakfast", "dinner", "supper", "walk", "gardening", "club",
    "christmas", "birthday", "wedding", "trip", "fishing", "holiday", "appointment", "exercise", "exercises",
    "therapy", "music", "bingo", "bath", "nap", "rest", "party", "dance", "dancing", "bedtime", "painting",
    "reading", "singing", "choir", "class", "session", "group", "games", "cards", "puzzle", "stroll", "medication",
    "tea", "hygiene", "sleep"});

/// Related-concept table behind mock keyword expansion.
inline constexpr std::array<std::pair<std::string_view, std::array<std::string_view, 3>>, 44> kRelatedTerms = {{
    {"afternoon", {"visit", "tea", ""}},
    {"appointment", {"visit", "doctor", ""}},
    {"bag", {"belongings", "room", ""}},
    {"birthday", {"party", "cake", "celebration"}},
    {"breakfast", {"meal", "dining", "morning"}},
    {"christmas", {"holiday", "family", "decorations"}},
    {"church", {"chapel", "choir", "sunday"}},
    {"club", {"group", "gardening", ""}},
    {"decorations", {"christmas", "holiday", ""}},
    {"dinner", {"meal", "dining", "evening"}},
    {"earlier", {"morning", "today", ""}},
    {"exercise", {"exercises", "walk", "stretching"}},
    {"exercises", {"exercise", "stretching", ""}},
    {"fishing", {"lake", "trip", "river"}},
    {"flowers", {"garden", "gardening", "roses"}},
    {"garden", {"gardening", "flowers", "walk"}},
    {"gardening", {"garden", "flowers", "seeds"}},
    {"gloves", {"gardening", "garden", ""}},
    {"home", {"house", "room", "bedroom"}},
    {"house", {"home", "room", "bedroom"}},
    {"kitchen", {"dining", "breakfast", "tea"}},
    {"lake", {"fishing", "water", ""}},
    {"lunch", {"meal", "dining", ""}},
    {"man", {"visitor", "family", "nurse"}},
    {"medication", {"medicine", "pills", "nurse"}},
    {"medicine", {"medication", "pills", ""}},
    {"music", {"singing", "songs", "piano"}},
    {"nap", {"rest", "bedroom", ""}},
    {"pills", {"medication", "medicine", ""}},
    {"rest", {"nap", "bedroom", ""}},
    {"room", {"bedroom", "lounge", ""}},
    {"school", {"teacher", "childhood", "work"}},
    {"seaside", {"beach", "holiday", ""}},
    {"singing", {"music", "choir", "songs"}},
    {"supper", {"dinner", "meal", "evening"}},
    {"tea", {"afternoon", "biscuits", "lounge"}},
    {"today", {"schedule", "visit", ""}},
    {"tomorrow", {"schedule", "morning", ""}},
    {"trip", {"holiday", "travel", ""}},
    {"visit", {"family", "visitor", "afternoon"}},
    {"visitor", {"visit", "family", ""}},
    {"walk", {"garden", "stroll", "exercise"}},
    {"wedding", {"married", "church", "marriage"}},
    {"work", {"job", "office", ""}},
}};

} // namespace memoria::vocab
