#include "memoria/errors.hpp"
#include "memoria/io.hpp"
#include "memoria/kg/graph_io.hpp"
#include "memoria/kg/query.hpp"
#include "memoria/kg/tokenize.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace memoria;
using namespace memoria::testing;

namespace {

kg::ActivityNode activity(std::string id, std::string name, int h0, int m0, int h1, int m1) {
    return {std::move(id), std::move(name), {TimeOfDay(h0, m0), TimeOfDay(h1, m1)}, "room", "scheduled"};
}

kg::KnowledgeGraph schedule(std::vector<kg::ActivityNode> activities) {
    kg::KnowledgeGraph g;
    g.activities = std::move(activities);
    return g;
}

} // namespace

TEST(Tokenize, LowercasesAndSplits) {
    EXPECT_EQ(kg::tokenize("Morning Walk, in the GARDEN!"),
              (std::vector<std::string>{"morning", "walk", "in", "the", "garden"}));
    EXPECT_EQ(kg::tokenize("a b cd"), (std::vector<std::string>{"cd"}));
    EXPECT_EQ(kg::tokenize("tea-time 08:30"), (std::vector<std::string>{"tea", "time", "08", "30"}));
    EXPECT_TRUE(kg::tokenize("").empty());
}

TEST(Tokenize, KeepsAccentedNamesWhole) {
    EXPECT_EQ(kg::tokenize("José visited"), (std::vector<std::string>{"josé", "visited"}));
}

TEST(Tokenize, AgreesWithAsciiOracle) {
    Rng rng(11);
    const std::string alphabet = "abcXYZ019 ,.-'!";
    for (int i = 0; i < 500; ++i) {
        std::string s;
        const int n = std::uniform_int_distribution<int>(0, 40)(rng);
        for (int k = 0; k < n; ++k) s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
        EXPECT_EQ(kg::tokenize(s), oracle_tokens(s)) << s;
    }
}

TEST(CurrentActivity, Containment) {
    const auto g = schedule({activity("activity:breakfast", "breakfast", 8, 0, 9, 0)});
    ASSERT_TRUE(kg::find_current_activity(g, TimeOfDay(8, 30)));
    EXPECT_EQ(kg::find_current_activity(g, TimeOfDay(8, 30))->name, "breakfast");
}

TEST(CurrentActivity, GapYieldsNone) {
    const auto g = schedule({activity("activity:breakfast", "breakfast", 8, 0, 9, 0),
                             activity("activity:lunch", "lunch", 12, 0, 13, 0)});
    EXPECT_FALSE(kg::find_current_activity(g, TimeOfDay(10, 15)));
}

TEST(CurrentActivity, OverlapPrefersLatestStart) {
    const auto g = schedule({activity("activity:rest", "rest", 14, 0, 16, 0),
                             activity("activity:medication", "medication", 15, 0, 15, 30)});
    EXPECT_EQ(kg::find_current_activity(g, TimeOfDay(15, 10))->name, "medication");
    EXPECT_EQ(kg::find_current_activity(g, TimeOfDay(15, 40))->name, "rest");
}

TEST(CurrentActivity, EqualStartsPreferSmallestId) {
    const auto g = schedule({activity("activity:b", "b", 9, 0, 10, 0), activity("activity:a", "a", 9, 0, 9, 30)});
    EXPECT_EQ(kg::find_current_activity(g, TimeOfDay(9, 10))->id, "activity:a");
    EXPECT_EQ(kg::find_current_activity(g, TimeOfDay(9, 45))->id, "activity:b");
}

TEST(CurrentActivity, UsesTimeOfDayOfTimestamp) {
    const auto g = schedule({activity("activity:lunch", "lunch", 12, 0, 13, 0)});
    EXPECT_TRUE(kg::find_current_activity(g, parse_timestamp("1999-01-01T12:30:00")));
    EXPECT_TRUE(kg::find_current_activity(g, parse_timestamp("2031-07-19T12:59:59")));
    EXPECT_FALSE(kg::find_current_activity(g, parse_timestamp("2031-07-19T13:00:00")));
}

TEST(CurrentActivity, RejectsMemoryGraph) {
    kg::KnowledgeGraph g;
    g.kind = kg::GraphKind::life_memory;
    EXPECT_THROW(kg::find_current_activity(g, TimeOfDay(8, 0)), WrongGraphKind);
}

TEST(CurrentActivity, MatchesBruteForceOnRandomSchedules) {
    Rng rng(2024);
    for (int i = 0; i < 300; ++i) {
        const auto g = random_schedule(rng, std::uniform_int_distribution<int>(0, 12)(rng));
        std::vector<int> probes = {0, TimeOfDay::kMinutesPerDay - 1};
        for (const auto& a : g.activities) {
            probes.push_back(a.slot.start.minutes());
            probes.push_back(std::max(0, a.slot.start.minutes() - 1));
            probes.push_back(std::min(TimeOfDay::kMinutesPerDay - 1, a.slot.end.minutes()));
        }
        for (int t : probes) {
            const auto got = kg::find_current_activity(g, TimeOfDay(t));
            const auto want = brute_force_current(g, TimeOfDay(t));
            ASSERT_EQ(got.has_value(), want.has_value()) << "schedule " << i << " t=" << t;
            if (got) ASSERT_EQ(got->id, *want);
        }
    }
}

TEST(CandidateNodes, TokenBagIncludesParticipants) {
    kg::KnowledgeGraph g;
    g.persons.push_back({"person:anna", "Anna", kg::PersonRole::caregiver, std::nullopt, {}});
    g.activities.push_back({"activity:walk", "morning walk", {TimeOfDay(9, 0), TimeOfDay(10, 0)}, "garden", "stroll"});
    g.edges.push_back({"person:anna", "activity:walk", kg::Relation::participates});
    const auto views = kg::candidate_nodes(g);
    ASSERT_EQ(views.size(), 2u);
    const auto& walk = views[0].id == "activity:walk" ? views[0] : views[1];
    for (const char* t : {"morning", "walk", "garden", "anna"}) EXPECT_TRUE(walk.has_token(t)) << t;
    EXPECT_TRUE(std::is_sorted(walk.tokens.begin(), walk.tokens.end()));
}

TEST(CandidateNodes, OrderedById) {
    Rng rng(5);
    const auto g = random_daily_graph(rng, 5, 7);
    const auto views = kg::candidate_nodes(g);
    ASSERT_EQ(views.size(), g.node_count());
    EXPECT_TRUE(std::is_sorted(views.begin(), views.end(), [](const auto& a, const auto& b) { return a.id < b.id; }));
}

TEST(GraphIo, BundledRoutineGraphLoads) {
    const auto g = kg::load_graph_file(sample_dir() / "P001" / "routine_graph.json");
    EXPECT_EQ(g.kind, kg::GraphKind::daily_routine);
    EXPECT_EQ(std::count_if(g.persons.begin(), g.persons.end(),
                            [](const auto& p) { return p.role == kg::PersonRole::patient; }),
              1);
    EXPECT_TRUE(std::any_of(g.persons.begin(), g.persons.end(),
                            [](const auto& p) { return p.role == kg::PersonRole::caregiver; }));
    EXPECT_GE(g.activities.size(), 10u);
}

TEST(GraphIo, BundledGraphsRoundTripByteStable) {
    for (const char* name : {"routine_graph.json", "memory_graph.json"}) {
        const auto text = read_file(sample_dir() / "P001" / name);
        EXPECT_EQ(kg::save_graph(kg::load_graph(text)), text) << name;
    }
}

TEST(GraphIo, EmptyMemoryGraphIsValid) {
    const auto g =
        kg::load_graph(R"({"kind":"life_memory","persons":[],"events":[],"activities":[],"edges":[]})");
    EXPECT_EQ(g.kind, kg::GraphKind::life_memory);
    EXPECT_EQ(g.node_count(), 0u);
}

TEST(GraphIo, RandomGraphsRoundTrip) {
    Rng rng(99);
    for (int i = 0; i < 100; ++i) {
        auto g = i % 2 ? random_daily_graph(rng, 1 + i % 6, i % 9) : random_memory_graph(rng, 1 + i % 6, i % 9);
        const auto first = kg::save_graph(g);
        const auto loaded = kg::load_graph(first);
        EXPECT_EQ(loaded, kg::canonical(g));
        EXPECT_TRUE(kg::equivalent(loaded, g));
        EXPECT_EQ(kg::save_graph(loaded), first);
    }
}

TEST(GraphIo, MalformedDocumentsAreParseErrors) {
    for (const char* doc : {"", "not json", "[]", R"({"kind":"daily_routine","persons":{}})",
                            R"({"kind":"weekly","persons":[],"events":[],"activities":[],"edges":[]})",
                            R"({"kind":"daily_routine","persons":[{"id":"person:a"}],"events":[],"activities":[],"edges":[]})",
                            R"({"kind":"daily_routine","persons":[],"events":[],"activities":[{"id":"activity:x","name":"x","slot":{"start":"8am","end":"09:00"},"location":"room","description":""}],"edges":[]})"}) {
        EXPECT_THROW(kg::load_graph(doc), ParseError) << doc;
    }
}

TEST(GraphIo, MissingArraysAreEmpty) {
    const auto g = kg::load_graph(R"({"kind":"life_memory"})");
    EXPECT_EQ(g.kind, kg::GraphKind::life_memory);
    EXPECT_EQ(g.node_count(), 0u);
}

class InvalidDocument : public ::testing::TestWithParam<InvalidCase> {};

TEST_P(InvalidDocument, RaisesNamedValidationError) {
    const auto& c = GetParam();
    try {
        kg::load_graph(c.document);
        FAIL() << "accepted " << c.name;
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.code(), c.expected) << c.name << ": " << e.what();
    }
}

INSTANTIATE_TEST_SUITE_P(Crafted, InvalidDocument, ::testing::ValuesIn(invalid_graph_cases()),
                         [](const auto& info) { return info.param.name; });

TEST(InvalidDocuments, ThereAreFiftyCoveringEveryGraphInvariant) {
    const auto cases = invalid_graph_cases();
    EXPECT_EQ(cases.size(), 50u);
    std::set<ValidationCode> codes;
    for (const auto& c : cases) codes.insert(c.expected);
    EXPECT_EQ(codes.size(), 11u);
}

TEST(Validate, CanonicalSortsEdges) {
    kg::KnowledgeGraph g;
    g.persons = {{"person:b", "B", kg::PersonRole::family, std::nullopt, {}},
                 {"person:a", "A", kg::PersonRole::patient, std::nullopt, {}}};
    g.activities = {{"activity:x", "x", {TimeOfDay(1, 0), TimeOfDay(2, 0)}, "room", ""}};
    g.edges = {{"person:b", "activity:x", kg::Relation::participates},
               {"person:a", "activity:x", kg::Relation::supervises}};
    const auto c = kg::canonical(g);
    EXPECT_EQ(c.persons.front().id, "person:a");
    EXPECT_EQ(c.edges.front().source, "person:a");
    EXPECT_NO_THROW(kg::validate(c));
}
