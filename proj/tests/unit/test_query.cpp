#include "memoria/errors.hpp"
#include "memoria/query/analysis.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace memoria;
using namespace memoria::testing;

TEST(Stopwords, CommonFunctionWords) {
    for (const char* w : {"did", "by", "in", "the", "a", "is", "will", "this"}) EXPECT_TRUE(query::is_stopword(w)) << w;
    for (const char* w : {"tom", "kitchen", "lunch", "garden"}) EXPECT_FALSE(query::is_stopword(w)) << w;
}

TEST(ExtractKeywords, PastAndPresentConfusionExample) {
    const auto k = query::extract_keywords(
        turn("Did Tom come by earlier? I thought I heard him talking in the kitchen."));
    for (const char* w : {"tom", "kitchen", "talking", "heard", "earlier"}) EXPECT_TRUE(k.contains(w)) << w;
    for (const char* w : {"did", "by", "i", "in", "the"}) EXPECT_FALSE(k.contains(w)) << w;
}

TEST(ExtractKeywords, FirstOccurrenceOrderWithoutRepeats) {
    const auto k = query::extract_keywords(turn("Lunch? Lunch in the garden, garden lunch."));
    EXPECT_EQ(k.words(), (std::vector<std::string>{"lunch", "garden"}));
}

TEST(ExtractKeywords, OnlyStopwordsIsEmptyQuery) {
    EXPECT_THROW(query::extract_keywords(turn("Is it the same?")), EmptyQuery);
}

TEST(ExtractKeywords, BlankTurnIsPrecondition) {
    EXPECT_THROW(query::validate(turn("   ")), PreconditionError);
}

TEST(KeywordSet, InsertionOrderedSet) {
    query::KeywordSet k;
    EXPECT_TRUE(k.insert("tom"));
    EXPECT_TRUE(k.insert("kitchen"));
    EXPECT_FALSE(k.insert("tom"));
    EXPECT_EQ(k.size(), 2u);
    EXPECT_TRUE((query::KeywordSet{"tom"}).subset_of(k));
    EXPECT_FALSE(k.subset_of(query::KeywordSet{"tom"}));
}

TEST(Decompose, NonExistentAppointmentExample) {
    const auto gw = mock_gateway();
    const auto q = query::decompose(turn("Will Sarah visit this afternoon?"), *gw);
    EXPECT_EQ(q.persons, (std::vector<std::string>{"sarah"}));
    EXPECT_EQ(q.events, (std::vector<std::string>{"visit"}));
    EXPECT_TRUE(q.locations.empty());
    EXPECT_TRUE(q.items.empty());
}

TEST(Decompose, BlankTurnMakesNoCall) {
    const auto gw = mock_gateway();
    EXPECT_THROW(query::decompose(turn(" "), *gw), PreconditionError);
    EXPECT_EQ(gw->call_count(), 0u);
}

TEST(Normalize, TrimsLowercasesAndDedupes) {
    query::QueryDecomposition q;
    q.persons = {"  Sarah ", "sarah", "", "Mary  Ann"};
    q.locations = {"Kitchen"};
    const auto n = query::normalize(q);
    EXPECT_EQ(n.persons, (std::vector<std::string>{"sarah", "mary ann"}));
    EXPECT_EQ(n.locations, (std::vector<std::string>{"kitchen"}));
}

TEST(MergeDecomposition, AppendsCategoryTermsAfterKeywords) {
    query::QueryDecomposition q;
    q.persons = {"mary ann"};
    q.events = {"the visit"};
    const auto k = query::merge_decomposition(query::KeywordSet{"visit"}, q);
    EXPECT_EQ(k.words(), (std::vector<std::string>{"visit", "mary", "ann"}));
}
