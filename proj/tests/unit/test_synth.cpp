#include "memoria/errors.hpp"
#include "memoria/synth/corpus.hpp"
#include "memoria/vocabulary.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace memoria;
using namespace memoria::testing;
using nlohmann::json;

namespace {

synth::PatientProfile profile() {
    synth::PatientProfile p;
    p.id = "P001";
    p.name = "Helen Taylor";
    p.age = 84;
    p.family = {{"Robert", "son"}};
    p.friends = {"Norman"};
    p.caregivers = {"Anna"};
    return p;
}

} // namespace

TEST(BuildGraphs, CaregiverSupervisesOthersParticipate) {
    synth::DailyLogEntry breakfast{{TimeOfDay(8, 0), TimeOfDay(9, 0)}, "Breakfast", "dining room", {"Anna", "Robert"},
                                   "Breakfast with nurse Anna"};
    const auto g = synth::build_graphs(profile(), {breakfast}, {});
    ASSERT_EQ(g.daily.activities.size(), 1u);
    EXPECT_EQ(g.daily.activities[0].slot.start, TimeOfDay(8, 0));
    bool anna = false;
    bool robert = false;
    for (const auto& e : g.daily.edges) {
        if (e.source == "person:anna") anna = e.relation == kg::Relation::supervises;
        if (e.source == "person:robert") robert = e.relation == kg::Relation::participates;
    }
    EXPECT_TRUE(anna);
    EXPECT_TRUE(robert);
    EXPECT_EQ(g.memory.node_count(), 0u);
}

TEST(BuildGraphs, InterviewEventsBecomeMemories) {
    synth::InterviewSummary s{{"Robert", "son"},
                              {{"Fishing trip", kg::YearRange{1971, 1972}, "Caught a trout", "joyful", {"Robert"}}}};
    synth::DailyLogEntry walk{{TimeOfDay(9, 0), TimeOfDay(10, 0)}, "Walk", "garden", {}, "A walk"};
    const auto g = synth::build_graphs(profile(), {walk}, {s});
    ASSERT_EQ(g.memory.events.size(), 1u);
    EXPECT_DOUBLE_EQ(g.memory.events[0].impact.valence, synth::tone_valence("joyful"));
    EXPECT_GT(synth::tone_valence("joyful"), 0.0);
    EXPECT_LT(synth::tone_valence("sad"), 0.0);
    EXPECT_EQ(synth::tone_valence("unheard-of"), 0.0);
    EXPECT_NO_THROW(kg::validate(g.memory));
}

TEST(BuildGraphs, UnknownParticipantIsNamed) {
    synth::DailyLogEntry e{{TimeOfDay(8, 0), TimeOfDay(9, 0)}, "Breakfast", "dining room", {"Stranger"}, "x"};
    try {
        synth::build_graphs(profile(), {e}, {});
        FAIL();
    } catch (const ValidationError& err) {
        EXPECT_EQ(err.code(), ValidationCode::unknown_person);
    }
}

TEST(Slug, Lowercases) {
    EXPECT_EQ(synth::slug("Mary Ann"), "mary-ann");
    EXPECT_EQ(synth::slug("  Tea & Cake! "), "tea-cake");
}

TEST(Corpus, PerPatientEightClearTwoConfused) {
    const auto gw = mock_gateway();
    const auto c = synth::generate_corpus(12, 7, *gw);
    ASSERT_EQ(c.patients.size(), 12u);
    std::set<synth::ConfusionType> types;
    for (const auto& p : c.patients) {
        ASSERT_EQ(p.draft.dialogues.size(), static_cast<std::size_t>(synth::kDialoguesPerPatient));
        int confused = 0;
        for (const auto& d : p.draft.dialogues) {
            if (d.kind == synth::DialogueKind::confused) {
                ++confused;
                ASSERT_TRUE(d.confusion_type);
                types.insert(*d.confusion_type);
            } else {
                EXPECT_FALSE(d.confusion_type);
            }
            EXPECT_FALSE(d.reference.empty());
            EXPECT_FALSE(d.expected_terms.empty());
        }
        EXPECT_EQ(confused, synth::kConfusedPerPatient);
        EXPECT_NO_THROW(kg::validate(p.daily));
        EXPECT_NO_THROW(kg::validate(p.memory));
    }
    EXPECT_EQ(types.size(), synth::kConfusionTypes.size());
}

TEST(Corpus, ConfusionTypesCoverAllForAnySeedFromNinePatients) {
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 123456789ULL}) {
        std::set<synth::ConfusionType> types;
        for (int i = 0; i < 9; ++i) {
            for (int j = 0; j < synth::kConfusedPerPatient; ++j) types.insert(synth::confusion_type_for(seed, i, j));
        }
        EXPECT_EQ(types.size(), 9u) << seed;
    }
}

TEST(Corpus, DeterministicAndIndependentOfJobs) {
    const auto gw = mock_gateway();
    const auto a = synth::generate_corpus(6, 99, *gw, 1);
    const auto b = synth::generate_corpus(6, 99, *gw, 3);
    EXPECT_EQ(a, b);
    const auto c = synth::generate_corpus(6, 100, *gw, 1);
    EXPECT_NE(a, c);
    EXPECT_NE(synth::patient_seed(1, 0), synth::patient_seed(1, 1));
}

TEST(Corpus, PatientIdsAndDialogueIds) {
    const auto gw = mock_gateway();
    const auto c = synth::generate_corpus(3, 1, *gw);
    EXPECT_EQ(c.patients[2].id(), "P003");
    EXPECT_EQ(c.patients[0].draft.dialogues[0].id, "P001-D01");
    EXPECT_NE(c.find("P002"), nullptr);
    EXPECT_EQ(c.find("P999"), nullptr);
    EXPECT_EQ(c.dialogue_count(), 30u);
}

TEST(Corpus, WriteLoadRoundTrip) {
    TempDir dir("corpus");
    const auto gw = mock_gateway();
    const auto c = synth::generate_corpus(4, 5, *gw);
    synth::write_corpus(c, dir.path());
    EXPECT_TRUE(std::filesystem::exists(dir.path() / "manifest.json"));
    EXPECT_TRUE(std::filesystem::exists(dir.path() / "P004" / "dialogues.jsonl"));
    EXPECT_EQ(synth::load_corpus(dir.path()), c);
    const auto m = synth::manifest(c);
    EXPECT_EQ(m.at("patients"), 4);
    EXPECT_EQ(m.at("clear"), 32);
    EXPECT_EQ(m.at("confused"), 8);
}

TEST(Corpus, RejectsZeroPatients) {
    const auto gw = mock_gateway();
    EXPECT_THROW(synth::generate_corpus(0, 1, *gw), PreconditionError);
}

TEST(Corpus, LoadRejectsMissingManifest) {
    TempDir dir("empty");
    EXPECT_THROW(synth::load_corpus(dir.path()), Error);
}

TEST(CheckDraft, RejectsWrongConfusedCount) {
    synth::TemplateSource src;
    auto d = src.draft(0, synth::patient_seed(1, 0), 1);
    EXPECT_NO_THROW(synth::check_draft(d));
    for (auto& item : d.dialogues) {
        if (item.kind == synth::DialogueKind::clear) {
            item.kind = synth::DialogueKind::confused;
            item.confusion_type = synth::ConfusionType::environmental;
            break;
        }
    }
    EXPECT_THROW(synth::check_draft(d), SchemaError);
}

TEST(CheckDraft, RejectsProfileWithoutFamily) {
    auto p = profile();
    p.family.clear();
    EXPECT_THROW(synth::validate(p), SchemaError);
}

TEST(GatewaySource, AcceptsValidModelDraft) {
    synth::TemplateSource templates;
    const auto good = templates.draft(0, synth::patient_seed(3, 0), 3);
    auto backend = std::make_shared<ScriptedBackend>();
    int n = 0;
    backend->on(llm::Task::synthesize, [&](const llm::GatewayRequest&) {
        // first answer breaks the schema, the repair is valid
        return ++n == 1 ? std::string(R"({"profile": {}})") : synth::to_json(good).dump();
    });
    llm::Gateway gw(backend);
    synth::GatewaySource source(gw);
    const auto d = source.draft(0, synth::patient_seed(3, 0), 3);
    EXPECT_EQ(d.profile.id, "P001");
    EXPECT_EQ(d.dialogues, good.dialogues);
    EXPECT_EQ(n, 2);
}

TEST(GatewaySource, PersistentSchemaFailureIsSchemaError) {
    auto backend = std::make_shared<ScriptedBackend>();
    backend->on(llm::Task::synthesize, [](const llm::GatewayRequest&) { return std::string(R"({"profile": 1})"); });
    llm::Gateway gw(backend);
    synth::GatewaySource source(gw);
    EXPECT_THROW(synth::generate_corpus(1, 1, source), SchemaError);
}

TEST(DraftJson, RoundTrips) {
    synth::TemplateSource src;
    const auto d = src.draft(4, synth::patient_seed(9, 4), 9);
    EXPECT_EQ(synth::draft_from_json(synth::to_json(d)), d);
    EXPECT_EQ(synth::parse_confusion_type("wrong_location"), synth::ConfusionType::wrong_location);
    EXPECT_THROW(synth::parse_confusion_type("amnesia"), ParseError);
}

TEST(TemplateSource, FamilyRelationsMatchNames) {
    const auto gw = mock_gateway();
    const auto c = synth::generate_corpus(40, 3, *gw);
    const std::set<std::string> women(vocab::kFemaleFamilyNames.begin(), vocab::kFemaleFamilyNames.end());
    const std::set<std::string> female_relations(vocab::kFemaleRelations.begin(), vocab::kFemaleRelations.end());
    for (const auto& p : c.patients) {
        for (const auto& r : p.draft.profile.family) {
            EXPECT_EQ(women.contains(r.name), female_relations.contains(r.relation)) << r.name << " " << r.relation;
        }
    }
}
