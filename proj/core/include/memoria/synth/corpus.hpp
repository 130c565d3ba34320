#pragma once

#include "memoria/kg/graph.hpp"
#include "memoria/time.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace memoria::llm {
class Gateway;
}

namespace memoria::synth {

inline constexpr std::string_view kGeneratorVersion = "memoria-synth-1";
inline constexpr int kDialoguesPerPatient = 10;
inline constexpr int kConfusedPerPatient = 2;

struct Relative {
    std::string name;
    std::string relation; // "daughter", "son", ...

    bool operator==(const Relative&) const = default;
};

struct PatientProfile {
    std::string id; // "P001"
    std::string name;
    int age = 0;
    std::string stage = "mild";
    std::vector<Relative> family;
    std::vector<std::string> friends;
    std::vector<std::string> caregivers;

    bool operator==(const PatientProfile&) const = default;
};

/// Throws SchemaError when the profile has no family member or no id/name.
void validate(const PatientProfile& profile);

struct DailyLogEntry {
    TimeSlot slot;
    std::string activity;
    std::string location;
    std::vector<std::string> participants; // names from the profile
    std::string description;

    bool operator==(const DailyLogEntry&) const = default;
};

struct RecalledEvent {
    std::string title;
    kg::Occurrence period;
    std::string description;
    std::string tone; // joyful, warm, proud, nostalgic, bittersweet, sad
    std::vector<std::string> participants;

    bool operator==(const RecalledEvent&) const = default;
};

struct InterviewSummary {
    Relative interviewee;
    std::vector<RecalledEvent> events;

    bool operator==(const InterviewSummary&) const = default;
};

/// Valence in [-1, 1] for an emotional tone; unknown tones map to 0.
double tone_valence(std::string_view tone) noexcept;

enum class DialogueKind { clear, confused };

enum class ConfusionType {
    past_and_present,
    misremembered_activity,
    nonexistent_appointment,
    current_date,
    wrong_location,
    repeated_question,
    life_stage,
    vague_statement,
    environmental,
};

inline constexpr std::array kConfusionTypes = {
    ConfusionType::past_and_present,  ConfusionType::misremembered_activity, ConfusionType::nonexistent_appointment,
    ConfusionType::current_date,      ConfusionType::wrong_location,         ConfusionType::repeated_question,
    ConfusionType::life_stage,        ConfusionType::vague_statement,        ConfusionType::environmental};

std::string_view to_string(DialogueKind kind) noexcept;
DialogueKind parse_dialogue_kind(std::string_view text);
std::string_view to_string(ConfusionType type) noexcept;
ConfusionType parse_confusion_type(std::string_view text);

struct DialogueItem {
    std::string id; // "P001-D03"
    std::string text;
    DialogueKind kind = DialogueKind::clear;
    std::optional<ConfusionType> confusion_type;
    std::string reference;                   // ground-truth answer
    Timestamp timestamp{};
    std::vector<std::string> expected_terms; // lowercase facts a grounded answer names

    bool operator==(const DialogueItem&) const = default;
};

/// Raw material for one patient, as produced by a content source.
struct PatientDraft {
    PatientProfile profile;
    std::vector<DailyLogEntry> daily_log;
    std::vector<InterviewSummary> interviews;
    std::vector<DialogueItem> dialogues;

    bool operator==(const PatientDraft&) const = default;
};

struct PatientRecord {
    PatientDraft draft;
    kg::KnowledgeGraph daily;
    kg::KnowledgeGraph memory;

    const std::string& id() const noexcept { return draft.profile.id; }
    bool operator==(const PatientRecord&) const = default;
};

struct Corpus {
    std::uint64_t seed = 0;
    std::string generator_version{kGeneratorVersion};
    std::vector<PatientRecord> patients;

    std::size_t dialogue_count() const;
    const PatientRecord* find(std::string_view patient_id) const;
    bool operator==(const Corpus&) const = default;
};

struct GraphPairResult {
    kg::KnowledgeGraph daily;
    kg::KnowledgeGraph memory;
};

/// Log entries become activities with participates/supervises edges
/// (caregivers supervise); interview events become memory events with
/// experienced edges. Both graphs are validated. Throws ValidationError,
/// including unknown_person for names missing from the profile.
GraphPairResult build_graphs(const PatientProfile& profile, const std::vector<DailyLogEntry>& log,
                             const std::vector<InterviewSummary>& interviews);

/// "Mary Ann" -> "mary-ann".
std::string slug(std::string_view text);

class ContentSource {
public:
    virtual ~ContentSource() = default;
    /// Draft for patient `index` (0-based). `patient_seed` is derived from the
    /// corpus seed and the index, so patients can be drafted independently.
    virtual PatientDraft draft(int index, std::uint64_t patient_seed, std::uint64_t corpus_seed) = 0;
};

/// Fills fixed templates from the shared vocabulary. Deterministic in the seeds.
class TemplateSource final : public ContentSource {
public:
    PatientDraft draft(int index, std::uint64_t patient_seed, std::uint64_t corpus_seed) override;
};

/// Asks the model (synthesize task) for each patient draft and checks it
/// against the corpus schema; drafts that still fail after the retry budget
/// raise SchemaError.
class GatewaySource final : public ContentSource {
public:
    explicit GatewaySource(const llm::Gateway& gateway) : gateway_(gateway) {}
    PatientDraft draft(int index, std::uint64_t patient_seed, std::uint64_t corpus_seed) override;

private:
    const llm::Gateway& gateway_;
};

/// Throws SchemaError unless the draft has a valid profile, a non-empty log
/// without duplicated slots, interview events naming profile people, and
/// 10 dialogues of which exactly 2 are confused.
void check_draft(const PatientDraft& draft);

/// Confusion type of confused dialogue `j` of patient `index`.
ConfusionType confusion_type_for(std::uint64_t corpus_seed, int index, int j) noexcept;

std::uint64_t patient_seed(std::uint64_t corpus_seed, int index) noexcept;

/// Throws PreconditionError when n_patients < 1.
Corpus generate_corpus(int n_patients, std::uint64_t seed, ContentSource& source, int jobs = 1);
/// Template source for the mock backend, model source otherwise.
Corpus generate_corpus(int n_patients, std::uint64_t seed, const llm::Gateway& gateway, int jobs = 1);

/// One directory per patient plus manifest.json. Files are written atomically.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);
/// Reads what write_corpus wrote; graphs go through kg validation.
Corpus load_corpus(const std::filesystem::path& dir);

nlohmann::json manifest(const Corpus& corpus);

nlohmann::json to_json(const PatientProfile& p);
nlohmann::json to_json(const DailyLogEntry& e);
nlohmann::json to_json(const InterviewSummary& s);
nlohmann::json to_json(const DialogueItem& d);
nlohmann::json to_json(const PatientDraft& d);
PatientProfile profile_from_json(const nlohmann::json& doc);
DailyLogEntry log_entry_from_json(const nlohmann::json& doc);
InterviewSummary interview_from_json(const nlohmann::json& doc);
DialogueItem dialogue_from_json(const nlohmann::json& doc);
/// All decoders throw ParseError on structural problems.
PatientDraft draft_from_json(const nlohmann::json& doc);

} // namespace memoria::synth
