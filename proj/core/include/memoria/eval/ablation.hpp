#pragma once

#include "memoria/eval/metrics.hpp"
#include "memoria/planner/planner.hpp"
#include "memoria/synth/corpus.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace memoria::eval {

enum class Variant {
    baseline1, // routine graph only, one pass
    baseline2, // both graphs, one pass
    full,      // both graphs and the reflection loop
};

inline constexpr std::array kVariants = {Variant::baseline1, Variant::baseline2, Variant::full};

std::string_view to_string(Variant v) noexcept;
Variant parse_variant(std::string_view text);

struct AblationConfig {
    Variant variant = Variant::full;
    planner::PlannerConfig planner;
};

/// Answers one turn the way `config.variant` prescribes.
planner::PlannerResponse answer(const AblationConfig& config, const query::DialogueTurn& turn,
                                const retrieval::GraphPair& graphs, const llm::Gateway& gateway);

struct ItemResult {
    std::string dialogue_id;
    std::string patient_id;
    synth::DialogueKind kind = synth::DialogueKind::clear;
    std::optional<synth::ConfusionType> confusion_type;
    std::string response;
    bool generated = false;
    std::vector<std::string> provenance;
    std::vector<std::string> memory_provenance; // provenance ids found in the memory graph
    std::size_t trace_length = 0;
    MetricScores metrics;
    JudgeScores judge;
    std::optional<std::string> error; // set when the item could not be answered or scored
};

struct Aggregate {
    std::size_t count = 0;
    MetricScores metrics;
    JudgeScores judge;
};

struct EvalReport {
    Variant variant = Variant::full;
    std::vector<ItemResult> items;
    Aggregate clear;
    Aggregate confused;
    Aggregate overall;
    std::size_t failed = 0;
};

/// Arithmetic means over the items that have no error.
void aggregate(EvalReport& report);

struct GoldEntry {
    std::string dialogue_id;
    std::optional<std::string> gold_response;
    std::optional<JudgeScores> scores;
};

struct GoldSet {
    std::map<std::string, GoldEntry> entries;

    const GoldEntry* find(std::string_view id) const;
    /// Mean of every supplied score set; none when no entry carries scores.
    std::optional<JudgeScores> row() const;
};

/// One JSON object per line: {dialogue_id, gold_response?, scores?}. Blank
/// lines are skipped. Throws ParseError.
GoldSet parse_gold_jsonl(std::string_view text);
GoldSet load_gold_file(const std::filesystem::path& path);

struct AblationOptions {
    JudgeMode judge_mode = JudgeMode::blind;
    int jobs = 1;
    const GoldSet* gold = nullptr;
    const llm::Gateway* judge_gateway = nullptr; // defaults to the answering gateway
};

struct AblationResult {
    std::vector<EvalReport> reports;
    std::optional<JudgeScores> gold;
    /// variant -> score / gold * 10, present only with gold scores.
    std::map<Variant, JudgeScores> normalized;

    const EvalReport* report(Variant v) const;
};

/// Answers and scores every dialogue of the corpus under each config. Item
/// failures are recorded on the item and do not stop the batch.
AblationResult run_ablation(const synth::Corpus& corpus, const std::vector<AblationConfig>& configs,
                            const llm::Gateway& gateway, EmbeddingBackend& embeddings,
                            const AblationOptions& options = {});

/// score / gold * 10 per dimension; 0 where gold is 0.
JudgeScores normalize(const JudgeScores& scores, const JudgeScores& gold);

/// Clear / confused / overall rows with ROUGE-1 and semantic similarity columns.
std::string metrics_table(const EvalReport& report);
/// Judge scores per variant plus the gold row when available.
std::string judge_table(const AblationResult& result);

nlohmann::json to_json(const ItemResult& item);
nlohmann::json to_json(const Aggregate& a);
nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const AblationResult& result);
/// {dimensions, gold, series: [{variant, raw, normalized?}]}; `normalized` is
/// false and the ratios are omitted when there is no gold row.
nlohmann::json radar_json(const AblationResult& result);

} // namespace memoria::eval
