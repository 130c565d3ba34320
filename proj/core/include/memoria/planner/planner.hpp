#pragma once

#include "memoria/errors.hpp"
#include "memoria/query/analysis.hpp"
#include "memoria/retrieval/retrieval.hpp"

#include <nlohmann/json.hpp>

#include <exception>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace memoria::llm {
class Gateway;
}

namespace memoria::planner {

inline constexpr std::size_t kMaxKeywords = 32;

struct PlannerConfig {
    double threshold = 0.7; // efficiency needed to answer
    int max_attempts = 3;
    std::size_t top_k = retrieval::kDefaultTopK;
};

/// Throws PreconditionError unless 0 < threshold <= 1, max_attempts >= 1, top_k >= 1.
void validate(const PlannerConfig& config);

struct IterationTrace {
    int attempt = 1;
    retrieval::GraphWeights weights_used;
    query::KeywordSet keywords_used;
    retrieval::CandidateSet candidates;
    double efficiency = 0.0;
    std::optional<retrieval::GraphWeights> weight_adjustment; // weights after the reflection step
    std::optional<std::string> adjustment_rejected;          // why a proposal was discarded
    std::vector<std::string> keywords_added;

    bool operator==(const IterationTrace&) const = default;
};

struct Generated {
    std::string text;
    std::vector<std::string> provenance; // node ids shown to the model

    bool operator==(const Generated&) const = default;
};

struct FollowUp {
    std::string prompt_text;

    bool operator==(const FollowUp&) const = default;
};

struct PlannerResponse {
    std::variant<Generated, FollowUp> outcome;
    std::vector<IterationTrace> trace;
    query::QueryDecomposition decomposition;

    bool generated() const noexcept { return std::holds_alternative<Generated>(outcome); }
    /// Generated text or follow-up question.
    const std::string& text() const;
    bool operator==(const PlannerResponse&) const = default;
};

/// A model call failed mid-run. Carries the attempts completed so far.
class PlannerAborted : public Error {
public:
    PlannerAborted(const std::string& what, std::vector<IterationTrace> trace, std::exception_ptr cause)
        : Error(what), trace_(std::move(trace)), cause_(std::move(cause)) {}

    const std::vector<IterationTrace>& trace() const noexcept { return trace_; }
    std::exception_ptr cause() const noexcept { return cause_; }

private:
    std::vector<IterationTrace> trace_;
    std::exception_ptr cause_;
};

/// What the evaluation and generation prompts get to see besides the nodes.
struct TurnContext {
    const query::DialogueTurn& turn;
    const retrieval::GraphPair& graphs;
    const query::KeywordSet& keywords;
    const query::QueryDecomposition& decomposition;
};

/// Runs the self-reflection loop: search, evaluate, then either answer or
/// re-weight the graphs, widen the keywords and try again, up to
/// max_attempts; a follow-up question is returned when every attempt scores
/// below the threshold. Throws PreconditionError for bad input and
/// PlannerAborted when a model call fails.
PlannerResponse run(const query::DialogueTurn& turn, const retrieval::GraphPair& graphs, const llm::Gateway& gateway,
                    const PlannerConfig& config = {});

/// One search and one answer, no reflection: the trace has exactly one
/// entry whose efficiency is recorded but does not gate generation. Falls
/// back to a follow-up only when nothing at all was retrieved.
PlannerResponse run_single_pass(const query::DialogueTurn& turn, const retrieval::GraphPair& graphs,
                                const llm::Gateway& gateway, const PlannerConfig& config = {},
                                retrieval::SearchScope scope = retrieval::SearchScope::both);

/// Efficiency of a candidate set in [0, 1]; 0 without a model call when the set is empty.
double evaluate(const retrieval::CandidateSet& candidates, const TurnContext& context, const llm::Gateway& gateway);

struct WeightAdjustment {
    retrieval::GraphWeights weights;
    std::optional<std::string> rejected;
};

/// Asks the model for new weights, then normalizes, clamps to
/// [kMinWeight, kMaxWeight] and normalizes again. Proposals that are negative,
/// non-finite or sum to zero are discarded in favour of `current`.
WeightAdjustment adjust_weights(const retrieval::GraphWeights& current, const llm::Gateway& gateway,
                                const IterationTrace& last);

/// Validation and bounding applied to a raw proposal.
WeightAdjustment bound_weights(const retrieval::GraphWeights& current, double daily, double memory);

struct KeywordExpansion {
    query::KeywordSet keywords;
    std::vector<std::string> added;
};

/// Union with model-suggested terms, normalized like dialogue keywords and
/// capped at kMaxKeywords (existing keywords are never dropped).
KeywordExpansion expand_keywords(const query::KeywordSet& keywords, const llm::Gateway& gateway);

/// Merges normalized `suggestions` into `keywords` under the cap.
KeywordExpansion merge_suggestions(const query::KeywordSet& keywords, const std::vector<std::string>& suggestions);

/// Decomposition categories none of whose terms were matched by the final candidates.
std::vector<query::Category> unresolved_categories(const query::QueryDecomposition& decomposition,
                                                   const retrieval::CandidateSet& candidates,
                                                   const retrieval::GraphPair& graphs,
                                                   const query::KeywordSet& keywords);

std::string build_followup_prompt(const query::DialogueTurn& turn, const query::QueryDecomposition& decomposition,
                                  const std::vector<IterationTrace>& trace, const retrieval::GraphPair& graphs,
                                  const llm::Gateway& gateway);

/// Grounded answer from a non-empty candidate set. Provenance lists every
/// node included in the prompt. Throws PreconditionError on an empty set.
Generated generate_response(const retrieval::CandidateSet& candidates, const query::DialogueTurn& turn,
                            const retrieval::GraphPair& graphs, const llm::Gateway& gateway);

nlohmann::json to_json(const IterationTrace& t);
nlohmann::json to_json(const PlannerResponse& r);

} // namespace memoria::planner
