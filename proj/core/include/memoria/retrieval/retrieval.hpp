#pragma once

#include "memoria/kg/graph.hpp"
#include "memoria/kg/query.hpp"
#include "memoria/query/analysis.hpp"
#include "memoria/time.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace memoria::retrieval {

inline constexpr double kMinWeight = 0.1;
inline constexpr double kMaxWeight = 0.9;
inline constexpr std::size_t kDefaultTopK = 3;

/// Retrieval priority of the two graphs. Sums to 1.
struct GraphWeights {
    double daily = 0.5;
    double memory = 0.5;

    double weight_for(kg::GraphKind kind) const noexcept {
        return kind == kg::GraphKind::daily_routine ? daily : memory;
    }
    bool operator==(const GraphWeights&) const = default;
};

struct ScoredNode {
    std::string node_id;
    kg::GraphKind graph_kind = kg::GraphKind::daily_routine;
    kg::NodeKind node_kind = kg::NodeKind::person;
    std::string label;
    double relevance = 0.0;
    double score = 0.0; // relevance * weight of its graph
    std::vector<std::string> matched_keywords;

    bool operator==(const ScoredNode&) const = default;
};

struct CandidateSet {
    std::optional<kg::ActivityNode> current_activity;
    std::vector<ScoredNode> daily_hits;  // score descending, then id
    std::vector<ScoredNode> memory_hits;

    bool empty() const noexcept { return !current_activity && daily_hits.empty() && memory_hits.empty(); }
    /// Current activity, then daily hits, then memory hits; duplicates dropped.
    std::vector<std::string> node_ids() const;
    bool operator==(const CandidateSet&) const = default;
};

/// Both graphs of one patient with their searchable views built once.
/// Immutable after construction; share freely between threads.
class GraphPair {
public:
    /// Validates both graphs and their kinds. Throws ValidationError / WrongGraphKind.
    GraphPair(kg::KnowledgeGraph daily, kg::KnowledgeGraph memory);

    const kg::KnowledgeGraph& daily() const noexcept { return daily_; }
    const kg::KnowledgeGraph& memory() const noexcept { return memory_; }
    const std::vector<kg::NodeView>& daily_views() const noexcept { return daily_views_; }
    const std::vector<kg::NodeView>& memory_views() const noexcept { return memory_views_; }

private:
    kg::KnowledgeGraph daily_;
    kg::KnowledgeGraph memory_;
    std::vector<kg::NodeView> daily_views_;
    std::vector<kg::NodeView> memory_views_;
};

/// Share of keywords present in the node's token bag. Throws EmptyKeywords.
double relevance(const kg::NodeView& node, const query::KeywordSet& keywords);

ScoredNode score_node(const kg::NodeView& node, const query::KeywordSet& keywords, const GraphWeights& weights);

enum class SearchScope { both, daily_only };

/// Current activity plus the top_k positively scored nodes of each graph
/// (ties by ascending id). Throws EmptyKeywords, PreconditionError for top_k == 0.
CandidateSet search(const GraphPair& graphs, const query::KeywordSet& keywords, const GraphWeights& weights,
                    Timestamp now, std::size_t top_k = kDefaultTopK, SearchScope scope = SearchScope::both);

nlohmann::json to_json(const GraphWeights& w);
nlohmann::json to_json(const ScoredNode& n);
nlohmann::json to_json(const CandidateSet& c);

} // namespace memoria::retrieval
