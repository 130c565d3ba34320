#include "memoria/retrieval/retrieval.hpp"

#include "memoria/errors.hpp"
#include "memoria/kg/graph_io.hpp"

#include <algorithm>

namespace memoria::retrieval {

std::vector<std::string> CandidateSet::node_ids() const {
    std::vector<std::string> ids;
    auto add = [&](const std::string& id) {
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    };
    if (current_activity) add(current_activity->id);
    for (const auto& n : daily_hits) add(n.node_id);
    for (const auto& n : memory_hits) add(n.node_id);
    return ids;
}

GraphPair::GraphPair(kg::KnowledgeGraph daily, kg::KnowledgeGraph memory)
    : daily_(std::move(daily)), memory_(std::move(memory)) {
    if (daily_.kind != kg::GraphKind::daily_routine) throw WrongGraphKind("first graph must be daily_routine");
    if (memory_.kind != kg::GraphKind::life_memory) throw WrongGraphKind("second graph must be life_memory");
    kg::validate(daily_);
    kg::validate(memory_);
    daily_views_ = kg::candidate_nodes(daily_);
    memory_views_ = kg::candidate_nodes(memory_);
}

double relevance(const kg::NodeView& node, const query::KeywordSet& keywords) {
    if (keywords.empty()) throw EmptyKeywords("relevance needs at least one keyword");
    const auto matched = std::count_if(keywords.begin(), keywords.end(),
                                       [&](const std::string& kw) { return node.has_token(kw); });
    return static_cast<double>(matched) / static_cast<double>(keywords.size());
}

ScoredNode score_node(const kg::NodeView& node, const query::KeywordSet& keywords, const GraphWeights& weights) {
    ScoredNode out;
    out.node_id = node.id;
    out.graph_kind = node.graph;
    out.node_kind = node.kind;
    out.label = node.label;
    out.relevance = relevance(node, keywords);
    out.score = out.relevance * weights.weight_for(node.graph);
    for (const auto& kw : keywords) {
        if (node.has_token(kw)) out.matched_keywords.push_back(kw);
    }
    return out;
}

namespace {

std::vector<ScoredNode> top_hits(const std::vector<kg::NodeView>& views, const query::KeywordSet& keywords,
                                 const GraphWeights& weights, std::size_t top_k) {
    std::vector<ScoredNode> hits;
    for (const auto& view : views) {
        auto scored = score_node(view, keywords, weights);
        if (scored.score > 0.0) hits.push_back(std::move(scored));
    }
    std::sort(hits.begin(), hits.end(), [](const ScoredNode& a, const ScoredNode& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.node_id < b.node_id;
    });
    if (hits.size() > top_k) hits.resize(top_k);
    return hits;
}

} // namespace

CandidateSet search(const GraphPair& graphs, const query::KeywordSet& keywords, const GraphWeights& weights,
                    Timestamp now, std::size_t top_k, SearchScope scope) {
    if (keywords.empty()) throw EmptyKeywords("search needs at least one keyword");
    if (top_k == 0) throw PreconditionError("top_k must be positive");
    CandidateSet out;
    out.current_activity = kg::find_current_activity(graphs.daily(), now);
    out.daily_hits = top_hits(graphs.daily_views(), keywords, weights, top_k);
    if (scope == SearchScope::both) out.memory_hits = top_hits(graphs.memory_views(), keywords, weights, top_k);
    return out;
}

nlohmann::json to_json(const GraphWeights& w) { return {{"daily", w.daily}, {"memory", w.memory}}; }

nlohmann::json to_json(const ScoredNode& n) {
    return {{"node_id", n.node_id},
            {"graph", kg::to_string(n.graph_kind)},
            {"kind", kg::to_string(n.node_kind)},
            {"label", n.label},
            {"relevance", n.relevance},
            {"score", n.score},
            {"matched_keywords", n.matched_keywords}};
}

nlohmann::json to_json(const CandidateSet& c) {
    nlohmann::json daily = nlohmann::json::array();
    for (const auto& n : c.daily_hits) daily.push_back(to_json(n));
    nlohmann::json memory = nlohmann::json::array();
    for (const auto& n : c.memory_hits) memory.push_back(to_json(n));
    return {{"current_activity", c.current_activity ? kg::activity_to_json(*c.current_activity) : nlohmann::json()},
            {"daily_hits", std::move(daily)},
            {"memory_hits", std::move(memory)}};
}

} // namespace memoria::retrieval
