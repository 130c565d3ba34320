#include "memoria/errors.hpp"
#include "memoria/kg/graph_io.hpp"
#include "memoria/llm/gateway.hpp"
#include "memoria/planner/planner.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace memoria::planner {

using nlohmann::json;
using retrieval::CandidateSet;
using retrieval::GraphPair;
using retrieval::GraphWeights;
using retrieval::ScoredNode;

namespace {

const kg::NodeView* find_view(const std::vector<kg::NodeView>& views, const std::string& id) {
    auto it = std::lower_bound(views.begin(), views.end(), id,
                               [](const kg::NodeView& v, const std::string& key) { return v.id < key; });
    return it != views.end() && it->id == id ? &*it : nullptr;
}

std::vector<std::string> matched_in_current(const CandidateSet& c, const GraphPair& graphs,
                                            const query::KeywordSet& keywords) {
    std::vector<std::string> out;
    if (!c.current_activity) return out;
    if (const auto* view = find_view(graphs.daily_views(), c.current_activity->id)) {
        for (const auto& kw : keywords) {
            if (view->has_token(kw)) out.push_back(kw);
        }
    }
    return out;
}

// Prompt-facing description of one node, looked up in its graph.
json describe(const GraphPair& graphs, const ScoredNode& hit) {
    json out = {{"id", hit.node_id}, {"graph", kg::to_string(hit.graph_kind)}, {"kind", kg::to_string(hit.node_kind)},
                {"label", hit.label}};
    const auto& graph = hit.graph_kind == kg::GraphKind::daily_routine ? graphs.daily() : graphs.memory();
    if (const auto* a = graph.find_activity(hit.node_id)) {
        out["start"] = a->slot.start.to_string();
        out["end"] = a->slot.end.to_string();
        out["location"] = a->location;
        out["description"] = a->description;
    } else if (const auto* e = graph.find_event(hit.node_id)) {
        out["description"] = e->description;
        out["impact"] = e->impact.assessment;
    } else if (const auto* p = graph.find_person(hit.node_id)) {
        out["role"] = kg::to_string(p->role);
        if (p->relation_to_patient) out["relation"] = *p->relation_to_patient;
    }
    return out;
}

json current_activity_json(const kg::ActivityNode& a) {
    return {{"id", a.id},
            {"name", a.name},
            {"start", a.slot.start.to_string()},
            {"end", a.slot.end.to_string()},
            {"location", a.location},
            {"description", a.description}};
}

json hits_json(const GraphPair& graphs, const std::vector<ScoredNode>& hits, bool with_scores) {
    json out = json::array();
    for (const auto& h : hits) {
        json node = describe(graphs, h);
        node["matched_keywords"] = h.matched_keywords;
        if (with_scores) node["score"] = h.score;
        out.push_back(std::move(node));
    }
    return out;
}

} // namespace

void validate(const PlannerConfig& config) {
    if (!(config.threshold > 0.0 && config.threshold <= 1.0)) {
        throw PreconditionError("planner threshold must be in (0, 1]");
    }
    if (config.max_attempts < 1) throw PreconditionError("planner max_attempts must be at least 1");
    if (config.top_k < 1) throw PreconditionError("planner top_k must be at least 1");
}

const std::string& PlannerResponse::text() const {
    if (const auto* g = std::get_if<Generated>(&outcome)) return g->text;
    return std::get<FollowUp>(outcome).prompt_text;
}

double evaluate(const CandidateSet& candidates, const TurnContext& ctx, const llm::Gateway& gateway) {
    if (candidates.empty()) return 0.0;
    json nodes = json::array();
    if (candidates.current_activity) {
        json ca = current_activity_json(*candidates.current_activity);
        ca["kind"] = "activity";
        ca["graph"] = "daily_routine";
        ca["label"] = candidates.current_activity->name;
        ca["current"] = true;
        ca["matched_keywords"] = matched_in_current(candidates, ctx.graphs, ctx.keywords);
        nodes.push_back(std::move(ca));
    }
    for (auto& n : hits_json(ctx.graphs, candidates.daily_hits, true)) nodes.push_back(std::move(n));
    for (auto& n : hits_json(ctx.graphs, candidates.memory_hits, true)) nodes.push_back(std::move(n));

    const json payload = {{"dialogue", ctx.turn.text},
                          {"time", format_timestamp(ctx.turn.timestamp)},
                          {"decomposition", query::to_json(ctx.decomposition)},
                          {"keywords", ctx.keywords.words()},
                          {"nodes", std::move(nodes)}};
    const auto response = gateway.call({llm::Task::evaluate, payload});
    const double eta = response.document.at("efficiency").get<double>();
    if (std::isnan(eta)) return 0.0;
    return std::clamp(eta, 0.0, 1.0);
}

WeightAdjustment bound_weights(const GraphWeights& current, double daily, double memory) {
    if (!std::isfinite(daily) || !std::isfinite(memory) || daily < 0.0 || memory < 0.0 || daily + memory <= 0.0) {
        return {current, "proposal (" + std::to_string(daily) + ", " + std::to_string(memory) +
                             ") is not a pair of non-negative finite weights"};
    }
    auto normalize = [](double& a, double& b) {
        const double sum = a + b;
        a /= sum;
        b /= sum;
    };
    normalize(daily, memory);
    daily = std::clamp(daily, retrieval::kMinWeight, retrieval::kMaxWeight);
    memory = std::clamp(memory, retrieval::kMinWeight, retrieval::kMaxWeight);
    normalize(daily, memory);
    return {GraphWeights{daily, memory}, std::nullopt};
}

WeightAdjustment adjust_weights(const GraphWeights& current, const llm::Gateway& gateway, const IterationTrace& last) {
    auto hits = [](const std::vector<ScoredNode>& list) {
        json out = json::array();
        for (const auto& h : list) {
            out.push_back({{"id", h.node_id}, {"label", h.label}, {"matched_keywords", h.matched_keywords},
                           {"score", h.score}});
        }
        return out;
    };
    const json payload = {
        {"weights", retrieval::to_json(current)},
        {"attempt", last.attempt},
        {"efficiency", last.efficiency},
        {"keywords", last.keywords_used.words()},
        {"current_activity", last.candidates.current_activity ? json(last.candidates.current_activity->name) : json()},
        {"daily_hits", hits(last.candidates.daily_hits)},
        {"memory_hits", hits(last.candidates.memory_hits)}};
    const auto response = gateway.call({llm::Task::adjust_weights, payload});
    return bound_weights(current, response.document.at("daily").get<double>(),
                         response.document.at("memory").get<double>());
}

KeywordExpansion merge_suggestions(const query::KeywordSet& keywords, const std::vector<std::string>& suggestions) {
    KeywordExpansion out{keywords, {}};
    for (const auto& s : suggestions) {
        for (auto& term : query::content_terms(s)) {
            if (out.keywords.size() >= kMaxKeywords) return out;
            if (out.keywords.insert(term)) out.added.push_back(std::move(term));
        }
    }
    return out;
}

KeywordExpansion expand_keywords(const query::KeywordSet& keywords, const llm::Gateway& gateway) {
    const auto response = gateway.call({llm::Task::suggest_keywords, {{"keywords", keywords.words()}}});
    return merge_suggestions(keywords, response.document.at("keywords").get<std::vector<std::string>>());
}

std::vector<query::Category> unresolved_categories(const query::QueryDecomposition& decomposition,
                                                   const CandidateSet& candidates, const GraphPair& graphs,
                                                   const query::KeywordSet& keywords) {
    std::set<std::string> matched;
    for (const auto& kw : matched_in_current(candidates, graphs, keywords)) matched.insert(kw);
    for (const auto* list : {&candidates.daily_hits, &candidates.memory_hits}) {
        for (const auto& h : *list) matched.insert(h.matched_keywords.begin(), h.matched_keywords.end());
    }
    std::vector<query::Category> out;
    for (auto c : query::kCategories) {
        const auto& terms = decomposition[c];
        if (terms.empty()) continue;
        const bool covered = std::any_of(terms.begin(), terms.end(), [&](const std::string& term) {
            const auto tokens = query::content_terms(term);
            return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) { return matched.contains(t); });
        });
        if (!covered) out.push_back(c);
    }
    return out;
}

std::string build_followup_prompt(const query::DialogueTurn& turn, const query::QueryDecomposition& decomposition,
                                  const std::vector<IterationTrace>& trace, const GraphPair& graphs,
                                  const llm::Gateway& gateway) {
    json unresolved = json::array();
    if (!trace.empty()) {
        const auto& last = trace.back();
        for (auto c : unresolved_categories(decomposition, last.candidates, graphs, last.keywords_used)) {
            unresolved.push_back(query::to_string(c));
        }
    }
    const json payload = {{"dialogue", turn.text},
                          {"decomposition", query::to_json(decomposition)},
                          {"unresolved", std::move(unresolved)}};
    const auto response = gateway.call({llm::Task::followup, payload});
    return response.document.at("question").get<std::string>();
}

Generated generate_response(const CandidateSet& candidates, const query::DialogueTurn& turn, const GraphPair& graphs,
                            const llm::Gateway& gateway) {
    if (candidates.empty()) throw PreconditionError("generate_response needs at least one candidate node");
    json nodes = json::array();
    std::set<std::string> seen;
    if (candidates.current_activity) seen.insert(candidates.current_activity->id);
    for (const auto* list : {&candidates.daily_hits, &candidates.memory_hits}) {
        for (const auto& h : *list) {
            if (seen.insert(h.node_id).second) nodes.push_back(describe(graphs, h));
        }
    }
    const json payload = {
        {"dialogue", turn.text},
        {"time", format_timestamp(turn.timestamp)},
        {"current_activity",
         candidates.current_activity ? current_activity_json(*candidates.current_activity) : json()},
        {"nodes", std::move(nodes)}};
    const auto response = gateway.call({llm::Task::generate, payload});
    return Generated{response.document.at("text").get<std::string>(), candidates.node_ids()};
}

json to_json(const IterationTrace& t) {
    return {{"attempt", t.attempt},
            {"weights_used", retrieval::to_json(t.weights_used)},
            {"keywords_used", t.keywords_used.words()},
            {"candidates", retrieval::to_json(t.candidates)},
            {"efficiency", t.efficiency},
            {"weight_adjustment", t.weight_adjustment ? retrieval::to_json(*t.weight_adjustment) : json()},
            {"adjustment_rejected", t.adjustment_rejected ? json(*t.adjustment_rejected) : json()},
            {"keywords_added", t.keywords_added}};
}

json to_json(const PlannerResponse& r) {
    json trace = json::array();
    for (const auto& t : r.trace) trace.push_back(to_json(t));
    json out = {{"decomposition", query::to_json(r.decomposition)}, {"trace", std::move(trace)}};
    if (const auto* g = std::get_if<Generated>(&r.outcome)) {
        out["outcome"] = "generated";
        out["text"] = g->text;
        out["provenance"] = g->provenance;
    } else {
        out["outcome"] = "followup";
        out["prompt_text"] = std::get<FollowUp>(r.outcome).prompt_text;
    }
    return out;
}

} // namespace memoria::planner
