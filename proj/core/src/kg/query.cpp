#include "memoria/kg/query.hpp"

#include "memoria/errors.hpp"
#include "memoria/kg/tokenize.hpp"

#include <algorithm>
#include <unordered_map>

namespace memoria::kg {

std::optional<ActivityNode> find_current_activity(const KnowledgeGraph& graph, TimeOfDay now) {
    if (graph.kind != GraphKind::daily_routine) {
        throw WrongGraphKind("find_current_activity needs a daily_routine graph");
    }
    const ActivityNode* best = nullptr;
    for (const auto& a : graph.activities) {
        if (!a.slot.contains(now)) continue;
        if (best == nullptr || a.slot.start > best->slot.start ||
            (a.slot.start == best->slot.start && a.id < best->id)) {
            best = &a;
        }
    }
    if (best == nullptr) return std::nullopt;
    return *best;
}

std::optional<ActivityNode> find_current_activity(const KnowledgeGraph& graph, Timestamp now) {
    return find_current_activity(graph, time_of_day(now));
}

bool NodeView::has_token(const std::string& token) const {
    return std::binary_search(tokens.begin(), tokens.end(), token);
}

namespace {

void add_tokens(std::vector<std::string>& bag, std::string_view text) {
    auto toks = tokenize(text);
    bag.insert(bag.end(), std::make_move_iterator(toks.begin()), std::make_move_iterator(toks.end()));
}

void finish(NodeView& view) {
    std::sort(view.tokens.begin(), view.tokens.end());
    view.tokens.erase(std::unique(view.tokens.begin(), view.tokens.end()), view.tokens.end());
}

} // namespace

std::vector<NodeView> candidate_nodes(const KnowledgeGraph& graph) {
    // target node id -> names of persons attached by an edge
    std::unordered_map<std::string, std::vector<const std::string*>> participants;
    for (const auto& edge : graph.edges) {
        if (const auto* p = graph.find_person(edge.source)) participants[edge.target].push_back(&p->name);
    }
    auto add_participants = [&](NodeView& view) {
        if (auto it = participants.find(view.id); it != participants.end()) {
            for (const auto* name : it->second) add_tokens(view.tokens, *name);
        }
    };

    std::vector<NodeView> views;
    views.reserve(graph.node_count());
    for (const auto& p : graph.persons) {
        NodeView v{p.id, NodeKind::person, graph.kind, p.name, {}};
        add_tokens(v.tokens, p.name);
        if (p.relation_to_patient) add_tokens(v.tokens, *p.relation_to_patient);
        for (const auto& [key, value] : p.demographics) add_tokens(v.tokens, value);
        finish(v);
        views.push_back(std::move(v));
    }
    for (const auto& e : graph.events) {
        NodeView v{e.id, NodeKind::event, graph.kind, e.title, {}};
        add_tokens(v.tokens, e.title);
        add_tokens(v.tokens, e.description);
        add_tokens(v.tokens, e.impact.assessment);
        add_participants(v);
        finish(v);
        views.push_back(std::move(v));
    }
    for (const auto& a : graph.activities) {
        NodeView v{a.id, NodeKind::activity, graph.kind, a.name, {}};
        add_tokens(v.tokens, a.name);
        add_tokens(v.tokens, a.location);
        add_tokens(v.tokens, a.description);
        add_participants(v);
        finish(v);
        views.push_back(std::move(v));
    }
    std::sort(views.begin(), views.end(), [](const NodeView& a, const NodeView& b) { return a.id < b.id; });
    return views;
}

} // namespace memoria::kg
