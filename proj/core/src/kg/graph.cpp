#include "memoria/kg/graph.hpp"

#include "memoria/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <tuple>
#include <unordered_set>

namespace memoria {

const char* to_string(ValidationCode code) noexcept {
    switch (code) {
    case ValidationCode::duplicate_id: return "duplicate_id";
    case ValidationCode::multiple_patients: return "multiple_patients";
    case ValidationCode::dangling_edge: return "dangling_edge";
    case ValidationCode::illegal_relation: return "illegal_relation";
    case ValidationCode::node_kind_mismatch: return "node_kind_mismatch";
    case ValidationCode::empty_description: return "empty_description";
    case ValidationCode::valence_out_of_range: return "valence_out_of_range";
    case ValidationCode::invalid_slot: return "invalid_slot";
    case ValidationCode::empty_location: return "empty_location";
    case ValidationCode::invalid_date: return "invalid_date";
    case ValidationCode::invalid_year_range: return "invalid_year_range";
    case ValidationCode::unknown_person: return "unknown_person";
    }
    return "unknown";
}

} // namespace memoria

namespace memoria::kg {

std::string_view to_string(GraphKind kind) noexcept {
    return kind == GraphKind::daily_routine ? "daily_routine" : "life_memory";
}

std::string_view to_string(PersonRole role) noexcept {
    switch (role) {
    case PersonRole::patient: return "patient";
    case PersonRole::family: return "family";
    case PersonRole::friend_: return "friend";
    case PersonRole::caregiver: return "caregiver";
    }
    return "family";
}

std::string_view to_string(Relation relation) noexcept {
    switch (relation) {
    case Relation::experienced: return "experienced";
    case Relation::participates: return "participates";
    case Relation::supervises: return "supervises";
    }
    return "participates";
}

std::string_view to_string(NodeKind kind) noexcept {
    switch (kind) {
    case NodeKind::person: return "person";
    case NodeKind::event: return "event";
    case NodeKind::activity: return "activity";
    }
    return "person";
}

GraphKind parse_graph_kind(std::string_view text) {
    if (text == "daily_routine") return GraphKind::daily_routine;
    if (text == "life_memory") return GraphKind::life_memory;
    throw ParseError("unknown graph kind '" + std::string(text) + "'");
}

PersonRole parse_person_role(std::string_view text) {
    if (text == "patient") return PersonRole::patient;
    if (text == "family") return PersonRole::family;
    if (text == "friend") return PersonRole::friend_;
    if (text == "caregiver") return PersonRole::caregiver;
    throw ParseError("unknown person role '" + std::string(text) + "'");
}

Relation parse_relation(std::string_view text) {
    if (text == "experienced") return Relation::experienced;
    if (text == "participates") return Relation::participates;
    if (text == "supervises") return Relation::supervises;
    throw ParseError("unknown edge relation '" + std::string(text) + "'");
}

namespace {

template <typename Node>
const Node* find_by_id(const std::vector<Node>& nodes, std::string_view id) {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const Node& n) { return n.id == id; });
    return it == nodes.end() ? nullptr : &*it;
}

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

} // namespace

const PersonNode* KnowledgeGraph::find_person(std::string_view id) const { return find_by_id(persons, id); }
const MemoryEventNode* KnowledgeGraph::find_event(std::string_view id) const { return find_by_id(events, id); }
const ActivityNode* KnowledgeGraph::find_activity(std::string_view id) const {
    return find_by_id(activities, id);
}

void validate(const KnowledgeGraph& graph) {
    const bool daily = graph.kind == GraphKind::daily_routine;
    if (daily && !graph.events.empty()) {
        throw ValidationError(ValidationCode::node_kind_mismatch,
                              "daily_routine graph contains event node '" + graph.events.front().id + "'");
    }
    if (!daily && !graph.activities.empty()) {
        throw ValidationError(ValidationCode::node_kind_mismatch,
                              "life_memory graph contains activity node '" + graph.activities.front().id +
                                  "'");
    }

    std::unordered_set<std::string> ids;
    auto claim = [&](const std::string& id) {
        if (!ids.insert(id).second) {
            throw ValidationError(ValidationCode::duplicate_id, "id '" + id + "' used more than once");
        }
    };

    int patients = 0;
    for (const auto& p : graph.persons) {
        claim(p.id);
        if (p.role == PersonRole::patient && ++patients > 1) {
            throw ValidationError(ValidationCode::multiple_patients,
                                  "second patient node '" + p.id + "'");
        }
    }
    for (const auto& e : graph.events) {
        claim(e.id);
        if (blank(e.description)) {
            throw ValidationError(ValidationCode::empty_description, "event '" + e.id + "' has no description");
        }
        if (!std::isfinite(e.impact.valence) || e.impact.valence < -1.0 || e.impact.valence > 1.0) {
            throw ValidationError(ValidationCode::valence_out_of_range,
                                  "event '" + e.id + "' valence outside [-1, 1]");
        }
        if (const auto* date = std::get_if<std::chrono::year_month_day>(&e.occurred)) {
            if (!date->ok()) {
                throw ValidationError(ValidationCode::invalid_date, "event '" + e.id + "' has an invalid date");
            }
        } else {
            const auto& range = std::get<YearRange>(e.occurred);
            if (range.from > range.to) {
                throw ValidationError(ValidationCode::invalid_year_range,
                                      "event '" + e.id + "' year range runs backwards");
            }
        }
    }
    for (const auto& a : graph.activities) {
        claim(a.id);
        if (!(a.slot.start < a.slot.end) || a.slot.start.minutes() < 0 ||
            a.slot.end.minutes() > TimeOfDay::kMinutesPerDay) {
            throw ValidationError(ValidationCode::invalid_slot,
                                  "activity '" + a.id + "' slot " + a.slot.start.to_string() + "-" +
                                      a.slot.end.to_string() + " is not a forward interval within one day");
        }
        if (blank(a.location)) {
            throw ValidationError(ValidationCode::empty_location, "activity '" + a.id + "' has no location");
        }
    }

    for (const auto& edge : graph.edges) {
        const std::string label = edge.source + " -" + std::string(to_string(edge.relation)) + "-> " + edge.target;
        if (!ids.contains(edge.source) || !ids.contains(edge.target)) {
            throw ValidationError(ValidationCode::dangling_edge, "edge " + label + " references a missing node");
        }
        const bool from_person = graph.find_person(edge.source) != nullptr;
        bool legal = false;
        if (daily) {
            legal = edge.relation != Relation::experienced && from_person &&
                    graph.find_activity(edge.target) != nullptr;
        } else {
            legal = edge.relation == Relation::experienced && from_person &&
                    graph.find_event(edge.target) != nullptr;
        }
        if (!legal) {
            throw ValidationError(ValidationCode::illegal_relation,
                                  "edge " + label + " is not allowed in a " + std::string(to_string(graph.kind)) +
                                      " graph");
        }
    }
}

KnowledgeGraph canonical(KnowledgeGraph graph) {
    auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
    std::sort(graph.persons.begin(), graph.persons.end(), by_id);
    std::sort(graph.events.begin(), graph.events.end(), by_id);
    std::sort(graph.activities.begin(), graph.activities.end(), by_id);
    std::sort(graph.edges.begin(), graph.edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.source, a.target, a.relation) < std::tie(b.source, b.target, b.relation);
    });
    return graph;
}

bool equivalent(const KnowledgeGraph& a, const KnowledgeGraph& b) { return canonical(a) == canonical(b); }

} // namespace memoria::kg
