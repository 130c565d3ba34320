#pragma once

#include "memoria/time.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace memoria::kg {

enum class GraphKind { daily_routine, life_memory };
enum class PersonRole { patient, family, friend_, caregiver };
enum class Relation { experienced, participates, supervises };
enum class NodeKind { person, event, activity };

std::string_view to_string(GraphKind kind) noexcept;
std::string_view to_string(PersonRole role) noexcept;
std::string_view to_string(Relation relation) noexcept;
std::string_view to_string(NodeKind kind) noexcept;

// Parsers throw ParseError on unknown names.
GraphKind parse_graph_kind(std::string_view text);
PersonRole parse_person_role(std::string_view text);
Relation parse_relation(std::string_view text);

struct PersonNode {
    std::string id;
    std::string name;
    PersonRole role = PersonRole::family;
    std::optional<std::string> relation_to_patient;
    std::map<std::string, std::string> demographics;

    bool operator==(const PersonNode&) const = default;
};

/// Inclusive span of years for memories the interviewee could not date exactly.
struct YearRange {
    int from = 0;
    int to = 0;

    bool operator==(const YearRange&) const = default;
};

using Occurrence = std::variant<std::chrono::year_month_day, YearRange>;

struct Impact {
    double valence = 0.0; // [-1, 1]
    std::string assessment;

    bool operator==(const Impact&) const = default;
};

struct MemoryEventNode {
    std::string id;
    std::string title;
    Occurrence occurred;
    std::string description;
    Impact impact;

    bool operator==(const MemoryEventNode&) const = default;
};

struct ActivityNode {
    std::string id;
    std::string name;
    TimeSlot slot;
    std::string location;
    std::string description;

    bool operator==(const ActivityNode&) const = default;
};

struct Edge {
    std::string source;
    std::string target;
    Relation relation = Relation::participates;

    bool operator==(const Edge&) const = default;
};

struct KnowledgeGraph {
    GraphKind kind = GraphKind::daily_routine;
    std::vector<PersonNode> persons;
    std::vector<MemoryEventNode> events;   // life_memory only
    std::vector<ActivityNode> activities;  // daily_routine only
    std::vector<Edge> edges;

    bool operator==(const KnowledgeGraph&) const = default;

    const PersonNode* find_person(std::string_view id) const;
    const MemoryEventNode* find_event(std::string_view id) const;
    const ActivityNode* find_activity(std::string_view id) const;
    std::size_t node_count() const { return persons.size() + events.size() + activities.size(); }
};

/// Checks every graph invariant; throws ValidationError naming the first one violated.
void validate(const KnowledgeGraph& graph);

/// Sorts every node list by id and edges by (source, target, relation).
KnowledgeGraph canonical(KnowledgeGraph graph);

/// Structural equality, insensitive to list order.
bool equivalent(const KnowledgeGraph& a, const KnowledgeGraph& b);

} // namespace memoria::kg
