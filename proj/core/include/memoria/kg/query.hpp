#pragma once

#include "memoria/kg/graph.hpp"
#include "memoria/time.hpp"

#include <optional>
#include <string>
#include <vector>

namespace memoria::kg {

/// The routine activity whose daily slot contains the time of day of `now`.
/// When slots overlap the latest start wins, then the smallest id.
/// Throws WrongGraphKind on a life_memory graph.
std::optional<ActivityNode> find_current_activity(const KnowledgeGraph& graph, Timestamp now);
std::optional<ActivityNode> find_current_activity(const KnowledgeGraph& graph, TimeOfDay now);

/// Flattened, searchable view of one node.
struct NodeView {
    std::string id;
    NodeKind kind = NodeKind::person;
    GraphKind graph = GraphKind::daily_routine;
    std::string label;                // display name or title
    std::vector<std::string> tokens;  // sorted, unique

    bool has_token(const std::string& token) const;
    bool operator==(const NodeView&) const = default;
};

/// One view per node, ordered by id. Tokens come from every textual field;
/// activities and events also take the names of the persons joined to them
/// by an edge.
std::vector<NodeView> candidate_nodes(const KnowledgeGraph& graph);

} // namespace memoria::kg
