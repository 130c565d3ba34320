#pragma once

#include "memoria/kg/graph.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace memoria::kg {

/// Parses and validates a graph document (UTF-8 JSON). Throws ParseError for
/// malformed input, ValidationError for documents that parse but break an
/// invariant. The returned graph is in canonical order.
KnowledgeGraph load_graph(std::string_view document);

/// Canonical serialization: arrays sorted by id (edges by source, target,
/// relation), object keys sorted, two-space indent, trailing newline.
std::string save_graph(const KnowledgeGraph& graph);

KnowledgeGraph load_graph_file(const std::filesystem::path& path);
void save_graph_file(const KnowledgeGraph& graph, const std::filesystem::path& path);

nlohmann::json graph_to_json(const KnowledgeGraph& graph);
/// Structural decode only, no invariant checks. Throws ParseError.
KnowledgeGraph graph_from_json(const nlohmann::json& doc);

nlohmann::json activity_to_json(const ActivityNode& activity);
ActivityNode activity_from_json(const nlohmann::json& doc);

} // namespace memoria::kg
