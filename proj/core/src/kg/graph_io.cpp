#include "memoria/kg/graph_io.hpp"

#include "memoria/errors.hpp"
#include "memoria/io.hpp"

namespace memoria::kg {

using nlohmann::json;

namespace {

const json& field(const json& obj, const char* key, const char* where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(std::string(where) + " is missing '" + key + "'");
    return *it;
}

std::string string_field(const json& obj, const char* key, const char* where) {
    const auto& v = field(obj, key, where);
    if (!v.is_string()) throw ParseError(std::string(where) + "." + key + " must be a string");
    return v.get<std::string>();
}

const json& array_field(const json& obj, const char* key) {
    static const json empty = json::array();
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return empty;
    if (!it->is_array()) throw ParseError(std::string("'") + key + "' must be an array");
    return *it;
}

void require_object(const json& v, const char* where) {
    if (!v.is_object()) throw ParseError(std::string(where) + " must be an object");
}

json person_to_json(const PersonNode& p) {
    json out = {{"id", p.id}, {"name", p.name}, {"role", to_string(p.role)}};
    if (p.relation_to_patient) out["relation_to_patient"] = *p.relation_to_patient;
    if (!p.demographics.empty()) out["demographics"] = p.demographics;
    return out;
}

PersonNode person_from_json(const json& v) {
    require_object(v, "person");
    PersonNode p;
    p.id = string_field(v, "id", "person");
    p.name = string_field(v, "name", "person");
    p.role = parse_person_role(string_field(v, "role", "person"));
    if (auto it = v.find("relation_to_patient"); it != v.end() && !it->is_null()) {
        if (!it->is_string()) throw ParseError("person.relation_to_patient must be a string");
        p.relation_to_patient = it->get<std::string>();
    }
    if (auto it = v.find("demographics"); it != v.end() && !it->is_null()) {
        require_object(*it, "person.demographics");
        for (const auto& [k, val] : it->items()) {
            if (!val.is_string()) throw ParseError("person.demographics values must be strings");
            p.demographics.emplace(k, val.get<std::string>());
        }
    }
    return p;
}

json event_to_json(const MemoryEventNode& e) {
    json occurred;
    if (const auto* date = std::get_if<std::chrono::year_month_day>(&e.occurred)) {
        occurred = format_date(*date);
    } else {
        const auto& r = std::get<YearRange>(e.occurred);
        occurred = {{"from", r.from}, {"to", r.to}};
    }
    return {{"id", e.id},
            {"title", e.title},
            {"occurred", occurred},
            {"description", e.description},
            {"impact", {{"valence", e.impact.valence}, {"assessment", e.impact.assessment}}}};
}

MemoryEventNode event_from_json(const json& v) {
    require_object(v, "event");
    MemoryEventNode e;
    e.id = string_field(v, "id", "event");
    e.title = string_field(v, "title", "event");
    e.description = string_field(v, "description", "event");
    const auto& occurred = field(v, "occurred", "event");
    if (occurred.is_string()) {
        e.occurred = parse_date(occurred.get<std::string>());
    } else if (occurred.is_object()) {
        const auto& from = field(occurred, "from", "event.occurred");
        const auto& to = field(occurred, "to", "event.occurred");
        if (!from.is_number_integer() || !to.is_number_integer()) {
            throw ParseError("event.occurred year range bounds must be integers");
        }
        e.occurred = YearRange{from.get<int>(), to.get<int>()};
    } else {
        throw ParseError("event.occurred must be a date string or a {from, to} year range");
    }
    const auto& impact = field(v, "impact", "event");
    require_object(impact, "event.impact");
    const auto& valence = field(impact, "valence", "event.impact");
    if (!valence.is_number()) throw ParseError("event.impact.valence must be a number");
    e.impact.valence = valence.get<double>();
    if (auto it = impact.find("assessment"); it != impact.end() && !it->is_null()) {
        if (!it->is_string()) throw ParseError("event.impact.assessment must be a string");
        e.impact.assessment = it->get<std::string>();
    }
    return e;
}

json edge_to_json(const Edge& e) {
    return {{"source", e.source}, {"target", e.target}, {"relation", to_string(e.relation)}};
}

Edge edge_from_json(const json& v) {
    require_object(v, "edge");
    return Edge{string_field(v, "source", "edge"), string_field(v, "target", "edge"),
                parse_relation(string_field(v, "relation", "edge"))};
}

} // namespace

json activity_to_json(const ActivityNode& a) {
    return {{"id", a.id},
            {"name", a.name},
            {"slot", {{"start", a.slot.start.to_string()}, {"end", a.slot.end.to_string()}}},
            {"location", a.location},
            {"description", a.description}};
}

ActivityNode activity_from_json(const json& v) {
    require_object(v, "activity");
    ActivityNode a;
    a.id = string_field(v, "id", "activity");
    a.name = string_field(v, "name", "activity");
    a.location = string_field(v, "location", "activity");
    a.description = string_field(v, "description", "activity");
    const auto& slot = field(v, "slot", "activity");
    require_object(slot, "activity.slot");
    a.slot.start = TimeOfDay::parse(string_field(slot, "start", "activity.slot"));
    a.slot.end = TimeOfDay::parse(string_field(slot, "end", "activity.slot"));
    return a;
}

json graph_to_json(const KnowledgeGraph& graph) {
    const KnowledgeGraph g = canonical(graph);
    json persons = json::array();
    for (const auto& p : g.persons) persons.push_back(person_to_json(p));
    json events = json::array();
    for (const auto& e : g.events) events.push_back(event_to_json(e));
    json activities = json::array();
    for (const auto& a : g.activities) activities.push_back(activity_to_json(a));
    json edges = json::array();
    for (const auto& e : g.edges) edges.push_back(edge_to_json(e));
    return {{"kind", to_string(g.kind)},
            {"persons", std::move(persons)},
            {"events", std::move(events)},
            {"activities", std::move(activities)},
            {"edges", std::move(edges)}};
}

KnowledgeGraph graph_from_json(const json& doc) {
    try {
        require_object(doc, "graph document");
        KnowledgeGraph g;
        g.kind = parse_graph_kind(string_field(doc, "kind", "graph document"));
        for (const auto& v : array_field(doc, "persons")) g.persons.push_back(person_from_json(v));
        for (const auto& v : array_field(doc, "events")) g.events.push_back(event_from_json(v));
        for (const auto& v : array_field(doc, "activities")) g.activities.push_back(activity_from_json(v));
        for (const auto& v : array_field(doc, "edges")) g.edges.push_back(edge_from_json(v));
        return g;
    } catch (const json::exception& e) {
        throw ParseError(std::string("graph document: ") + e.what());
    }
}

KnowledgeGraph load_graph(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("graph document is not valid JSON: ") + e.what());
    }
    KnowledgeGraph g = canonical(graph_from_json(doc));
    validate(g);
    return g;
}

std::string save_graph(const KnowledgeGraph& graph) { return graph_to_json(graph).dump(2) + "\n"; }

KnowledgeGraph load_graph_file(const std::filesystem::path& path) { return load_graph(read_file(path)); }

void save_graph_file(const KnowledgeGraph& graph, const std::filesystem::path& path) {
    write_file_atomic(path, save_graph(graph));
}

} // namespace memoria::kg
