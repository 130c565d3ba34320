#include "memoria/service/service.hpp"

#include "memoria/errors.hpp"
#include "memoria/eval/ablation.hpp"
#include "memoria/io.hpp"
#include "memoria/kg/graph_io.hpp"

#include <cstdio>
#include <cstdlib>

namespace memoria::service {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

template <class T, class F>
T env_number(const char* name, T fallback, F convert) {
    auto v = env(name);
    if (!v) return fallback;
    try {
        return static_cast<T>(convert(*v));
    } catch (const std::exception&) {
        throw PreconditionError(std::string(name) + " is not a number: '" + *v + "'");
    }
}

Response error(int status, std::string_view code, std::string_view message, json detail = nullptr) {
    return {status, error_body(code, message, std::move(detail))};
}

std::vector<std::string> split_path(std::string_view path) {
    if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= path.size()) {
        auto end = path.find('/', pos);
        if (end == std::string_view::npos) end = path.size();
        if (end > pos) parts.emplace_back(path.substr(pos, end - pos));
        pos = end + 1;
    }
    return parts;
}

std::optional<json> parse_body(const std::string& body) {
    if (body.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
    auto doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    return doc;
}

Timestamp server_now() {
    return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
}

json turn_json(const TurnRecord& t) {
    return {{"text", t.text}, {"timestamp", format_timestamp(t.timestamp)}, {"response", t.response}};
}

} // namespace

ServiceConfig config_from_env(ServiceConfig base) {
    if (auto v = env("MEMORIA_DATA_DIR")) base.data_dir = *v;
    if (auto v = env("MEMORIA_BIND")) base.host = *v;
    if (auto v = env("MEMORIA_TOKEN")) base.token = *v;
    base.port = env_number("MEMORIA_PORT", base.port, [](const std::string& s) { return std::stoi(s); });
    base.planner.threshold =
        env_number("MEMORIA_THRESHOLD", base.planner.threshold, [](const std::string& s) { return std::stod(s); });
    base.planner.max_attempts = env_number("MEMORIA_MAX_ATTEMPTS", base.planner.max_attempts,
                                           [](const std::string& s) { return std::stoi(s); });
    base.planner.top_k =
        env_number("MEMORIA_TOP_K", base.planner.top_k, [](const std::string& s) { return std::stoul(s); });
    return base;
}

json error_body(std::string_view code, std::string_view message, json detail) {
    return {{"code", code}, {"message", message}, {"detail", std::move(detail)}};
}

json to_json(const Session& s) {
    json turns = json::array();
    for (const auto& t : s.turns) turns.push_back(turn_json(t));
    return {{"id", s.id},
            {"patient_id", s.patient_id},
            {"created_at", format_timestamp(s.created_at)},
            {"turns", std::move(turns)}};
}

ServiceCore::ServiceCore(ServiceConfig config, std::shared_ptr<const llm::Gateway> gateway,
                         std::shared_ptr<eval::EmbeddingBackend> embeddings)
    : ServiceCore(config, synth::load_corpus(config.data_dir), std::move(gateway), std::move(embeddings)) {}

ServiceCore::ServiceCore(ServiceConfig config, synth::Corpus corpus, std::shared_ptr<const llm::Gateway> gateway,
                         std::shared_ptr<eval::EmbeddingBackend> embeddings)
    : config_(std::move(config)), corpus_(std::move(corpus)), gateway_(std::move(gateway)),
      embeddings_(std::move(embeddings)), id_rng_(std::random_device{}()) {
    if (!gateway_) throw PreconditionError("service needs a gateway");
    planner::validate(config_.planner);
    if (!embeddings_) embeddings_ = std::make_shared<eval::CountVectorEmbedding>();
    index_patients();
    replay_sessions();
}

void ServiceCore::index_patients() {
    for (const auto& p : corpus_.patients) {
        patients_.emplace(p.id(), Patient{&p, std::make_shared<const retrieval::GraphPair>(p.daily, p.memory)});
    }
}

fs::path ServiceCore::journal_path(const std::string& session_id) const {
    return config_.data_dir / "sessions" / (session_id + ".jsonl");
}

void ServiceCore::replay_sessions() {
    if (config_.data_dir.empty()) return;
    const auto dir = config_.data_dir / "sessions";
    if (!fs::is_directory(dir)) return;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".jsonl") continue;
        const auto where = entry.path().string();
        const auto text = read_file(entry.path());
        std::shared_ptr<Session> session;
        std::size_t pos = 0;
        std::size_t line_no = 0;
        while (pos < text.size()) {
            auto end = text.find('\n', pos);
            if (end == std::string::npos) end = text.size();
            const auto line = text.substr(pos, end - pos);
            pos = end + 1;
            ++line_no;
            if (line.empty()) continue;
            const auto doc = json::parse(line, nullptr, false);
            if (doc.is_discarded() || !doc.is_object()) {
                throw ParseError(where + ":" + std::to_string(line_no) + ": not a JSON object");
            }
            try {
                const auto type = doc.at("type").get<std::string>();
                if (type == "session") {
                    session = std::make_shared<Session>();
                    session->id = doc.at("id").get<std::string>();
                    session->patient_id = doc.at("patient_id").get<std::string>();
                    session->created_at = parse_timestamp(doc.at("created_at").get<std::string>());
                } else if (type == "turn" && session) {
                    session->turns.push_back({doc.at("text").get<std::string>(),
                                              parse_timestamp(doc.at("timestamp").get<std::string>()),
                                              doc.at("response")});
                } else {
                    throw ParseError("unexpected record");
                }
            } catch (const json::exception& e) {
                throw ParseError(where + ":" + std::to_string(line_no) + ": " + e.what());
            } catch (const ParseError& e) {
                throw ParseError(where + ":" + std::to_string(line_no) + ": " + e.what());
            }
        }
        if (!session) throw ParseError(where + ": journal has no session record");
        if (!find_patient(session->patient_id)) {
            throw ValidationError(ValidationCode::unknown_person, where + ": patient " + session->patient_id);
        }
        sessions_.emplace(session->id, std::move(session));
    }
}

std::string ServiceCore::new_session_id() {
    std::lock_guard lock(id_mutex_);
    char buf[24];
    std::snprintf(buf, sizeof buf, "s-%016llx", static_cast<unsigned long long>(id_rng_()));
    return buf;
}

std::shared_ptr<Session> ServiceCore::find_session(const std::string& id) const {
    std::shared_lock lock(sessions_mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

const ServiceCore::Patient* ServiceCore::find_patient(const std::string& id) const {
    auto it = patients_.find(id);
    return it == patients_.end() ? nullptr : &it->second;
}

std::size_t ServiceCore::session_count() const {
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
}

std::vector<std::string> ServiceCore::patient_ids() const {
    std::vector<std::string> ids;
    for (const auto& [id, p] : patients_) ids.push_back(id);
    return ids;
}

Response ServiceCore::handle(const Request& request) {
    const auto parts = split_path(request.path);
    const auto& m = request.method;
    if (m == "GET" && parts == std::vector<std::string>{"healthz"}) {
        return {200, {{"status", "ok"}, {"patients", patients_.size()}, {"sessions", session_count()}}};
    }
    if (config_.token && request.authorization != "Bearer " + *config_.token) {
        return error(401, "unauthorized", "missing or wrong bearer token");
    }
    try {
        if (parts.size() == 1 && parts[0] == "sessions") {
            if (m == "POST") return create_session(request);
            return error(405, "method_not_allowed", m + " " + request.path);
        }
        if (parts.size() == 2 && parts[0] == "sessions") {
            if (m == "GET") return get_session(parts[1]);
            return error(405, "method_not_allowed", m + " " + request.path);
        }
        if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "messages") {
            if (m == "POST") return post_message(parts[1], request);
            return error(405, "method_not_allowed", m + " " + request.path);
        }
        if (parts.size() == 1 && parts[0] == "patients" && m == "GET") return list_patients();
        if (parts.size() == 4 && parts[0] == "patients" && parts[2] == "graphs" && m == "GET") {
            return get_graph(parts[1], parts[3]);
        }
        if (parts == std::vector<std::string>{"eval", "ablation"} && m == "POST") return run_eval(request);
        return error(404, "not_found", "no route for " + m + " " + request.path);
    } catch (const std::exception& e) {
        return error(500, "internal", e.what());
    }
}

Response ServiceCore::create_session(const Request& r) {
    auto body = parse_body(r.body);
    if (!body) return error(400, "bad_json", "request body must be a JSON object");
    auto pid = body->find("patient_id");
    if (pid == body->end() || !pid->is_string()) return error(400, "bad_request", "patient_id is required");
    const auto patient_id = pid->get<std::string>();
    if (!find_patient(patient_id)) return error(404, "unknown_patient", "no patient " + patient_id);

    auto session = std::make_shared<Session>();
    session->id = new_session_id();
    session->patient_id = patient_id;
    session->created_at = server_now();
    if (!config_.data_dir.empty()) {
        fs::create_directories(config_.data_dir / "sessions");
        append_line(journal_path(session->id), json{{"type", "session"},
                                                    {"id", session->id},
                                                    {"patient_id", patient_id},
                                                    {"created_at", format_timestamp(session->created_at)}}
                                                   .dump());
    }
    json out = to_json(*session);
    {
        std::unique_lock lock(sessions_mutex_);
        sessions_.emplace(session->id, session);
    }
    return {201, std::move(out)};
}

Response ServiceCore::post_message(const std::string& id, const Request& r) {
    auto session = find_session(id);
    if (!session) return error(404, "unknown_session", "no session " + id);
    std::unique_lock busy(session->busy, std::try_to_lock);
    if (!busy.owns_lock()) return error(409, "session_busy", "a message for this session is already in flight");

    auto body = parse_body(r.body);
    if (!body) return error(400, "bad_json", "request body must be a JSON object");
    auto text = body->find("text");
    if (text == body->end() || !text->is_string()) return error(400, "bad_request", "text is required");
    query::DialogueTurn turn{text->get<std::string>(), server_now()};
    if (auto ts = body->find("timestamp"); ts != body->end() && !ts->is_null()) {
        if (!ts->is_string()) return error(400, "bad_request", "timestamp must be a string");
        try {
            turn.timestamp = parse_timestamp(ts->get<std::string>());
        } catch (const ParseError& e) {
            return error(400, "bad_timestamp", e.what());
        }
    }
    if (!session->turns.empty() && turn.timestamp <= session->turns.back().timestamp) {
        return error(422, "timestamp_order", "turn timestamps must increase within a session",
                     {{"last", format_timestamp(session->turns.back().timestamp)},
                      {"given", format_timestamp(turn.timestamp)}});
    }

    const auto* patient = find_patient(session->patient_id);
    planner::PlannerResponse response;
    try {
        response = planner::run(turn, *patient->graphs, *gateway_, config_.planner);
    } catch (const PreconditionError& e) {
        return error(400, "bad_turn", e.what());
    } catch (const planner::PlannerAborted& e) {
        json trace = json::array();
        for (const auto& t : e.trace()) trace.push_back(planner::to_json(t));
        return error(502, "planner_aborted", e.what(), {{"trace", std::move(trace)}});
    }

    TurnRecord record{turn.text, turn.timestamp, planner::to_json(response)};
    if (!config_.data_dir.empty()) {
        json line = turn_json(record);
        line["type"] = "turn";
        append_line(journal_path(session->id), line.dump());
    }
    json out = record.response;
    {
        std::unique_lock lock(sessions_mutex_);
        session->turns.push_back(std::move(record));
    }
    return {200, std::move(out)};
}

Response ServiceCore::get_session(const std::string& id) const {
    auto session = find_session(id);
    if (!session) return error(404, "unknown_session", "no session " + id);
    std::shared_lock lock(sessions_mutex_);
    return {200, to_json(*session)};
}

Response ServiceCore::list_patients() const {
    json out = json::array();
    for (const auto& [id, p] : patients_) {
        const auto& profile = p.record->draft.profile;
        out.push_back({{"id", id},
                       {"name", profile.name},
                       {"age", profile.age},
                       {"stage", profile.stage},
                       {"dialogues", p.record->draft.dialogues.size()}});
    }
    return {200, {{"patients", std::move(out)}}};
}

Response ServiceCore::get_graph(const std::string& patient, const std::string& kind) const {
    const auto* p = find_patient(patient);
    if (!p) return error(404, "unknown_patient", "no patient " + patient);
    if (kind == "daily") return {200, kg::graph_to_json(p->graphs->daily())};
    if (kind == "memory") return {200, kg::graph_to_json(p->graphs->memory())};
    return error(404, "unknown_graph", "graph kind must be daily or memory");
}

Response ServiceCore::run_eval(const Request& r) {
    auto body = parse_body(r.body);
    if (!body) return error(400, "bad_json", "request body must be a JSON object");

    std::vector<eval::AblationConfig> configs;
    eval::AblationOptions options;
    eval::GoldSet gold;
    synth::Corpus subset;
    try {
        if (auto v = body->find("variants"); v != body->end()) {
            for (const auto& name : *v) configs.push_back({eval::parse_variant(name.get<std::string>()), config_.planner});
        } else {
            for (auto v2 : eval::kVariants) configs.push_back({v2, config_.planner});
        }
        if (auto j = body->find("judge_mode"); j != body->end()) {
            const auto mode = j->get<std::string>();
            if (mode == "with_reference") {
                options.judge_mode = eval::JudgeMode::with_reference;
            } else if (mode != "blind") {
                return error(400, "bad_request", "judge_mode must be blind or with_reference");
            }
        }
        if (auto g = body->find("gold"); g != body->end()) {
            std::string lines;
            for (const auto& entry : *g) lines += entry.dump() + "\n";
            gold = eval::parse_gold_jsonl(lines);
            options.gold = &gold;
        }
        subset.seed = corpus_.seed;
        subset.generator_version = corpus_.generator_version;
        std::size_t limit = corpus_.patients.size();
        if (auto n = body->find("patients"); n != body->end()) limit = std::min(limit, n->get<std::size_t>());
        subset.patients.assign(corpus_.patients.begin(),
                               corpus_.patients.begin() + static_cast<std::ptrdiff_t>(limit));
    } catch (const json::exception& e) {
        return error(400, "bad_request", e.what());
    } catch (const ParseError& e) {
        return error(400, "bad_request", e.what());
    }
    options.jobs = config_.eval_jobs;

    std::lock_guard lock(eval_mutex_);
    const auto result = eval::run_ablation(subset, configs, *gateway_, *embeddings_, options);
    json tables = json::array();
    for (const auto& rep : result.reports) tables.push_back(eval::metrics_table(rep));
    return {200,
            {{"result", eval::to_json(result)},
             {"radar", eval::radar_json(result)},
             {"metrics_tables", std::move(tables)},
             {"judge_table", eval::judge_table(result)}}};
}

} // namespace memoria::service
