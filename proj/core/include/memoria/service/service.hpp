#pragma once

#include "memoria/eval/metrics.hpp"
#include "memoria/llm/gateway.hpp"
#include "memoria/planner/planner.hpp"
#include "memoria/retrieval/retrieval.hpp"
#include "memoria/synth/corpus.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

namespace memoria::service {

struct ServiceConfig {
    std::filesystem::path data_dir; // corpus layout (manifest.json + one directory per patient)
    std::string host = "127.0.0.1";
    int port = 8080;
    planner::PlannerConfig planner;
    std::optional<std::string> token; // static bearer token; /healthz stays open
    int eval_jobs = 1;
};

/// Reads MEMORIA_DATA_DIR, MEMORIA_BIND, MEMORIA_PORT, MEMORIA_TOKEN,
/// MEMORIA_THRESHOLD, MEMORIA_MAX_ATTEMPTS and MEMORIA_TOP_K over `base`.
/// Throws PreconditionError for a malformed number.
ServiceConfig config_from_env(ServiceConfig base = {});

struct Request {
    std::string method;
    std::string path;
    std::string body;
    std::string authorization; // raw Authorization header, may be empty
};

struct Response {
    int status = 200;
    nlohmann::json body;
};

nlohmann::json error_body(std::string_view code, std::string_view message, nlohmann::json detail = nullptr);

struct TurnRecord {
    std::string text;
    Timestamp timestamp{};
    nlohmann::json response;
};

struct Session {
    std::string id;
    std::string patient_id;
    Timestamp created_at{};
    std::vector<TurnRecord> turns;
    std::mutex busy; // held for the whole of one message
};

nlohmann::json to_json(const Session& s);

/// Everything the HTTP layer does, minus sockets. Safe for concurrent
/// handle() calls.
class ServiceCore {
public:
    /// Loads the corpus in config.data_dir and replays data_dir/sessions/*.jsonl.
    /// Throws on any load failure.
    ServiceCore(ServiceConfig config, std::shared_ptr<const llm::Gateway> gateway,
                std::shared_ptr<eval::EmbeddingBackend> embeddings = nullptr);
    /// Serves an in-memory corpus; sessions are journaled only when
    /// config.data_dir is set.
    ServiceCore(ServiceConfig config, synth::Corpus corpus, std::shared_ptr<const llm::Gateway> gateway,
                std::shared_ptr<eval::EmbeddingBackend> embeddings = nullptr);

    Response handle(const Request& request);

    const ServiceConfig& config() const noexcept { return config_; }
    std::size_t session_count() const;
    std::vector<std::string> patient_ids() const;

private:
    struct Patient {
        const synth::PatientRecord* record;
        std::shared_ptr<const retrieval::GraphPair> graphs;
    };

    void index_patients();
    void replay_sessions();
    std::filesystem::path journal_path(const std::string& session_id) const;
    std::string new_session_id();
    std::shared_ptr<Session> find_session(const std::string& id) const;
    const Patient* find_patient(const std::string& id) const;

    Response create_session(const Request& r);
    Response post_message(const std::string& id, const Request& r);
    Response get_session(const std::string& id) const;
    Response list_patients() const;
    Response get_graph(const std::string& patient, const std::string& kind) const;
    Response run_eval(const Request& r);

    ServiceConfig config_;
    synth::Corpus corpus_;
    std::map<std::string, Patient, std::less<>> patients_;
    std::shared_ptr<const llm::Gateway> gateway_;
    std::shared_ptr<eval::EmbeddingBackend> embeddings_;
    std::mutex eval_mutex_;

    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
    std::mutex id_mutex_;
    std::mt19937_64 id_rng_;
};

/// httplib front end for a ServiceCore.
class HttpServer {
public:
    explicit HttpServer(ServiceCore& core);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds (port 0 picks a free one) and returns the bound port. Throws Error.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace memoria::service
