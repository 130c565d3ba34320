#include "memoria/errors.hpp"
#include "memoria/kg/graph_io.hpp"
#include "memoria/service/service.hpp"

#include "support.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <thread>

using namespace memoria;
using namespace memoria::testing;
using nlohmann::json;

namespace {

const synth::Corpus& corpus() {
    static const auto c = synth::load_corpus(sample_dir());
    return c;
}

service::Request post(std::string path, json body, std::string auth = "") {
    return {"POST", std::move(path), body.dump(), std::move(auth)};
}

service::Request get(std::string path, std::string auth = "") { return {"GET", std::move(path), "", std::move(auth)}; }

std::string create(service::ServiceCore& core, const std::string& patient = "P001") {
    const auto r = core.handle(post("/sessions", {{"patient_id", patient}}));
    EXPECT_EQ(r.status, 201) << r.body.dump();
    return r.body.at("id").get<std::string>();
}

// Runs an HttpServer on a free port for the lifetime of the object.
class LiveServer {
public:
    explicit LiveServer(service::ServiceCore& core) : server_(core) {
        port_ = server_.bind("127.0.0.1", 0);
        thread_ = std::jthread([this] { server_.listen(); });
        httplib::Client probe("127.0.0.1", port_);
        for (int i = 0; i < 200; ++i) {
            if (auto r = probe.Get("/healthz"); r && r->status == 200) return;
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        throw std::runtime_error("server did not come up");
    }
    ~LiveServer() { server_.stop(); }
    int port() const { return port_; }

private:
    service::HttpServer server_;
    int port_ = 0;
    std::jthread thread_;
};

} // namespace

TEST(Service, HealthAndPatients) {
    service::ServiceCore core({}, corpus(), mock_gateway());
    const auto h = core.handle(get("/healthz"));
    EXPECT_EQ(h.status, 200);
    EXPECT_EQ(h.body.at("patients"), 3);
    const auto p = core.handle(get("/patients"));
    ASSERT_EQ(p.status, 200);
    EXPECT_EQ(p.body.at("patients")[0].at("id"), "P001");
    EXPECT_EQ(p.body.at("patients")[0].at("dialogues"), 10);
    EXPECT_EQ(core.patient_ids(), (std::vector<std::string>{"P001", "P002", "P003"}));
}

TEST(Service, GraphsRoundTrip) {
    service::ServiceCore core({}, corpus(), mock_gateway());
    const auto r = core.handle(get("/patients/P001/graphs/memory"));
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(kg::load_graph(r.body.dump()), kg::canonical(corpus().patients[0].memory));
    EXPECT_EQ(core.handle(get("/patients/P001/graphs/weekly")).status, 404);
    EXPECT_EQ(core.handle(get("/patients/P404/graphs/daily")).status, 404);
}

TEST(Service, MessageEqualsDirectPlannerRun) {
    const auto gw = mock_gateway();
    service::ServiceCore core({}, corpus(), gw);
    const auto id = create(core);
    const auto r = core.handle(
        post("/sessions/" + id + "/messages", {{"text", "When is lunch?"}, {"timestamp", "2024-05-01T11:00:00"}}));
    ASSERT_EQ(r.status, 200) << r.body.dump();
    const retrieval::GraphPair g(corpus().patients[0].daily, corpus().patients[0].memory);
    EXPECT_EQ(r.body, planner::to_json(planner::run(turn("When is lunch?", "2024-05-01T11:00:00"), g, *gw)));

    const auto s = core.handle(get("/sessions/" + id));
    ASSERT_EQ(s.status, 200);
    ASSERT_EQ(s.body.at("turns").size(), 1u);
    EXPECT_EQ(s.body.at("turns")[0].at("response"), r.body);
}

TEST(Service, EquivalenceOverHttp) {
    const auto gw = mock_gateway();
    service::ServiceCore core({}, corpus(), gw);
    LiveServer server(core);
    httplib::Client client("127.0.0.1", server.port());
    Rng rng(31);
    for (int i = 0; i < 15; ++i) {
        const auto& patient = corpus().patients[static_cast<std::size_t>(i) % corpus().patients.size()];
        auto created = client.Post("/sessions", json{{"patient_id", patient.id()}}.dump(), "application/json");
        ASSERT_TRUE(created);
        ASSERT_EQ(created->status, 201);
        const auto id = json::parse(created->body).at("id").get<std::string>();
        const auto text = random_words(rng, 2, 8) + "?";
        const auto minute = std::uniform_int_distribution<int>(0, 24 * 60 - 1)(rng);
        char ts[32];
        std::snprintf(ts, sizeof ts, "2024-05-01T%02d:%02d:00", minute / 60, minute % 60);
        auto res = client.Post("/sessions/" + id + "/messages", json{{"text", text}, {"timestamp", ts}}.dump(),
                               "application/json");
        ASSERT_TRUE(res);
        ASSERT_EQ(res->status, 200) << res->body;
        const retrieval::GraphPair g(patient.daily, patient.memory);
        EXPECT_EQ(json::parse(res->body), planner::to_json(planner::run(turn(text, ts), g, *gw))) << text;
    }
}

TEST(Service, CorsPreflight) {
    service::ServiceCore core({}, corpus(), mock_gateway());
    LiveServer server(core);
    httplib::Client client("127.0.0.1", server.port());
    auto r = client.Options("/sessions");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 204);
    EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST(Service, TimestampsMustIncrease) {
    service::ServiceCore core({}, corpus(), mock_gateway());
    const auto id = create(core);
    const auto path = "/sessions/" + id + "/messages";
    EXPECT_EQ(core.handle(post(path, {{"text", "When is lunch?"}, {"timestamp", "2024-05-01T11:00:00"}})).status, 200);
    const auto same = core.handle(post(path, {{"text", "When is dinner?"}, {"timestamp", "2024-05-01T11:00:00"}}));
    EXPECT_EQ(same.status, 422);
    EXPECT_EQ(same.body.at("code"), "timestamp_order");
    EXPECT_EQ(core.handle(post(path, {{"text", "When is dinner?"}, {"timestamp", "2024-05-01T12:00:00"}})).status, 200);
}

TEST(Service, RequestErrors) {
    service::ServiceCore core({}, corpus(), mock_gateway());
    EXPECT_EQ(core.handle({"POST", "/sessions", "not json", ""}).status, 400);
    EXPECT_EQ(core.handle(post("/sessions", json::object())).status, 400);
    EXPECT_EQ(core.handle(post("/sessions", {{"patient_id", "P999"}})).body.at("code"), "unknown_patient");
    EXPECT_EQ(core.handle(post("/sessions/s-none/messages", {{"text", "hi"}})).status, 404);
    EXPECT_EQ(core.handle(get("/nowhere")).status, 404);
    EXPECT_EQ(core.handle({"DELETE", "/sessions", "", ""}).status, 405);
    const auto id = create(core);
    const auto path = "/sessions/" + id + "/messages";
    EXPECT_EQ(core.handle(post(path, {{"text", "   "}})).body.at("code"), "bad_turn");
    EXPECT_EQ(core.handle(post(path, {{"text", "hi"}, {"timestamp", "yesterday"}})).body.at("code"), "bad_timestamp");
    EXPECT_EQ(core.handle(post(path, {{"words", "hi"}})).status, 400);
}

TEST(Service, BearerToken) {
    service::ServiceConfig config;
    config.token = "s3cret";
    service::ServiceCore core(config, corpus(), mock_gateway());
    EXPECT_EQ(core.handle(get("/healthz")).status, 200);
    const auto denied = core.handle(get("/patients"));
    EXPECT_EQ(denied.status, 401);
    EXPECT_EQ(denied.body.at("code"), "unauthorized");
    EXPECT_EQ(core.handle(get("/patients", "Bearer wrong")).status, 401);
    EXPECT_EQ(core.handle(get("/patients", "Bearer s3cret")).status, 200);
}

TEST(Service, PlannerAbortIsBadGatewayWithTrace) {
    auto backend = std::make_shared<ScriptedBackend>();
    int n = 0;
    backend->on(llm::Task::evaluate, [&](const llm::GatewayRequest&) -> std::string {
        if (++n == 1) return R"({"efficiency":0.1})";
        throw GatewayError("connection reset");
    });
    service::ServiceCore core({}, corpus(), std::make_shared<llm::Gateway>(backend));
    const auto id = create(core);
    const auto r = core.handle(post("/sessions/" + id + "/messages", {{"text", "Where is the garden?"}}));
    EXPECT_EQ(r.status, 502);
    EXPECT_EQ(r.body.at("code"), "planner_aborted");
    EXPECT_EQ(r.body.at("detail").at("trace").size(), 1u);
    EXPECT_EQ(core.handle(get("/sessions/" + id)).body.at("turns").size(), 0u);
}

TEST(Service, ConcurrentMessageOnSameSessionIsBusy) {
    auto backend = std::make_shared<ScriptedBackend>();
    std::promise<void> entered;
    std::promise<void> release;
    auto released = release.get_future().share();
    backend->on(llm::Task::generate, [&](const llm::GatewayRequest&) {
        entered.set_value();
        released.wait();
        return std::string(R"({"text":"Lunch is at noon."})");
    });
    backend->on(llm::Task::evaluate, [](const llm::GatewayRequest&) { return std::string(R"({"efficiency":0.9})"); });
    service::ServiceCore core({}, corpus(), std::make_shared<llm::Gateway>(backend));
    const auto id = create(core);
    const auto other = create(core);
    const auto path = "/sessions/" + id + "/messages";
    auto first = std::async(std::launch::async, [&] {
        return core.handle(post(path, {{"text", "When is lunch?"}, {"timestamp", "2024-05-01T11:00:00"}}));
    });
    entered.get_future().wait();
    const auto second = core.handle(post(path, {{"text", "When is dinner?"}, {"timestamp", "2024-05-01T11:05:00"}}));
    EXPECT_EQ(second.status, 409);
    EXPECT_EQ(second.body.at("code"), "session_busy");
    // other sessions and reads are not blocked
    EXPECT_EQ(core.handle(get("/sessions/" + other)).status, 200);
    release.set_value();
    EXPECT_EQ(first.get().status, 200);
}

TEST(Service, JournalReplay) {
    TempDir dir("service");
    synth::write_corpus(corpus(), dir.path());
    service::ServiceConfig config;
    config.data_dir = dir.path();
    std::string id;
    json before;
    {
        service::ServiceCore core(config, mock_gateway());
        id = create(core, "P002");
        const auto path = "/sessions/" + id + "/messages";
        core.handle(post(path, {{"text", "When is lunch?"}, {"timestamp", "2024-05-01T11:00:00"}}));
        core.handle(post(path, {{"text", "Who is visiting?"}, {"timestamp", "2024-05-01T15:00:00"}}));
        before = core.handle(get("/sessions/" + id)).body;
    }
    EXPECT_TRUE(std::filesystem::exists(dir.path() / "sessions" / (id + ".jsonl")));
    service::ServiceCore again(config, mock_gateway());
    EXPECT_EQ(again.session_count(), 1u);
    EXPECT_EQ(again.handle(get("/sessions/" + id)).body, before);
    // replayed sessions keep the ordering rule
    const auto late = again.handle(
        post("/sessions/" + id + "/messages", {{"text", "When is dinner?"}, {"timestamp", "2024-05-01T14:00:00"}}));
    EXPECT_EQ(late.status, 422);
}

TEST(Service, CorruptJournalFailsStartup) {
    TempDir dir("service-bad");
    synth::write_corpus(corpus(), dir.path());
    std::filesystem::create_directories(dir.path() / "sessions");
    std::ofstream(dir.path() / "sessions" / "s-bad.jsonl") << "{\"type\":\"turn\"}\n";
    service::ServiceConfig config;
    config.data_dir = dir.path();
    EXPECT_THROW(service::ServiceCore(config, mock_gateway()), ParseError);
}

TEST(Service, EvalAblationEndpoint) {
    service::ServiceCore core({}, corpus(), mock_gateway());
    const json gold = json::array({{{"dialogue_id", "P001-D01"},
                                    {"scores",
                                     {{"coherence", 9.46},
                                      {"empathy", 8.48},
                                      {"memory_support", 8.06},
                                      {"emotional_safety", 9.49},
                                      {"problem_solving", 9.32}}}}});
    const auto r = core.handle(post("/eval/ablation", {{"patients", 1}, {"gold", gold}}));
    ASSERT_EQ(r.status, 200) << r.body.dump();
    EXPECT_EQ(r.body.at("result").at("judge_table").size(), 4u);
    EXPECT_TRUE(r.body.at("radar").at("normalized").get<bool>());
    EXPECT_EQ(r.body.at("metrics_tables").size(), 3u);
    EXPECT_EQ(r.body.at("result").at("reports")[0].at("items").size(), 10u);
    EXPECT_EQ(core.handle(post("/eval/ablation", {{"variants", {"baseline9"}}})).status, 400);
    EXPECT_EQ(core.handle(post("/eval/ablation", {{"judge_mode", "harsh"}})).status, 400);
}

TEST(ServiceConfig, FromEnvironment) {
    ::setenv("MEMORIA_PORT", "9191", 1);
    ::setenv("MEMORIA_THRESHOLD", "0.6", 1);
    auto c = service::config_from_env();
    EXPECT_EQ(c.port, 9191);
    EXPECT_DOUBLE_EQ(c.planner.threshold, 0.6);
    ::setenv("MEMORIA_PORT", "ninety", 1);
    EXPECT_THROW(service::config_from_env(), PreconditionError);
    ::unsetenv("MEMORIA_PORT");
    ::unsetenv("MEMORIA_THRESHOLD");
}
