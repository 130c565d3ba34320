#include "cli.hpp"

#include "memoria/errors.hpp"
#include "memoria/eval/ablation.hpp"
#include "memoria/io.hpp"
#include "memoria/kg/graph_io.hpp"
#include "memoria/llm/http_backend.hpp"
#include "memoria/llm/mock_backend.hpp"
#include "memoria/planner/planner.hpp"
#include "memoria/service/service.hpp"
#include "memoria/synth/corpus.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#ifndef MEMORIA_SAMPLE_DIR
#define MEMORIA_SAMPLE_DIR "data/sample"
#endif

namespace memoria::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

struct Common {
    std::string backend = "mock";
    std::uint64_t seed = 0;
    std::string audit;
    std::string embeddings = "count";
};

struct PlannerFlags {
    planner::PlannerConfig config;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--backend", c.backend, "Model backend")->check(CLI::IsMember({"mock", "http"}));
    cmd->add_option("--seed", c.seed, "Seed for the mock model and the corpus generator");
    cmd->add_option("--audit", c.audit, "Append one JSON line per model call to this file");
}

void add_planner(CLI::App* cmd, PlannerFlags& p) {
    cmd->add_option("--threshold", p.config.threshold, "Efficiency needed to answer");
    cmd->add_option("--max-attempts", p.config.max_attempts, "Reflection attempts before a follow-up");
    cmd->add_option("--top-k", p.config.top_k, "Candidates per graph");
}

class FileAuditSink final : public llm::AuditSink {
public:
    explicit FileAuditSink(const fs::path& path) : file_(path, std::ios::app), sink_(file_) {
        if (!file_) throw Error("cannot open audit log " + path.string());
    }
    void record(const llm::AuditRecord& r) override {
        std::lock_guard lock(mutex_);
        sink_.record(r);
    }

private:
    std::mutex mutex_;
    std::ofstream file_;
    llm::StreamAuditSink sink_;
};

std::shared_ptr<llm::Gateway> make_gateway(const Common& c) {
    std::shared_ptr<llm::AuditSink> audit;
    if (!c.audit.empty()) audit = std::make_shared<FileAuditSink>(c.audit);
    if (c.backend == "http") {
        return std::make_shared<llm::Gateway>(std::make_shared<llm::HttpBackend>(llm::HttpConfig::from_env()), audit);
    }
    return std::make_shared<llm::Gateway>(std::make_shared<llm::MockBackend>(llm::MockScript::standard(c.seed)),
                                          audit);
}

std::shared_ptr<eval::EmbeddingBackend> make_embeddings(const Common& c) {
    if (c.embeddings == "http") {
        const char* model = std::getenv("MEMORIA_EMBEDDING_MODEL");
        return std::make_shared<eval::HttpEmbedding>(llm::HttpConfig::from_env(),
                                                     model != nullptr ? model : "text-embedding-3-small");
    }
    return std::make_shared<eval::CountVectorEmbedding>();
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string join_ids(const std::vector<retrieval::ScoredNode>& hits) {
    std::string out;
    for (const auto& h : hits) out += (out.empty() ? "" : ", ") + h.node_id + " " + fixed(h.score);
    return out.empty() ? "-" : out;
}

void print_trace(const planner::PlannerResponse& r, std::ostream& out) {
    for (const auto& t : r.trace) {
        out << "  attempt " << t.attempt << "  eta " << fixed(t.efficiency) << "  weights daily "
            << fixed(t.weights_used.daily) << " memory " << fixed(t.weights_used.memory) << "\n";
        out << "    current: "
            << (t.candidates.current_activity ? t.candidates.current_activity->id : std::string("-")) << "\n";
        out << "    daily:   " << join_ids(t.candidates.daily_hits) << "\n";
        out << "    memory:  " << join_ids(t.candidates.memory_hits) << "\n";
        if (t.weight_adjustment) {
            out << "    -> weights daily " << fixed(t.weight_adjustment->daily) << " memory "
                << fixed(t.weight_adjustment->memory) << "\n";
        }
        if (!t.keywords_added.empty()) {
            out << "    -> keywords +";
            for (const auto& k : t.keywords_added) out << " " << k;
            out << "\n";
        }
    }
}

int chat(const Common& c, const PlannerFlags& p, const std::string& data, const std::string& patient_id,
         const std::string& date, std::string time, bool quiet, std::istream& in, std::ostream& out,
         std::ostream& err) {
    const auto corpus = synth::load_corpus(data);
    const auto* patient = corpus.find(patient_id);
    if (patient == nullptr) {
        err << "unknown patient " << patient_id << "\n";
        return kExitInvalid;
    }
    const retrieval::GraphPair graphs(patient->daily, patient->memory);
    const auto gateway = make_gateway(c);
    planner::validate(p.config);
    auto now = parse_timestamp(date + "T" + time);
    if (!quiet) out << "chatting with " << patient->draft.profile.name << " at " << format_timestamp(now) << "\n";

    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (line == ":quit" || line == ":q") break;
        if (line.rfind(":time ", 0) == 0) {
            now = parse_timestamp(date + "T" + line.substr(6));
            if (!quiet) out << "clock set to " << format_timestamp(now) << "\n";
            continue;
        }
        try {
            const auto r = planner::run({line, now}, graphs, *gateway, p.config);
            out << (r.generated() ? "" : "[follow-up] ") << r.text() << "\n";
            if (!quiet) print_trace(r, out);
        } catch (const planner::PlannerAborted& e) {
            err << e.what() << "\n";
        }
    }
    return kExitOk;
}

int serve(const Common& c, const PlannerFlags& p, service::ServiceConfig config, std::ostream& out) {
    config.planner = p.config;
    service::ServiceCore core(config, make_gateway(c), make_embeddings(c));
    service::HttpServer server(core);
    g_stop = false;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    const int port = server.bind(config.host, config.port);
    out << "listening on " << config.host << ":" << port << std::endl;

    std::jthread watcher([&](std::stop_token st) {
        while (!st.stop_requested() && !g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(50));
        server.stop();
    });
    server.listen();
    watcher.request_stop();
    out << "stopped" << std::endl;
    return kExitOk;
}

int gen_corpus(const Common& c, int patients, const std::string& out_dir, int jobs, std::ostream& out) {
    const auto gateway = make_gateway(c);
    const auto corpus = synth::generate_corpus(patients, c.seed, *gateway, jobs);
    synth::write_corpus(corpus, out_dir);
    const auto m = synth::manifest(corpus);
    out << "wrote " << m.at("patients") << " patients, " << m.at("dialogues") << " dialogues ("
        << m.at("clear") << " clear, " << m.at("confused") << " confused) to " << out_dir << "\n";
    return kExitOk;
}

int validate_graphs(const std::vector<std::string>& files, std::ostream& out, std::ostream& err) {
    int status = kExitOk;
    for (const auto& f : files) {
        try {
            const auto g = kg::load_graph_file(f);
            out << "ok " << f << "\n";
        } catch (const ValidationError& e) {
            err << "invalid " << f << ": " << e.what() << "\n";
            status = kExitInvalid;
        } catch (const ParseError& e) {
            err << "invalid " << f << ": " << e.what() << "\n";
            status = kExitInvalid;
        } catch (const WrongGraphKind& e) {
            err << "invalid " << f << ": " << e.what() << "\n";
            status = kExitInvalid;
        }
    }
    return status;
}

struct EvalFlags {
    std::string corpus;
    std::string gold;
    std::string out;
    std::string judge_mode = "blind";
    int jobs = 1;
};

eval::AblationResult evaluate(const Common& c, const PlannerFlags& p, const EvalFlags& f,
                              const std::vector<eval::Variant>& variants) {
    const auto corpus = synth::load_corpus(f.corpus);
    const auto gateway = make_gateway(c);
    const auto embeddings = make_embeddings(c);
    std::vector<eval::AblationConfig> configs;
    for (auto v : variants) configs.push_back({v, p.config});
    eval::GoldSet gold;
    eval::AblationOptions options;
    options.jobs = f.jobs;
    options.judge_mode = f.judge_mode == "with_reference" ? eval::JudgeMode::with_reference : eval::JudgeMode::blind;
    if (!f.gold.empty()) {
        gold = eval::load_gold_file(f.gold);
        options.gold = &gold;
    }
    return eval::run_ablation(corpus, configs, *gateway, *embeddings, options);
}

void write_reports(const eval::AblationResult& result, const std::string& dir, bool judge_table) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    std::string table2;
    for (const auto& r : result.reports) table2 += eval::metrics_table(r) + "\n";
    write_file_atomic(fs::path(dir) / "metrics_table.txt", table2);
    write_file_atomic(fs::path(dir) / "report.json", eval::to_json(result).dump(2) + "\n");
    if (judge_table) {
        write_file_atomic(fs::path(dir) / "judge_table.txt", eval::judge_table(result));
        write_file_atomic(fs::path(dir) / "radar.json", eval::radar_json(result).dump(2) + "\n");
    }
}

std::size_t failures(const eval::AblationResult& result) {
    std::size_t n = 0;
    for (const auto& r : result.reports) n += r.failed;
    return n;
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dementia-care dialogue engine"};
    app.require_subcommand(1);
    Common common;
    PlannerFlags planner_flags;

    auto* chat_cmd = app.add_subcommand("chat", "Interactive chat against one patient's graphs");
    std::string data = MEMORIA_SAMPLE_DIR;
    std::string patient = "P001";
    std::string date = "2024-05-01";
    std::string time = "08:30";
    bool quiet = false;
    add_common(chat_cmd, common);
    add_planner(chat_cmd, planner_flags);
    chat_cmd->add_option("--data", data, "Corpus directory");
    chat_cmd->add_option("--patient", patient, "Patient id");
    chat_cmd->add_option("--date", date, "Simulated date (YYYY-MM-DD)");
    chat_cmd->add_option("--time", time, "Simulated time of day (HH:MM); ':time HH:MM' changes it");
    chat_cmd->add_flag("--quiet", quiet, "Print answers only");

    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    service::ServiceConfig service_config;
    service_config.data_dir = MEMORIA_SAMPLE_DIR;
    service_config = service::config_from_env(service_config);
    std::string token;
    std::string data_dir = service_config.data_dir.string();
    add_common(serve_cmd, common);
    add_planner(serve_cmd, planner_flags);
    serve_cmd->add_option("--data", data_dir, "Corpus directory; sessions are journaled under it");
    serve_cmd->add_option("--host", service_config.host, "Bind address");
    serve_cmd->add_option("--port", service_config.port, "Port, 0 for any free one");
    serve_cmd->add_option("--token", token, "Require this bearer token");
    serve_cmd->add_option("--jobs", service_config.eval_jobs, "Worker threads for /eval/ablation");
    serve_cmd->add_option("--embeddings", common.embeddings, "Similarity backend")
        ->check(CLI::IsMember({"count", "http"}));

    auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate a synthetic patient corpus");
    int patients = 100;
    std::string out_dir = "data";
    int gen_jobs = 1;
    add_common(gen_cmd, common);
    gen_cmd->add_option("--patients", patients, "Number of patients")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--out", out_dir, "Output directory");
    gen_cmd->add_option("--jobs", gen_jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* validate_cmd = app.add_subcommand("validate-graph", "Validate knowledge graph documents");
    std::vector<std::string> graph_files;
    add_common(validate_cmd, common);
    validate_cmd->add_option("files", graph_files, "Graph JSON files")->required();

    EvalFlags eval_flags;
    auto add_eval = [&](CLI::App* cmd) {
        add_common(cmd, common);
        add_planner(cmd, planner_flags);
        cmd->add_option("--corpus", eval_flags.corpus, "Corpus directory")->required();
        cmd->add_option("--gold", eval_flags.gold, "Gold JSONL: {dialogue_id, gold_response?, scores?}");
        cmd->add_option("--out", eval_flags.out, "Report directory");
        cmd->add_option("--judge-mode", eval_flags.judge_mode, "Whether the judge sees the reference")
            ->check(CLI::IsMember({"blind", "with_reference"}));
        cmd->add_option("--jobs", eval_flags.jobs, "Worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--embeddings", common.embeddings, "Similarity backend")
            ->check(CLI::IsMember({"count", "http"}));
    };
    auto* eval_cmd = app.add_subcommand("eval", "Score one variant with ROUGE and semantic similarity");
    std::string variant = "full";
    add_eval(eval_cmd);
    eval_cmd->add_option("--variant", variant, "baseline1, baseline2 or full")
        ->check(CLI::IsMember({"baseline1", "baseline2", "full"}));
    auto* ablate_cmd = app.add_subcommand("ablate", "Run every variant and the judge");
    add_eval(ablate_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*chat_cmd) return chat(common, planner_flags, data, patient, date, time, quiet, in, out, err);
        if (*serve_cmd) {
            service_config.data_dir = data_dir;
            if (!token.empty()) service_config.token = token;
            return serve(common, planner_flags, service_config, out);
        }
        if (*gen_cmd) return gen_corpus(common, patients, out_dir, gen_jobs, out);
        if (*validate_cmd) return validate_graphs(graph_files, out, err);
        if (*eval_cmd) {
            const auto result = evaluate(common, planner_flags, eval_flags, {eval::parse_variant(variant)});
            out << eval::metrics_table(result.reports.front());
            write_reports(result, eval_flags.out, false);
            return failures(result) == 0 ? kExitOk : kExitRuntime;
        }
        if (*ablate_cmd) {
            const auto result = evaluate(common, planner_flags, eval_flags,
                                         {eval::kVariants.begin(), eval::kVariants.end()});
            for (const auto& r : result.reports) out << eval::metrics_table(r) << "\n";
            out << eval::judge_table(result);
            write_reports(result, eval_flags.out, true);
            return failures(result) == 0 ? kExitOk : kExitRuntime;
        }
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const PreconditionError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}

} // namespace memoria::cli
