#pragma once

#include "memoria/errors.hpp"
#include "memoria/kg/graph.hpp"
#include "memoria/llm/gateway.hpp"
#include "memoria/llm/mock_backend.hpp"
#include "memoria/query/analysis.hpp"
#include "memoria/synth/corpus.hpp"
#include "memoria/time.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace memoria::testing {

using Rng = std::mt19937_64;

/// Small shared vocabulary so random keyword sets hit random nodes.
const std::vector<std::string>& word_pool();
std::string random_words(Rng& rng, int min_words, int max_words);

/// Random graphs that satisfy every kg invariant.
kg::KnowledgeGraph random_daily_graph(Rng& rng, int persons, int activities);
kg::KnowledgeGraph random_memory_graph(Rng& rng, int persons, int events);

/// Activities only, with arbitrary (possibly overlapping) forward slots.
kg::KnowledgeGraph random_schedule(Rng& rng, int activities);

/// Plain linear scan over every activity: keep those whose slot contains t,
/// prefer the latest start, then the smallest id.
std::optional<std::string> brute_force_current(const kg::KnowledgeGraph& graph, TimeOfDay t);

/// ASCII-only tokenizer used by the oracles: lowercase, split on
/// non-alphanumerics, drop tokens shorter than two characters.
std::vector<std::string> oracle_tokens(const std::string& text);

/// Clipped n-gram F1 counted by nested loops over joined n-gram strings.
double brute_force_rouge(const std::string& candidate, const std::string& reference, int n);

/// |K ∩ tokens| / |K| with the token bag as a plain vector.
double brute_force_relevance(const std::vector<std::string>& tokens, const std::vector<std::string>& keywords);

query::DialogueTurn turn(const std::string& text, const std::string& timestamp = "2024-05-01T08:30:00");

std::shared_ptr<llm::Gateway> mock_gateway(llm::MockScript script = llm::MockScript::standard());
std::shared_ptr<llm::Gateway> scripted_eta_gateway(std::vector<double> etas,
                                                   llm::WeightRule rule = llm::WeightRule::toward_hits);

/// Backend that answers from a per-task function and counts calls per task;
/// tasks without a function fall through to the standard mock.
class ScriptedBackend final : public llm::Backend {
public:
    using Handler = std::function<std::string(const llm::GatewayRequest&)>;

    std::string_view name() const override { return "scripted"; }
    std::string complete(const llm::GatewayRequest& request, const llm::Prompt& prompt) override;

    void on(llm::Task task, Handler handler) { handlers_[task] = std::move(handler); }
    int calls(llm::Task task) const;
    int total_calls() const;

private:
    std::map<llm::Task, Handler> handlers_;
    std::map<llm::Task, int> calls_;
    llm::MockBackend fallback_;
    mutable std::mutex mutex_;
};

/// Bundled sample corpus shipped under core/data/sample.
std::filesystem::path sample_dir();
std::filesystem::path fixtures_dir();

/// Fresh empty directory under the system temp dir, removed by the destructor.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

/// One crafted invalid graph document and the validation code it must raise.
struct InvalidCase {
    std::string name;
    std::string document;
    ValidationCode expected;
};

inline void PrintTo(const InvalidCase& c, std::ostream* os) { *os << c.name; }

/// Fifty documents, each breaking exactly one named invariant.
std::vector<InvalidCase> invalid_graph_cases();

} // namespace memoria::testing
