#include "memoria/llm/gateway.hpp"
#include "memoria/llm/mock_backend.hpp"
#include "memoria/planner/planner.hpp"
#include "memoria/synth/corpus.hpp"

#include <benchmark/benchmark.h>

using namespace memoria;

namespace {

const synth::Corpus& corpus() {
    static const auto c = synth::load_corpus(MEMORIA_SAMPLE_DIR);
    return c;
}

} // namespace

// Whole reflection loop against the mock model, cycling through the sample dialogues.
static void BM_PlannerRunMock(benchmark::State& state) {
    const auto& p = corpus().patients[0];
    const retrieval::GraphPair graphs(p.daily, p.memory);
    const llm::Gateway gateway(std::make_shared<llm::MockBackend>());
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& d = p.draft.dialogues[i++ % p.draft.dialogues.size()];
        benchmark::DoNotOptimize(planner::run({d.text, d.timestamp}, graphs, gateway));
    }
}
BENCHMARK(BM_PlannerRunMock);

static void BM_GenerateCorpus(benchmark::State& state) {
    const llm::Gateway gateway(std::make_shared<llm::MockBackend>());
    for (auto _ : state) {
        benchmark::DoNotOptimize(synth::generate_corpus(static_cast<int>(state.range(0)), 7, gateway));
    }
}
BENCHMARK(BM_GenerateCorpus)->Arg(10)->Unit(benchmark::kMillisecond);
