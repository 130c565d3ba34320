#include "memoria/kg/query.hpp"
#include "memoria/query/analysis.hpp"
#include "memoria/retrieval/retrieval.hpp"
#include "memoria/synth/corpus.hpp"

#include <benchmark/benchmark.h>

using namespace memoria;

namespace {

const synth::PatientRecord& patient() {
    static const auto corpus = synth::load_corpus(MEMORIA_SAMPLE_DIR);
    return corpus.patients[0];
}

} // namespace

static void BM_Search(benchmark::State& state) {
    const retrieval::GraphPair graphs(patient().daily, patient().memory);
    const query::KeywordSet keywords{"lunch", "garden", "birthday", "visit", "tea"};
    const auto now = parse_timestamp("2024-05-01T11:30:00");
    for (auto _ : state) {
        benchmark::DoNotOptimize(retrieval::search(graphs, keywords, {0.5, 0.5}, now, 3));
    }
}
BENCHMARK(BM_Search);

static void BM_GraphPairIndex(benchmark::State& state) {
    for (auto _ : state) {
        retrieval::GraphPair graphs(patient().daily, patient().memory);
        benchmark::DoNotOptimize(graphs);
    }
}
BENCHMARK(BM_GraphPairIndex);

static void BM_CurrentActivity(benchmark::State& state) {
    int minute = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kg::find_current_activity(patient().daily, TimeOfDay(minute)));
        minute = (minute + 7) % TimeOfDay::kMinutesPerDay;
    }
}
BENCHMARK(BM_CurrentActivity);
