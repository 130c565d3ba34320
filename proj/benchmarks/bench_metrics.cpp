#include "memoria/eval/metrics.hpp"

#include <benchmark/benchmark.h>

#include <string>

using namespace memoria;

namespace {

std::string sentence(int words, int salt) {
    static const char* pool[] = {"lunch", "garden", "tea", "visit", "the", "room", "walk", "music", "nurse", "today"};
    std::string out;
    for (int i = 0; i < words; ++i) out += std::string(i ? " " : "") + pool[(i * 7 + salt) % 10];
    return out;
}

} // namespace

static void BM_Rouge(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(1));
    const auto cand = sentence(static_cast<int>(state.range(0)), 1);
    const auto ref = sentence(static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(eval::rouge_n(cand, ref, n));
}
BENCHMARK(BM_Rouge)->ArgsProduct({{10, 50, 200}, {1, 2}});

static void BM_CountVectorSimilarity(benchmark::State& state) {
    eval::CountVectorEmbedding e;
    const auto a = sentence(static_cast<int>(state.range(0)), 1);
    const auto b = sentence(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(eval::semantic_similarity(a, b, e));
}
BENCHMARK(BM_CountVectorSimilarity)->Arg(10)->Arg(200);
