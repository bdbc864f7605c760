#include <benchmark/benchmark.h>

#include "rmtt/generator.hpp"
#include "rmtt/single_store.hpp"
#include "rmtt/twin_store.hpp"
#include "rmtt/vp_store.hpp"

namespace {

const std::vector<rmtt::Triple>& dataset(std::int64_t students) {
    static std::map<std::int64_t, std::vector<rmtt::Triple>> cache;
    auto it = cache.find(students);
    if (it == cache.end()) {
        rmtt::gen::GenConfig cfg;
        cfg.universities = 2;
        cfg.departments_per_university = 2;
        cfg.students_per_department = static_cast<std::uint32_t>(students);
        it = cache.emplace(students, rmtt::gen::generate(cfg)).first;
    }
    return it->second;
}

void BM_BuildSingle(benchmark::State& state) {
    const auto& triples = dataset(state.range(0));
    for (auto _ : state) {
        auto store = rmtt::SingleStore::build(triples);
        benchmark::DoNotOptimize(store.triple_count());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(triples.size()));
}

void BM_BuildVp(benchmark::State& state) {
    const auto& triples = dataset(state.range(0));
    for (auto _ : state) {
        auto store = rmtt::VpStore::build(triples);
        benchmark::DoNotOptimize(store.triple_count());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(triples.size()));
}

void BM_BuildRmtt(benchmark::State& state) {
    const auto& triples = dataset(state.range(0));
    for (auto _ : state) {
        auto store = rmtt::TwinTables::build(triples);
        benchmark::DoNotOptimize(store.triple_count());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(triples.size()));
}

}  // namespace

BENCHMARK(BM_BuildSingle)->Arg(50)->Arg(200)->Arg(800);
BENCHMARK(BM_BuildVp)->Arg(50)->Arg(200)->Arg(800);
BENCHMARK(BM_BuildRmtt)->Arg(50)->Arg(200)->Arg(800);

BENCHMARK_MAIN();
