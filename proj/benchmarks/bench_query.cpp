#include <benchmark/benchmark.h>

#include "rmtt/bgp.hpp"
#include "rmtt/generator.hpp"
#include "rmtt/planner.hpp"

namespace {

using namespace rmtt;

// A path query shaped like the suite's member/subOrganization joins.
constexpr const char* kPathQuery = R"(
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
PREFIX ub: <http://www.lehigh.edu/~zhp2/2004/0401/univ-bench.owl#>
SELECT ?X ?Y ?Z
WHERE {
  ?X rdf:type ub:Student .
  ?Y rdf:type ub:Department .
  ?X ub:memberOf ?Y .
  ?Y ub:subOrganizationOf <http://www.University0.edu> .
  ?X ub:emailAddress ?Z
}
)";

struct Stores {
    SingleStore single;
    VpStore vp;
    TwinTables rmtt;
    bgp::BgpQuery query;
};

const Stores& stores() {
    static Stores s = [] {
        gen::GenConfig cfg;
        cfg.universities = 3;
        cfg.departments_per_university = 2;
        cfg.students_per_department = 300;
        auto triples = gen::generate(cfg);
        return Stores{SingleStore::build(triples), VpStore::build(triples),
                      TwinTables::build(triples),
                      std::get<bgp::BgpQuery>(bgp::parse_query(kPathQuery))};
    }();
    return s;
}

void run(benchmark::State& state, EngineView view) {
    const Stores& s = stores();
    Plan p = plan(s.query, view);
    std::size_t rows = 0;
    for (auto _ : state) {
        ExecResult r = execute(p, view);
        rows = r.stats.rows_out;
        benchmark::DoNotOptimize(rows);
    }
    state.counters["rows"] = static_cast<double>(rows);
}

void BM_ExecSingle(benchmark::State& state) { run(state, EngineView::of(stores().single)); }
void BM_ExecVp(benchmark::State& state) { run(state, EngineView::of(stores().vp)); }
void BM_ExecRmttSound(benchmark::State& state) { run(state, EngineView::of(stores().rmtt, false)); }
void BM_ExecRmttPruned(benchmark::State& state) { run(state, EngineView::of(stores().rmtt, true)); }

void BM_MatchSingle(benchmark::State& state) {
    const Stores& s = stores();
    auto type = s.single.dict().lookup(
        iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"));
    auto student = s.single.dict().lookup(
        iri("http://www.lehigh.edu/~zhp2/2004/0401/univ-bench.owl#Student"));
    TriplePattern pattern{{}, *type, *student};
    for (auto _ : state) {
        auto m = s.single.match(pattern);
        benchmark::DoNotOptimize(m.rows.size());
    }
}

}  // namespace

BENCHMARK(BM_ExecSingle);
BENCHMARK(BM_ExecVp);
BENCHMARK(BM_ExecRmttSound);
BENCHMARK(BM_ExecRmttPruned);
BENCHMARK(BM_MatchSingle);

BENCHMARK_MAIN();
