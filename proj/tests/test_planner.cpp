#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>

#include "doctest.h"
#include "rmtt/planner.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "support/random_data.hpp"

using namespace rmtt;

namespace {

struct Fig3Stores {
    SingleStore single;
    VpStore vp;
    TwinTables rmtt;

    static const Fig3Stores& get() {
        static Fig3Stores s{SingleStore::build(fixtures::fig3()), VpStore::build(fixtures::fig3()),
                            TwinTables::build(fixtures::fig3())};
        return s;
    }

    std::vector<EngineView> views() const {
        return {EngineView::of(single), EngineView::of(vp), EngineView::of(rmtt, false),
                EngineView::of(rmtt, true)};
    }
};

std::vector<std::vector<Term>> decoded_rows(const ExecResult& result, const Dictionary& dict) {
    std::vector<std::vector<Term>> rows;
    for (const auto& row : result.rows) {
        std::vector<Term> out;
        for (TermId id : row) out.push_back(dict.decode(id));
        rows.push_back(std::move(out));
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

std::vector<std::vector<Term>> run_on(const EngineView& view, const bgp::BgpQuery& query) {
    return decoded_rows(execute(plan(query, view), view), view.dict());
}

}  // namespace

TEST_CASE("single-pattern query plans as one scan with zero joins") {
    auto query = fixtures::query("m1.rq");
    bgp::BgpQuery one_pattern;
    one_pattern.select_vars = {"O"};
    one_pattern.patterns = {query.patterns[0]};
    for (const EngineView& view : Fig3Stores::get().views()) {
        Plan p = plan(one_pattern, view);
        CHECK(p.steps.size() == 1);
        CHECK(p.self_join_count() == 0);
        std::string text = explain(p, view);
        CHECK(text.find("0 self-joins\n") != std::string::npos);
    }
}

TEST_CASE("path query with one join self-joins on the single table") {
    auto query = fixtures::query("m2.rq");
    EngineView view = EngineView::of(Fig3Stores::get().single);
    Plan p = plan(query, view);
    REQUIRE(p.steps.size() == 2);
    CHECK(p.steps[1].join_vars.size() == 1);
    CHECK(p.steps[1].self_join);
    CHECK(p.self_join_count() == 1);
}

TEST_CASE("path query with two joins self-joins twice on the single table") {
    auto query = fixtures::query("m3.rq");
    EngineView view = EngineView::of(Fig3Stores::get().single);
    Plan p = plan(query, view);
    REQUIRE(p.steps.size() == 3);
    CHECK(p.steps[1].self_join);
    CHECK(p.steps[2].self_join);
    CHECK(p.self_join_count() == 2);
}

TEST_CASE("twin pruning turns the worked path join into a cross-twin join") {
    auto query = fixtures::query("m2.rq");
    EngineView view = EngineView::of(Fig3Stores::get().rmtt, true);
    Plan p = plan(query, view);
    REQUIRE(p.steps.size() == 2);
    const PlanStep& join = p.steps[1];
    REQUIRE(join.join_vars.size() == 1);
    CHECK(join.join_vars[0].pos_left == 'o');
    CHECK(join.join_vars[0].pos_right == 's');
    CHECK(join.prov_left == std::vector<TableId>{0});
    CHECK(join.prov_right == std::vector<TableId>{1});
    CHECK_FALSE(join.self_join);
    CHECK(p.self_join_count() == 0);

    // Sound mode keeps both twins on the right and flags the step.
    EngineView sound = EngineView::of(Fig3Stores::get().rmtt, false);
    Plan ps = plan(query, sound);
    CHECK(ps.steps[1].prov_right == std::vector<TableId>{0, 1});
    CHECK(ps.steps[1].self_join);
}

TEST_CASE("the four worked queries return the published rows on every engine") {
    using Rows = std::vector<std::vector<Term>>;
    Rows q1 = {{literal("Data Web")}};
    Rows q2 = {{literal("Bob Hacker")}};
    Rows q3 = {{fixtures::mag("B1"), fixtures::mag("A1")}};
    Rows q4 = {{fixtures::mag("A2"), fixtures::mag("B1")},
               {fixtures::mag("A2"), fixtures::mag("B2")}};

    for (const EngineView& view : Fig3Stores::get().views()) {
        CAPTURE(to_string(view.kind));
        CHECK(run_on(view, fixtures::query("m1.rq")) == q1);
        CHECK(run_on(view, fixtures::query("m2.rq")) == q2);
        CHECK(run_on(view, fixtures::query("m3.rq")) == q3);
        CHECK(run_on(view, fixtures::query("m4.rq")) == q4);
    }
}

TEST_CASE("explain is stable and prints the worked star query footer") {
    auto query = fixtures::query("m4.rq");
    EngineView view = EngineView::of(Fig3Stores::get().single);
    std::string first = explain(plan(query, view), view);
    std::string second = explain(plan(query, view), view);
    CHECK(first == second);
    CHECK(first.find("3 self-joins\n") != std::string::npos);
    CHECK(first.find("engine: single") == 0);
    CHECK(first.find("step 0: scan") != std::string::npos);
    CHECK(first.find("self-join=yes") != std::string::npos);

    EngineView pruned = EngineView::of(Fig3Stores::get().rmtt, true);
    std::string twin_text = explain(plan(query, pruned), pruned);
    CHECK(twin_text.find("twin0") != std::string::npos);
}

TEST_CASE("constants missing from the dictionary short-circuit to empty") {
    bgp::BgpQuery query;
    query.select_vars = {"X"};
    query.patterns.push_back({bgp::PatternTerm::variable("X"),
                              bgp::PatternTerm::constant(iri("http://magazine.example/Title")),
                              bgp::PatternTerm::constant(literal("No Such Title"))});
    query.patterns.push_back({bgp::PatternTerm::variable("X"),
                              bgp::PatternTerm::constant(iri("http://magazine.example/Year")),
                              bgp::PatternTerm::variable("Y")});
    for (const EngineView& view : Fig3Stores::get().views()) {
        Plan p = plan(query, view);
        CHECK(p.definitely_empty);
        CHECK(p.steps.size() == 2);  // steps still cover every pattern
        ExecResult r = execute(p, view);
        CHECK(r.rows.empty());
        CHECK(r.stats.probe_count == 0);
    }
}

TEST_CASE("cartesian appends come last and are not self-joins") {
    bgp::BgpQuery query;
    query.select_all = true;
    // Two variable-disjoint groups.
    query.patterns.push_back({bgp::PatternTerm::variable("A"),
                              bgp::PatternTerm::constant(iri("http://magazine.example/Title")),
                              bgp::PatternTerm::variable("T")});
    query.patterns.push_back({bgp::PatternTerm::variable("C"),
                              bgp::PatternTerm::constant(iri("http://magazine.example/City")),
                              bgp::PatternTerm::variable("D")});
    EngineView view = EngineView::of(Fig3Stores::get().single);
    Plan p = plan(query, view);
    REQUIRE(p.steps.size() == 2);
    CHECK(p.steps[1].cartesian);
    CHECK_FALSE(p.steps[1].self_join);
    CHECK(p.self_join_count() == 0);

    ExecResult r = execute(p, view);
    CHECK(r.stats.rows_out == 4);  // 2 titles x 2 city rows
}

TEST_CASE("repeated variable inside a pattern matches only equal components") {
    std::vector<Triple> triples = {
        {iri("http://t/a"), iri("http://t/p"), iri("http://t/a")},
        {iri("http://t/a"), iri("http://t/p"), iri("http://t/b")},
    };
    auto single = SingleStore::build(triples);
    bgp::BgpQuery query;
    query.select_vars = {"X"};
    query.patterns.push_back({bgp::PatternTerm::variable("X"),
                              bgp::PatternTerm::constant(iri("http://t/p")),
                              bgp::PatternTerm::variable("X")});
    EngineView view = EngineView::of(single);
    ExecResult r = execute(plan(query, view), view);
    REQUIRE(r.rows.size() == 1);
    CHECK(single.dict().decode(r.rows[0][0]) == iri("http://t/a"));
}

TEST_CASE("engines and the brute-force oracle agree on random data") {
    std::mt19937_64 rng(2024);
    std::size_t checked = 0;
    for (int round = 0; round < 12; ++round) {
        auto ds = testdata::make_dataset(rng(), 60 + rng() % 240);
        auto single = SingleStore::build(ds.triples);
        auto vp = VpStore::build(ds.triples);
        auto rmtt = TwinTables::build(ds.triples);
        std::vector<EngineView> views = {EngineView::of(single), EngineView::of(vp),
                                         EngineView::of(rmtt, false), EngineView::of(rmtt, true)};
        for (int q = 0; q < 25; ++q) {
            auto query = testdata::make_connected_query(rng(), ds, 4);
            auto expected = oracle::canonical(oracle::evaluate(ds.triples, query));
            for (const EngineView& view : views) {
                CAPTURE(round);
                CAPTURE(q);
                CAPTURE(to_string(view.kind));
                REQUIRE(run_on(view, query) == expected);
            }
            ++checked;
        }
    }
    CHECK(checked == 12 * 25);
}

TEST_CASE("pruned mode never probes more same-table targets than sound mode") {
    std::mt19937_64 rng(5150);
    for (int round = 0; round < 12; ++round) {
        auto ds = testdata::make_dataset(rng(), 80 + rng() % 300);
        auto rmtt = TwinTables::build(ds.triples);
        EngineView sound = EngineView::of(rmtt, false);
        EngineView pruned = EngineView::of(rmtt, true);
        for (int q = 0; q < 25; ++q) {
            auto query = testdata::make_connected_query(rng(), ds, 5);
            ExecResult rs = execute(plan(query, sound), sound);
            ExecResult rp = execute(plan(query, pruned), pruned);
            CHECK(rp.stats.rows_out == rs.stats.rows_out);
            CHECK(decoded_rows(rp, rmtt.dict()) == decoded_rows(rs, rmtt.dict()));
            CHECK(rp.stats.runtime_same_table_probes <= rs.stats.runtime_same_table_probes);
            CHECK(rp.stats.probe_count <= rs.stats.probe_count);
            CHECK(rp.stats.plan_self_joins <= rs.stats.plan_self_joins);
        }
    }
}

TEST_CASE("single-table plans self-join on every connected join step") {
    std::mt19937_64 rng(31337);
    for (int round = 0; round < 10; ++round) {
        auto ds = testdata::make_dataset(rng(), 100 + rng() % 200);
        auto single = SingleStore::build(ds.triples);
        EngineView view = EngineView::of(single);
        for (int q = 0; q < 20; ++q) {
            auto query = testdata::make_connected_query(rng(), ds, 5);
            Plan p = plan(query, view);
            // Unresolvable constants empty the provenance sets, so the law
            // covers fully resolvable queries only.
            if (p.definitely_empty) continue;
            std::size_t cartesians = 0;
            for (const PlanStep& s : p.steps) cartesians += s.cartesian ? 1 : 0;
            CHECK(p.self_join_count() == query.patterns.size() - 1 - cartesians);
        }
    }
}
