#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "rmtt/twin_store.hpp"
#include "support/fixtures.hpp"

using namespace rmtt;

namespace {

std::set<EncodedTriple> row_set(const TwinTables& tables, int twin) {
    auto rows = tables.twin(twin).indexes[0].rows();
    return {rows.begin(), rows.end()};
}

std::set<EncodedTriple> encode_rows(Dictionary& dict, const std::vector<Triple>& triples,
                                    std::initializer_list<int> one_based_rows) {
    std::set<EncodedTriple> out;
    for (int r : one_based_rows) out.insert(dict.encode(triples[static_cast<std::size_t>(r - 1)]));
    return out;
}

// Default-constructed tables accept partition_insert calls directly.
TwinTables empty_tables() { return TwinTables{}; }

}  // namespace

TEST_CASE("conflict rule") {
    Dictionary dict;
    TermId b1 = dict.encode(iri("http://x/B1"));
    TermId author = dict.encode(iri("http://x/Author"));
    TermId a1 = dict.encode(iri("http://x/A1"));
    TermId type = dict.encode(iri("http://x/type"));
    TermId person = dict.encode(iri("http://x/Person"));

    TwinTables tables = empty_tables();
    CHECK_FALSE(tables.conflict(0, {b1, author, a1}));  // both twins empty
    CHECK_FALSE(tables.conflict(1, {b1, author, a1}));

    tables.partition_insert({b1, author, a1});
    // subject already seen as object
    CHECK(tables.conflict(0, {a1, type, person}));
    CHECK_FALSE(tables.conflict(1, {a1, type, person}));
    // object already seen as subject
    TermId z = dict.encode(iri("http://x/Z"));
    TermId q = dict.encode(iri("http://x/q"));
    CHECK(tables.conflict(0, {z, q, b1}));
    CHECK_FALSE(tables.conflict(0, {z, q, person}));
}

TEST_CASE("fig3 partitions into the two published tables") {
    auto triples = fixtures::fig3();
    auto tables = TwinTables::build(triples);

    Dictionary probe;
    for (const Triple& t : triples) probe.encode(t);
    // Twin 0 receives row 1 and ends up with the B/UoM/UoC rows; twin 1
    // holds the A/mt/cy rows.
    auto expected0 =
        encode_rows(probe, triples, {1, 2, 3, 4, 5, 6, 7, 8, 9, 16, 17, 18, 21, 22, 23});
    auto expected1 = encode_rows(probe, triples, {10, 11, 12, 13, 14, 15, 19, 20, 24, 25});
    CHECK(row_set(tables, 0) == expected0);
    CHECK(row_set(tables, 1) == expected1);

    const BuildStats& stats = tables.stats();
    CHECK(stats.triples_per_twin == std::array<std::size_t, 2>{15, 10});
    CHECK(stats.fallback_count == 0);
    CHECK(stats.reflexive_count == 0);
    CHECK(stats.switch_count == 5);

    // Switches happen exactly at input rows 10, 16, 19, 21, 24.
    std::vector<std::size_t> switch_rows;
    for (std::size_t i = 0; i < stats.placements.size(); ++i)
        if (stats.placements[i].switched) switch_rows.push_back(i + 1);
    CHECK(switch_rows == std::vector<std::size_t>{10, 16, 19, 21, 24});

    CHECK(tables.twin(0).overlap.empty());
    CHECK(tables.twin(1).overlap.empty());
}

TEST_CASE("fig3 placement trace matches the golden fixture") {
    auto tables = TwinTables::build(fixtures::fig3());
    std::istringstream golden(fixtures::read_file(fixtures::dir() / "fig3_trace.tsv"));
    std::string line;
    std::size_t row = 0;
    while (std::getline(golden, line)) {
        std::istringstream cols(line);
        std::size_t row_no;
        int twin, switched, fallback;
        cols >> row_no >> twin >> switched >> fallback;
        REQUIRE(row_no == row + 1);
        const PlacementReport& got = tables.stats().placements.at(row);
        CHECK(got.twin == twin);
        CHECK(got.switched == (switched != 0));
        CHECK(got.fallback == (fallback != 0));
        ++row;
    }
    CHECK(row == 25);
}

TEST_CASE("reflexive triple lands in twin 0 and enters overlap") {
    TwinTables tables = empty_tables();
    TermId a = tables.dict().encode(iri("http://x/a"));
    TermId p = tables.dict().encode(iri("http://x/p"));
    auto report = tables.partition_insert({a, p, a});
    CHECK(report.twin == 0);
    CHECK_FALSE(report.switched);
    CHECK_FALSE(report.fallback);
    CHECK(tables.twin(0).overlap == std::unordered_set<TermId>{a});
    CHECK(tables.stats().reflexive_count == 1);
}

TEST_CASE("three-cycle forces one switch chain and a fallback") {
    TwinTables tables = empty_tables();
    Dictionary& dict = tables.dict();
    TermId x = dict.encode(iri("http://t/x")), y = dict.encode(iri("http://t/y")),
           z = dict.encode(iri("http://t/z"));
    TermId p = dict.encode(iri("http://t/p")), q = dict.encode(iri("http://t/q")),
           r = dict.encode(iri("http://t/r"));

    auto r1 = tables.partition_insert({x, p, y});
    CHECK(r1.twin == 0);
    CHECK_FALSE(r1.switched);

    auto r2 = tables.partition_insert({y, q, z});
    CHECK(r2.twin == 1);
    CHECK(r2.switched);
    CHECK_FALSE(r2.fallback);

    auto r3 = tables.partition_insert({z, r, x});
    CHECK(r3.twin == 0);
    CHECK(r3.switched);
    CHECK(r3.fallback);

    CHECK(tables.stats().fallback_count == 1);
    CHECK(tables.twin(0).overlap == std::unordered_set<TermId>{x});
    CHECK(tables.twin(1).overlap.empty());
}

TEST_CASE("empty input builds two empty twins") {
    auto tables = TwinTables::build(std::span<const Triple>{});
    CHECK(tables.triple_count() == 0);
    CHECK(tables.stats().switch_count == 0);
    CHECK(tables.stats().fallback_count == 0);
    CHECK(tables.twin(0).rows.empty());
    CHECK(tables.twin(1).rows.empty());
}

TEST_CASE("duplicates are dropped and do not move the cursor") {
    std::vector<Triple> triples = {
        {iri("http://t/a"), iri("http://t/p"), iri("http://t/b")},
        {iri("http://t/a"), iri("http://t/p"), iri("http://t/b")},
        {iri("http://t/c"), iri("http://t/p"), iri("http://t/d")},
    };
    auto tables = TwinTables::build(triples);
    CHECK(tables.triple_count() == 2);
    CHECK(tables.stats().placements.size() == 2);
    CHECK(tables.stats().switch_count == 0);
}

namespace {

std::vector<Triple> random_stream(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::vector<Triple> out;
    for (std::size_t i = 0; i < n; ++i) {
        Term s = iri("http://t/e" + std::to_string(rng() % 12));
        Term o = rng() % 8 == 0 ? s
                 : rng() % 3   ? iri("http://t/e" + std::to_string(rng() % 12))
                               : literal("v" + std::to_string(rng() % 5));
        out.push_back({s, iri("http://t/p" + std::to_string(rng() % 3)), o});
        if (rng() % 10 == 0) out.push_back(out[rng() % out.size()]);
    }
    return out;
}

}  // namespace

TEST_CASE("partition properties hold on random streams") {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 60; ++round) {
        auto stream = random_stream(rng(), 1 + rng() % 200);
        auto tables = TwinTables::build(stream);

        // Completeness and disjointness against the deduplicated input.
        Dictionary probe;
        std::set<EncodedTriple> expected;
        for (const Triple& t : stream) expected.insert(probe.encode(t));
        auto t0 = row_set(tables, 0), t1 = row_set(tables, 1);
        std::set<EncodedTriple> both;
        both.insert(t0.begin(), t0.end());
        both.insert(t1.begin(), t1.end());
        CHECK(both == expected);
        CHECK(t0.size() + t1.size() == expected.size());
        CHECK(tables.stats().triples_per_twin[0] + tables.stats().triples_per_twin[1] ==
              expected.size());

        bool reflexive = false;
        for (const EncodedTriple& t : expected) reflexive |= t.s == t.o;

        for (int i = 0; i < 2; ++i) {
            // Membership sets are recomputable from the rows.
            std::unordered_set<TermId> subs, objs, overlap;
            for (const EncodedTriple& t : tables.twin(i).rows) {
                subs.insert(t.s);
                objs.insert(t.o);
            }
            for (TermId id : subs)
                if (objs.contains(id)) overlap.insert(id);
            CHECK(tables.twin(i).subs == subs);
            CHECK(tables.twin(i).objs == objs);
            CHECK(tables.twin(i).overlap == overlap);
        }

        if (tables.stats().fallback_count == 0 && !reflexive) {
            CHECK(tables.twin(0).overlap.empty());
            CHECK(tables.twin(1).overlap.empty());
        }

        // Determinism, including stats and placements.
        auto again = TwinTables::build(stream);
        CHECK(row_set(again, 0) == t0);
        CHECK(row_set(again, 1) == t1);
        CHECK(again.stats().switch_count == tables.stats().switch_count);
        CHECK(again.stats().fallback_count == tables.stats().fallback_count);
        REQUIRE(again.stats().placements.size() == tables.stats().placements.size());
        for (std::size_t i = 0; i < again.stats().placements.size(); ++i)
            CHECK(again.stats().placements[i].twin == tables.stats().placements[i].twin);
    }
}

TEST_CASE("so_join_targets prunes to the opposite twin unless the key overlaps") {
    auto tables = TwinTables::build(fixtures::fig3());
    TermId a1 = *tables.dict().lookup(fixtures::mag("A1"));
    // A1 matched as an object in twin 0; overlap is empty, so only twin 1
    // can hold it as a subject.
    CHECK(tables.so_join_targets(0, a1) == std::vector<int>{1});
    CHECK(tables.so_join_targets(1, a1) == std::vector<int>{0});

    TwinTables with_overlap = empty_tables();
    Dictionary& dict = with_overlap.dict();
    TermId a = dict.encode(iri("http://t/a"));
    TermId p = dict.encode(iri("http://t/p"));
    with_overlap.partition_insert({a, p, a});
    CHECK(with_overlap.so_join_targets(0, a) == std::vector<int>{0, 1});
}

TEST_CASE("match honors the twin restriction") {
    auto tables = TwinTables::build(fixtures::fig3());
    TermId a2 = *tables.dict().lookup(fixtures::mag("A2"));

    auto both = tables.match({a2, {}, {}}, TwinRestrict::Both);
    CHECK(both.rows.size() == 3);
    CHECK(both.probed == std::vector<TableId>{0, 1});
    for (TableId t : both.row_tables) CHECK(t == 1);  // A-rows live in twin 1

    CHECK(tables.match({a2, {}, {}}, TwinRestrict::Twin1).rows.size() == 3);
    CHECK(tables.match({a2, {}, {}}, TwinRestrict::Twin0).rows.empty());

    TermId author = *tables.dict().lookup(fixtures::mag("Author"));
    auto authors = tables.match({{}, author, {}});
    CHECK(authors.rows.size() == 3);
    for (TableId t : authors.row_tables) CHECK(t == 0);  // B-rows live in twin 0
}

TEST_CASE("containment ratios probe cross-twin subject/object sharing") {
    auto tables = TwinTables::build(fixtures::fig3());
    // Subjects of twin 0 are B1, B2, UoM, UoC; only UoM and UoC appear as
    // objects in twin 1 (the affiliation rows).
    CHECK(tables.containment_ratio(0) == doctest::Approx(0.5));
    // Subjects of twin 1 are A1, A2, mt, cy; all four appear as objects in
    // twin 0 (author rows and city rows).
    CHECK(tables.containment_ratio(1) == doctest::Approx(1.0));
    CHECK(empty_tables().containment_ratio(0) == 0.0);
}
