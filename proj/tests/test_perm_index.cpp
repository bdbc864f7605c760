#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>

#include "doctest.h"
#include "rmtt/perm_index.hpp"
#include "support/fixtures.hpp"

using namespace rmtt;

namespace {

std::vector<EncodedTriple> encode_fig3(Dictionary& dict) {
    std::vector<EncodedTriple> out;
    for (const Triple& t : fixtures::fig3()) out.push_back(dict.encode(t));
    return out;
}

std::vector<EncodedTriple> linear_filter(std::span<const EncodedTriple> triples,
                                         const TriplePattern& pattern) {
    std::vector<EncodedTriple> out;
    for (const EncodedTriple& t : triples)
        if (matches(pattern, t)) out.push_back(t);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<EncodedTriple> sorted_set(std::span<const EncodedTriple> rows) {
    std::vector<EncodedTriple> out(rows.begin(), rows.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("build sorts, dedupes, and ignores input order") {
    CHECK(OrderedTripleIndex::build({}, PermOrder::SPO).size() == 0);

    std::vector<EncodedTriple> rows = {{3, 1, 2}, {0, 1, 2}, {3, 1, 2}, {1, 0, 0}};
    auto idx = OrderedTripleIndex::build(rows, PermOrder::SPO);
    CHECK(idx.size() == 3);
    CHECK(idx.rows()[0] == EncodedTriple{0, 1, 2});

    std::mt19937_64 rng(3);
    for (int round = 0; round < 20; ++round) {
        auto shuffled = rows;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        for (PermOrder order : kAllOrders) {
            auto a = OrderedTripleIndex::build(rows, order);
            auto b = OrderedTripleIndex::build(shuffled, order);
            CHECK(std::ranges::equal(a.rows(), b.rows()));
        }
    }
}

TEST_CASE("fig3 under SPO starts at the smallest id tuple") {
    Dictionary dict;
    auto encoded = encode_fig3(dict);
    auto idx = OrderedTripleIndex::build(encoded, PermOrder::SPO);
    REQUIRE(idx.size() == 25);
    // B1 is id 0 and its first-seen predicate/object are ids 1 and 2.
    CHECK(idx.rows()[0] == EncodedTriple{0, 1, 2});
}

TEST_CASE("fig3 range scans match the worked examples") {
    Dictionary dict;
    auto encoded = encode_fig3(dict);
    TermId b1 = *dict.lookup(fixtures::mag("B1"));
    TermId author = *dict.lookup(fixtures::mag("Author"));

    auto spo = OrderedTripleIndex::build(encoded, PermOrder::SPO);
    CHECK(spo.range_scan({b1, {}, {}}).size() == 5);
    CHECK(spo.estimate({b1, {}, {}}) == 5);

    auto pso = OrderedTripleIndex::build(encoded, PermOrder::PSO);
    CHECK(pso.range_scan({{}, author, {}}).size() == 3);

    CHECK(spo.range_scan({{}, {}, {}}).size() == 25);
    CHECK(pso.estimate({{}, {}, {}}) == 25);

    CHECK(spo.estimate({static_cast<TermId>(dict.size() - 1), {}, {}}) == 0);
}

TEST_CASE("incompatible bound positions are rejected") {
    auto idx = OrderedTripleIndex::build({}, PermOrder::SPO);
    CHECK_THROWS_AS(idx.range_scan({{}, 1, {}}), std::invalid_argument);
    CHECK_THROWS_AS(idx.range_scan({{}, {}, 1}), std::invalid_argument);
    CHECK_THROWS_AS(idx.estimate({1, {}, 1}), std::invalid_argument);
    CHECK_NOTHROW(idx.range_scan({1, {}, {}}));
    CHECK_NOTHROW(idx.range_scan({1, 1, 1}));
}

TEST_CASE("every compatible order agrees with a brute-force filter") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 40; ++round) {
        std::vector<EncodedTriple> triples;
        std::size_t n = 1 + rng() % 120;
        for (std::size_t i = 0; i < n; ++i)
            triples.push_back({static_cast<TermId>(rng() % 12), static_cast<TermId>(rng() % 4),
                               static_cast<TermId>(rng() % 12)});

        std::array<OrderedTripleIndex, 6> indexes;
        for (PermOrder order : kAllOrders)
            indexes[static_cast<std::size_t>(order)] = OrderedTripleIndex::build(triples, order);

        for (int q = 0; q < 30; ++q) {
            TriplePattern pattern;
            if (rng() % 2) pattern.s = static_cast<TermId>(rng() % 13);
            if (rng() % 2) pattern.p = static_cast<TermId>(rng() % 5);
            if (rng() % 2) pattern.o = static_cast<TermId>(rng() % 13);
            auto expected = linear_filter(triples, pattern);
            for (PermOrder order : kAllOrders) {
                const auto& idx = indexes[static_cast<std::size_t>(order)];
                if (!idx.compatible(pattern)) continue;
                auto rows = idx.range_scan(pattern);
                CHECK(sorted_set(rows) == expected);
                CHECK(idx.estimate(pattern) == rows.size());
            }
            // best_order always returns a compatible order.
            CHECK(indexes[static_cast<std::size_t>(best_order(pattern))].compatible(pattern));
        }
    }
}

TEST_CASE("all six indexes hold the same triple set") {
    Dictionary dict;
    auto encoded = encode_fig3(dict);
    auto reference = sorted_set(OrderedTripleIndex::build(encoded, PermOrder::SPO).rows());
    for (PermOrder order : kAllOrders)
        CHECK(sorted_set(OrderedTripleIndex::build(encoded, order).rows()) == reference);
}
