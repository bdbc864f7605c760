#include "rmtt/twin_store.hpp"

#include <stdexcept>

namespace rmtt {

bool TwinTables::conflict(int twin, const EncodedTriple& t) const {
    const TwinSide& side = twins_[static_cast<std::size_t>(twin)];
    return side.objs.contains(t.s) || side.subs.contains(t.o);
}

void TwinTables::record_membership(int twin, const EncodedTriple& t) {
    TwinSide& side = twins_[static_cast<std::size_t>(twin)];
    side.subs.insert(t.s);
    side.objs.insert(t.o);
    if (side.objs.contains(t.s)) side.overlap.insert(t.s);
    if (side.subs.contains(t.o)) side.overlap.insert(t.o);
}

PlacementReport TwinTables::partition_insert(const EncodedTriple& t) {
    if (finalized_) throw std::logic_error("partition_insert after finalize");
    PlacementReport report;
    if (conflict(current_, t)) {
        current_ = 1 - current_;
        report.switched = true;
        ++stats_.switch_count;
        if (conflict(current_, t)) {
            report.fallback = true;
            ++stats_.fallback_count;
        }
    }
    report.twin = current_;
    if (t.s == t.o) ++stats_.reflexive_count;
    twins_[static_cast<std::size_t>(current_)].rows.push_back(t);
    ++stats_.triples_per_twin[static_cast<std::size_t>(current_)];
    record_membership(current_, t);
    stats_.placements.push_back(report);
    return report;
}

void TwinTables::finalize() {
    for (TwinSide& side : twins_)
        for (PermOrder order : kAllOrders)
            side.indexes[static_cast<std::size_t>(order)] =
                OrderedTripleIndex::build(side.rows, order);
    finalized_ = true;
}

TwinTables TwinTables::build(std::span<const Triple> triples) {
    Dictionary dict;
    std::vector<EncodedTriple> encoded;
    encoded.reserve(triples.size());
    for (const Triple& t : triples) encoded.push_back(dict.encode(t));
    return build_encoded(std::move(dict), encoded);
}

TwinTables TwinTables::build_encoded(Dictionary dict, std::span<const EncodedTriple> triples) {
    TwinTables tables;
    tables.dict_ = std::move(dict);
    std::unordered_set<EncodedTriple, EncodedTripleHash> seen;
    seen.reserve(triples.size());
    for (const EncodedTriple& t : triples) {
        if (!seen.insert(t).second) continue;  // duplicates do not move the cursor
        tables.partition_insert(t);
    }
    tables.finalize();
    return tables;
}

MatchResult TwinTables::match(const TriplePattern& pattern, TwinRestrict restrict) const {
    MatchResult result;
    int lo = restrict == TwinRestrict::Twin1 ? 1 : 0;
    int hi = restrict == TwinRestrict::Twin0 ? 0 : 1;
    for (int i = lo; i <= hi; ++i) {
        result.probed.push_back(static_cast<TableId>(i));
        const OrderedTripleIndex& idx =
            twins_[static_cast<std::size_t>(i)].indexes[static_cast<std::size_t>(
                best_order(pattern))];
        auto range = idx.range_scan(pattern);
        result.rows.insert(result.rows.end(), range.begin(), range.end());
        result.row_tables.insert(result.row_tables.end(), range.size(), static_cast<TableId>(i));
    }
    return result;
}

std::size_t TwinTables::estimate(const TriplePattern& pattern) const {
    return estimate_in_twin(0, pattern) + estimate_in_twin(1, pattern);
}

std::size_t TwinTables::estimate_in_twin(int twin, const TriplePattern& pattern) const {
    const TwinSide& side = twins_[static_cast<std::size_t>(twin)];
    return side.indexes[static_cast<std::size_t>(best_order(pattern))].estimate(pattern);
}

std::vector<int> TwinTables::so_join_targets(int source_twin, TermId key) const {
    std::vector<int> targets;
    int other = 1 - source_twin;
    if (twins_[static_cast<std::size_t>(source_twin)].overlap.contains(key)) {
        targets.push_back(std::min(source_twin, other));
        targets.push_back(std::max(source_twin, other));
    } else {
        targets.push_back(other);
    }
    return targets;
}

double TwinTables::containment_ratio(int i) const {
    const auto& subs = twins_[static_cast<std::size_t>(i)].subs;
    const auto& objs = twins_[static_cast<std::size_t>(1 - i)].objs;
    if (subs.empty()) return 0.0;
    std::size_t hits = 0;
    for (TermId id : subs)
        if (objs.contains(id)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(subs.size());
}

TwinTables TwinTables::restore(Dictionary dict, std::array<std::vector<EncodedTriple>, 2> rows,
                               std::array<std::vector<TermId>, 2> subs,
                               std::array<std::vector<TermId>, 2> objs,
                               std::array<std::vector<TermId>, 2> overlap, BuildStats stats) {
    TwinTables tables;
    tables.dict_ = std::move(dict);
    for (int i = 0; i < 2; ++i) {
        auto& side = tables.twins_[static_cast<std::size_t>(i)];
        side.rows = std::move(rows[static_cast<std::size_t>(i)]);
        side.subs.insert(subs[static_cast<std::size_t>(i)].begin(),
                         subs[static_cast<std::size_t>(i)].end());
        side.objs.insert(objs[static_cast<std::size_t>(i)].begin(),
                         objs[static_cast<std::size_t>(i)].end());
        side.overlap.insert(overlap[static_cast<std::size_t>(i)].begin(),
                            overlap[static_cast<std::size_t>(i)].end());
    }
    tables.stats_ = std::move(stats);
    tables.finalize();
    return tables;
}

}  // namespace rmtt
