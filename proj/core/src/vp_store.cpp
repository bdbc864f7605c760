#include "rmtt/vp_store.hpp"

#include <algorithm>

namespace rmtt {

VpStore VpStore::build(std::span<const Triple> triples) {
    Dictionary dict;
    std::vector<EncodedTriple> encoded;
    encoded.reserve(triples.size());
    for (const Triple& t : triples) encoded.push_back(dict.encode(t));
    return from_encoded(std::move(dict), encoded);
}

VpStore VpStore::from_encoded(Dictionary dict, std::span<const EncodedTriple> triples) {
    VpStore store;
    store.dict_ = std::move(dict);
    for (const EncodedTriple& t : triples) store.tables_[t.p].push_back({t.s, t.o});
    for (auto& [pid, table] : store.tables_) {
        std::sort(table.begin(), table.end());
        table.erase(std::unique(table.begin(), table.end()), table.end());
        store.triple_count_ += table.size();
    }
    return store;
}

void VpStore::scan_table(TermId predicate, const std::vector<SoPair>& table,
                         const TriplePattern& pattern, MatchResult& out) const {
    out.probed.push_back(predicate);
    if (pattern.s) {
        auto lo = std::lower_bound(table.begin(), table.end(), SoPair{*pattern.s, 0});
        auto hi = std::upper_bound(lo, table.end(), SoPair{*pattern.s, ~TermId{0}});
        for (auto it = lo; it != hi; ++it) {
            if (pattern.o && *pattern.o != it->o) continue;
            out.rows.push_back({it->s, predicate, it->o});
            out.row_tables.push_back(predicate);
        }
    } else {
        for (const SoPair& row : table) {
            if (pattern.o && *pattern.o != row.o) continue;
            out.rows.push_back({row.s, predicate, row.o});
            out.row_tables.push_back(predicate);
        }
    }
}

std::size_t VpStore::count_in_table(const std::vector<SoPair>& table,
                                    const TriplePattern& pattern) const {
    if (pattern.s && !pattern.o) {
        auto lo = std::lower_bound(table.begin(), table.end(), SoPair{*pattern.s, 0});
        auto hi = std::upper_bound(lo, table.end(), SoPair{*pattern.s, ~TermId{0}});
        return static_cast<std::size_t>(hi - lo);
    }
    if (pattern.s && pattern.o)
        return std::binary_search(table.begin(), table.end(), SoPair{*pattern.s, *pattern.o}) ? 1
                                                                                              : 0;
    if (!pattern.s && !pattern.o) return table.size();
    std::size_t n = 0;
    for (const SoPair& row : table)
        if (row.o == *pattern.o) ++n;
    return n;
}

MatchResult VpStore::match(const TriplePattern& pattern) const {
    MatchResult result;
    if (pattern.p) {
        auto it = tables_.find(*pattern.p);
        if (it == tables_.end()) return result;  // unknown predicate: nothing to probe
        scan_table(it->first, it->second, pattern, result);
        return result;
    }
    for (const auto& [pid, table] : tables_) scan_table(pid, table, pattern, result);
    return result;
}

std::size_t VpStore::estimate(const TriplePattern& pattern) const {
    if (pattern.p) {
        auto it = tables_.find(*pattern.p);
        return it == tables_.end() ? 0 : count_in_table(it->second, pattern);
    }
    std::size_t n = 0;
    for (const auto& [pid, table] : tables_) n += count_in_table(table, pattern);
    return n;
}

}  // namespace rmtt
