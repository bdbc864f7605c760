#pragma once

#include <map>
#include <span>
#include <vector>

#include "rmtt/match.hpp"
#include "rmtt/model.hpp"
#include "rmtt/perm_index.hpp"

namespace rmtt {

/// Vertically partitioned layout: one (subject, object) table per distinct
/// predicate, sorted by (s, o) and deduplicated. Immutable after build.
class VpStore {
  public:
    struct SoPair {
        TermId s, o;
        bool operator==(const SoPair&) const = default;
        auto operator<=>(const SoPair&) const = default;
    };

    static VpStore build(std::span<const Triple> triples);
    static VpStore from_encoded(Dictionary dict, std::span<const EncodedTriple> triples);

    const Dictionary& dict() const { return dict_; }
    std::size_t predicate_count() const { return tables_.size(); }
    std::size_t triple_count() const { return triple_count_; }
    const std::map<TermId, std::vector<SoPair>>& tables() const { return tables_; }

    /// Bound predicate probes that one table; unbound predicate scans all
    /// tables in ascending predicate-id order. The trace records every
    /// probed table, including ones that yield nothing.
    MatchResult match(const TriplePattern& pattern) const;
    std::size_t estimate(const TriplePattern& pattern) const;

  private:
    Dictionary dict_;
    std::map<TermId, std::vector<SoPair>> tables_;
    std::size_t triple_count_ = 0;

    void scan_table(TermId predicate, const std::vector<SoPair>& table,
                    const TriplePattern& pattern, MatchResult& out) const;
    std::size_t count_in_table(const std::vector<SoPair>& table,
                               const TriplePattern& pattern) const;
};

}  // namespace rmtt
