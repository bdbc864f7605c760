#pragma once

#include <array>
#include <span>
#include <unordered_set>
#include <vector>

#include "rmtt/match.hpp"
#include "rmtt/model.hpp"
#include "rmtt/perm_index.hpp"

namespace rmtt {

/// Where one triple landed during partitioning.
struct PlacementReport {
    int twin = 0;
    bool switched = false;  // cursor flipped because the current twin conflicted
    bool fallback = false;  // inserted although the receiving twin also conflicted
};

struct BuildStats {
    std::size_t switch_count = 0;
    std::size_t fallback_count = 0;
    std::size_t reflexive_count = 0;  // triples with s == o
    std::array<std::size_t, 2> triples_per_twin = {0, 0};
    std::vector<PlacementReport> placements;  // one per deduplicated input triple
};

enum class TwinRestrict { Both, Twin0, Twin1 };

/// Twin-table partitioned store. Triples stream into two same-schema
/// tables: a triple whose subject already appears among the current
/// table's objects, or whose object appears among its subjects, moves to
/// the other table. The cursor persists across insertions and switches at
/// most once per triple; when both tables conflict the triple stays in the
/// switched-to table and is counted as a fallback. Per-table subject and
/// object membership plus their intersection (overlap) are maintained
/// incrementally so subject-object joins can skip the table that provably
/// cannot hold the join key.
class TwinTables {
  public:
    struct TwinSide {
        std::vector<EncodedTriple> rows;  // insertion order until finalize
        std::array<OrderedTripleIndex, 6> indexes;
        std::unordered_set<TermId> subs, objs, overlap;
    };

    static TwinTables build(std::span<const Triple> triples);
    static TwinTables build_encoded(Dictionary dict, std::span<const EncodedTriple> triples);

    /// (t.s in objs of twin i) or (t.o in subs of twin i).
    bool conflict(int twin, const EncodedTriple& t) const;

    /// Applies the partition rule to one triple not yet present in either
    /// twin. Valid before finalize() only.
    PlacementReport partition_insert(const EncodedTriple& t);

    /// Builds the six permutation indexes of both twins.
    void finalize();

    const Dictionary& dict() const { return dict_; }
    Dictionary& dict() { return dict_; }
    const TwinSide& twin(int i) const { return twins_[static_cast<std::size_t>(i)]; }
    const BuildStats& stats() const { return stats_; }
    int cursor() const { return current_; }
    std::size_t triple_count() const {
        return stats_.triples_per_twin[0] + stats_.triples_per_twin[1];
    }

    MatchResult match(const TriplePattern& pattern,
                      TwinRestrict restrict = TwinRestrict::Both) const;
    std::size_t estimate(const TriplePattern& pattern) const;
    std::size_t estimate_in_twin(int twin, const TriplePattern& pattern) const;

    /// Probe set for a subject-object join whose key matched in
    /// source_twin: always the other twin, plus source_twin itself only
    /// when the key sits in its overlap set.
    std::vector<int> so_join_targets(int source_twin, TermId key) const;

    /// |subs[i] intersect objs[1-i]| / |subs[i]|; 0 when subs[i] is empty.
    double containment_ratio(int i) const;

    /// Used by the store loader, which reconstructs a finalized store from
    /// persisted rows, sets, and stats.
    static TwinTables restore(Dictionary dict, std::array<std::vector<EncodedTriple>, 2> rows,
                              std::array<std::vector<TermId>, 2> subs,
                              std::array<std::vector<TermId>, 2> objs,
                              std::array<std::vector<TermId>, 2> overlap, BuildStats stats);

  private:
    Dictionary dict_;
    std::array<TwinSide, 2> twins_;
    int current_ = 0;
    bool finalized_ = false;
    BuildStats stats_;

    void record_membership(int twin, const EncodedTriple& t);
};

}  // namespace rmtt
