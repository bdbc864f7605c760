#pragma once

#include <array>
#include <span>

#include "rmtt/match.hpp"
#include "rmtt/model.hpp"
#include "rmtt/perm_index.hpp"

namespace rmtt {

/// One big triples table with all six permutation indexes. Immutable
/// after build; concurrent matches are safe.
class SingleStore {
  public:
    static SingleStore build(std::span<const Triple> triples);
    static SingleStore from_encoded(Dictionary dict, std::vector<EncodedTriple> triples);

    const Dictionary& dict() const { return dict_; }
    Dictionary& dict() { return dict_; }
    std::size_t triple_count() const { return triple_count_; }
    const OrderedTripleIndex& index(PermOrder order) const {
        return indexes_[static_cast<std::size_t>(order)];
    }

    /// Scans the best compatible index. The trace names the one physical
    /// table this engine has.
    MatchResult match(const TriplePattern& pattern) const;
    std::size_t estimate(const TriplePattern& pattern) const;

  private:
    Dictionary dict_;
    std::array<OrderedTripleIndex, 6> indexes_;
    std::size_t triple_count_ = 0;
};

}  // namespace rmtt
