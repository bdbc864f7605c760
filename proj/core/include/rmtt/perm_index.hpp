#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmtt/model.hpp"

namespace rmtt {

/// The six component orders a triple collection can be sorted under.
enum class PermOrder : std::uint8_t { SPO, SOP, PSO, POS, OSP, OPS };

inline constexpr std::array<PermOrder, 6> kAllOrders = {
    PermOrder::SPO, PermOrder::SOP, PermOrder::PSO,
    PermOrder::POS, PermOrder::OSP, PermOrder::OPS};

std::string to_string(PermOrder order);

/// A pattern over encoded triples; nullopt means the position is unbound.
struct TriplePattern {
    std::optional<TermId> s, p, o;

    bool operator==(const TriplePattern&) const = default;
};

bool matches(const TriplePattern& pattern, const EncodedTriple& t);

/// A deduplicated triple collection sorted under one component order.
/// Prefix-bound patterns resolve to one contiguous row range found by
/// binary search. Immutable after build; concurrent scans are safe.
class OrderedTripleIndex {
  public:
    OrderedTripleIndex() = default;

    static OrderedTripleIndex build(std::span<const EncodedTriple> triples, PermOrder order);

    PermOrder order() const { return order_; }
    std::size_t size() const { return rows_.size(); }
    std::span<const EncodedTriple> rows() const { return rows_; }

    /// True when the pattern's bound positions form a prefix of the order.
    bool compatible(const TriplePattern& pattern) const;

    /// All triples matching the pattern, in index order. Throws
    /// std::invalid_argument when the pattern is not a prefix of the order.
    std::span<const EncodedTriple> range_scan(const TriplePattern& pattern) const;

    /// Exact match count, from the same range bounds as range_scan.
    std::size_t estimate(const TriplePattern& pattern) const;

  private:
    PermOrder order_ = PermOrder::SPO;
    std::vector<EncodedTriple> rows_;
};

/// Picks the compatible order with the longest bound prefix; ties resolve
/// in enum order SPO < SOP < PSO < POS < OSP < OPS.
PermOrder best_order(const TriplePattern& pattern);

}  // namespace rmtt
