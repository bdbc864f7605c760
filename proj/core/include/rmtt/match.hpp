#pragma once

#include <cstdint>
#include <vector>

#include "rmtt/model.hpp"

namespace rmtt {

/// Identifies a physical table inside one engine. The single-table engine
/// has exactly one (id 0); the vertically partitioned engine uses the
/// predicate's TermId; the twin-table engine uses 0 and 1.
using TableId = std::uint32_t;

/// A pattern match with per-row table provenance plus the full set of
/// probed tables (probes, not just hits).
struct MatchResult {
    std::vector<EncodedTriple> rows;
    std::vector<TableId> row_tables;  // parallel to rows
    std::vector<TableId> probed;

    std::size_t size() const { return rows.size(); }
};

}  // namespace rmtt
