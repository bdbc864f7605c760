#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "rmtt/bgp.hpp"
#include "rmtt/match.hpp"
#include "rmtt/single_store.hpp"
#include "rmtt/twin_store.hpp"
#include "rmtt/vp_store.hpp"

namespace rmtt {

enum class EngineKind { Single, Vp, RmttSound, RmttPruned };

std::string to_string(EngineKind kind);

/// Non-owning handle over whichever store a query runs against.
struct EngineView {
    EngineKind kind = EngineKind::Single;
    const SingleStore* single = nullptr;
    const VpStore* vp = nullptr;
    const TwinTables* rmtt = nullptr;

    static EngineView of(const SingleStore& s) { return {EngineKind::Single, &s, nullptr, nullptr}; }
    static EngineView of(const VpStore& s) { return {EngineKind::Vp, nullptr, &s, nullptr}; }
    static EngineView of(const TwinTables& s, bool pruned = true) {
        return {pruned ? EngineKind::RmttPruned : EngineKind::RmttSound, nullptr, nullptr, &s};
    }

    const Dictionary& dict() const;
    std::size_t estimate(const bgp::ResolvedPattern& p) const;
    /// Tables a scan of p touches: the one table (single), the probed
    /// predicate tables (vp), or the twins whose estimate is nonzero (rmtt).
    std::vector<TableId> scan_tables(const bgp::ResolvedPattern& p) const;
    std::string table_name(TableId id) const;
};

/// Position of a join variable on each side: 's', 'p' or 'o'. pos_left is
/// the variable's position in the most recent earlier pattern containing
/// it; pos_right its position in the step's own pattern.
struct JoinVar {
    std::string name;
    char pos_left = 's';
    char pos_right = 's';

    bool crossed() const {
        return (pos_left == 's' && pos_right == 'o') || (pos_left == 'o' && pos_right == 's');
    }
};

struct PlanStep {
    std::size_t pattern_index = 0;  // position in the query text
    bgp::PatternAst pattern;
    bgp::ResolvedPattern resolved;
    std::vector<JoinVar> join_vars;  // empty for step 0 and cartesian appends
    bool cartesian = false;
    std::size_t estimate = 0;                    // exact unrestricted match count
    std::vector<TableId> prov_left, prov_right;  // sorted physical-table sets
    bool self_join = false;                      // prov_left and prov_right intersect
};

struct Plan {
    EngineKind engine = EngineKind::Single;
    bool definitely_empty = false;  // some constant term missing from the dictionary
    std::vector<std::string> projection;
    std::vector<PlanStep> steps;

    std::size_t self_join_count() const;
};

/// Greedy left-deep order: start with the cheapest pattern, then repeatedly
/// append the cheapest pattern sharing a variable with what is bound so
/// far; variable-disjoint patterns go last as cartesian appends. Ties break
/// by query text order.
Plan plan(const bgp::BgpQuery& query, const EngineView& engine);

struct ExecStats {
    std::size_t rows_out = 0;
    std::size_t plan_self_joins = 0;
    std::size_t probe_count = 0;
    std::size_t runtime_same_table_probes = 0;
    std::chrono::duration<double, std::milli> wall_time{0};
};

struct ExecResult {
    std::vector<std::string> var_names;     // projection order
    std::vector<std::vector<TermId>> rows;  // bag of projected bindings
    ExecStats stats;
};

/// Hash-join execution over the plan. Each probe lookup targets one
/// physical table on the hashed side; a lookup whose target equals the
/// probing row's provenance table for the join key counts as a same-table
/// probe. In pruned mode, subject-object join steps skip same-twin lookups
/// unless the key is in that twin's overlap set.
ExecResult execute(const Plan& plan, const EngineView& engine);

/// One line per step plus a "<N> self-joins" footer; byte-stable for a
/// given query, store, and engine.
std::string explain(const Plan& plan, const EngineView& engine);

}  // namespace rmtt
