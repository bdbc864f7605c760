#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rmtt/bgp.hpp"
#include "rmtt/planner.hpp"

namespace rmtt::bench {

struct BenchRow {
    std::string query_id;
    EngineKind engine = EngineKind::Single;
    std::size_t result_count = 0;
    double wall_ms_median = 0.0;
    std::size_t plan_self_joins = 0;
    std::size_t runtime_same_table_probes = 0;
};

struct BenchReport {
    std::string dataset;
    std::size_t triple_count = 0;
    std::size_t repetitions = 0;
    std::vector<EngineKind> engines;
    std::vector<BenchRow> rows;              // one per (query, engine), query-major
    std::vector<std::string> errors;         // per-query failures, not fatal
};

struct NamedQuery {
    std::string id;
    bgp::BgpQuery query;
};

/// Builds each requested engine once, then runs every query `repetitions`
/// times per engine. Wall times are medians and exclude build time; the
/// count columns are run-invariant.
BenchReport run_suite(std::span<const Triple> triples, const std::vector<NamedQuery>& queries,
                      const std::vector<EngineKind>& engines, std::size_t repetitions,
                      const std::string& dataset_label = "");

void emit_csv(const BenchReport& report, std::ostream& out);
void emit_markdown(const BenchReport& report, std::ostream& out);
void emit_report_file(const BenchReport& report, const std::string& path);  // by extension

}  // namespace rmtt::bench
