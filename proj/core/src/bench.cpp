#include "rmtt/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

namespace rmtt::bench {

namespace {

std::string format_ms(double ms) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return buf;
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    if (n == 0) return 0.0;
    return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

}  // namespace

BenchReport run_suite(std::span<const Triple> triples, const std::vector<NamedQuery>& queries,
                      const std::vector<EngineKind>& engines, std::size_t repetitions,
                      const std::string& dataset_label) {
    BenchReport report;
    report.dataset = dataset_label;
    report.repetitions = repetitions == 0 ? 1 : repetitions;
    report.engines = engines;

    bool need_single = false, need_vp = false, need_rmtt = false;
    for (EngineKind e : engines) {
        need_single |= e == EngineKind::Single;
        need_vp |= e == EngineKind::Vp;
        need_rmtt |= e == EngineKind::RmttSound || e == EngineKind::RmttPruned;
    }
    std::optional<SingleStore> single;
    std::optional<VpStore> vp;
    std::optional<TwinTables> rmtt;
    if (need_single) single.emplace(SingleStore::build(triples));
    if (need_vp) vp.emplace(VpStore::build(triples));
    if (need_rmtt) rmtt.emplace(TwinTables::build(triples));
    report.triple_count = need_single  ? single->triple_count()
                          : need_vp   ? vp->triple_count()
                          : need_rmtt ? rmtt->triple_count()
                                      : triples.size();

    for (const NamedQuery& q : queries) {
        for (EngineKind kind : engines) {
            EngineView view;
            switch (kind) {
                case EngineKind::Single: view = EngineView::of(*single); break;
                case EngineKind::Vp: view = EngineView::of(*vp); break;
                case EngineKind::RmttSound: view = EngineView::of(*rmtt, false); break;
                case EngineKind::RmttPruned: view = EngineView::of(*rmtt, true); break;
            }
            try {
                Plan p = plan(q.query, view);
                BenchRow row;
                row.query_id = q.id;
                row.engine = kind;
                std::vector<double> times;
                for (std::size_t r = 0; r < report.repetitions; ++r) {
                    ExecResult res = execute(p, view);
                    times.push_back(res.stats.wall_time.count());
                    row.result_count = res.stats.rows_out;
                    row.plan_self_joins = res.stats.plan_self_joins;
                    row.runtime_same_table_probes = res.stats.runtime_same_table_probes;
                }
                row.wall_ms_median = median(std::move(times));
                report.rows.push_back(std::move(row));
            } catch (const std::exception& e) {
                report.errors.push_back(q.id + " on " + to_string(kind) + ": " + e.what());
            }
        }
    }
    return report;
}

void emit_csv(const BenchReport& report, std::ostream& out) {
    out << "query_id,engine,result_count,wall_ms_median,plan_self_joins,"
           "runtime_same_table_probes\n";
    for (const BenchRow& row : report.rows) {
        out << row.query_id << "," << to_string(row.engine) << "," << row.result_count << ","
            << format_ms(row.wall_ms_median) << "," << row.plan_self_joins << ","
            << row.runtime_same_table_probes << "\n";
    }
    for (const std::string& e : report.errors) out << "# error: " << e << "\n";
}

void emit_markdown(const BenchReport& report, std::ostream& out) {
    out << "# Benchmark report\n\n";
    out << "- dataset: " << (report.dataset.empty() ? "(in-memory)" : report.dataset) << " ("
        << report.triple_count << " triples)\n";
    out << "- repetitions per query: " << report.repetitions << "\n\n";

    std::vector<std::string> ids;
    for (const BenchRow& row : report.rows)
        if (std::find(ids.begin(), ids.end(), row.query_id) == ids.end())
            ids.push_back(row.query_id);

    auto cell = [&](const std::string& id, EngineKind engine) -> const BenchRow* {
        for (const BenchRow& row : report.rows)
            if (row.query_id == id && row.engine == engine) return &row;
        return nullptr;
    };

    out << "| query | results |";
    for (EngineKind e : report.engines) out << " wall_ms " << to_string(e) << " |";
    for (EngineKind e : report.engines) out << " self-joins " << to_string(e) << " |";
    for (EngineKind e : report.engines) out << " same-table probes " << to_string(e) << " |";
    out << "\n|---|---|";
    for (std::size_t i = 0; i < report.engines.size() * 3; ++i) out << "---|";
    out << "\n";
    for (const std::string& id : ids) {
        const BenchRow* first = report.engines.empty() ? nullptr : cell(id, report.engines[0]);
        out << "| " << id << " | " << (first ? std::to_string(first->result_count) : "-") << " |";
        for (EngineKind e : report.engines) {
            const BenchRow* row = cell(id, e);
            out << " " << (row ? format_ms(row->wall_ms_median) : "-") << " |";
        }
        for (EngineKind e : report.engines) {
            const BenchRow* row = cell(id, e);
            out << " " << (row ? std::to_string(row->plan_self_joins) : "-") << " |";
        }
        for (EngineKind e : report.engines) {
            const BenchRow* row = cell(id, e);
            out << " " << (row ? std::to_string(row->runtime_same_table_probes) : "-") << " |";
        }
        out << "\n";
    }
    if (!report.errors.empty()) {
        out << "\n## Errors\n\n";
        for (const std::string& e : report.errors) out << "- " << e << "\n";
    }
}

void emit_report_file(const BenchReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    if (path.ends_with(".md") || path.ends_with(".markdown")) emit_markdown(report, out);
    else emit_csv(report, out);
    if (!out) throw std::runtime_error("I/O error writing " + path);
}

}  // namespace rmtt::bench
