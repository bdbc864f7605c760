#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "rmtt/bench.hpp"
#include "rmtt/bgp.hpp"
#include "rmtt/generator.hpp"
#include "rmtt/ntriples.hpp"
#include "rmtt/planner.hpp"
#include "rmtt/store_io.hpp"

namespace fs = std::filesystem;
using namespace rmtt;

namespace {

// Exit codes: 0 success, 1 user error, 2 internal error.
constexpr int kOk = 0;
constexpr int kUserError = 1;
constexpr int kInternalError = 2;

struct UserError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<Triple> load_ntriples(const std::string& path, nt::ParseMode mode) {
    if (!fs::exists(path)) throw UserError("cannot open " + path);
    nt::StreamResult parsed = nt::parse_file(path, mode);
    for (const nt::ParseDiagnostic& d : parsed.diagnostics)
        std::cerr << path << ":" << d.line_number << ":" << d.byte_offset + 1 << ": "
                  << d.message << "\n";
    if (!parsed.diagnostics.empty() && mode == nt::ParseMode::Strict)
        throw UserError("parse failed: " + path);
    return std::move(parsed.triples);
}

bgp::BgpQuery load_query(const std::string& path, bgp::QueryMode mode) {
    auto result = bgp::parse_query_file(path, mode);
    if (auto* d = std::get_if<bgp::QueryDiagnostic>(&result)) {
        std::ostringstream os;
        os << path << ":" << d->line << ":" << d->column << ": " << d->message;
        throw UserError(os.str());
    }
    auto query = std::get<bgp::BgpQuery>(std::move(result));
    for (const std::string& note : query.notes) std::cerr << path << ": note: " << note << "\n";
    return query;
}

EngineView view_of(const io::AnyStore& store, const std::string& mode) {
    switch (store.kind) {
        case io::StoreKind::Single: return EngineView::of(*store.single);
        case io::StoreKind::Vp: return EngineView::of(*store.vp);
        case io::StoreKind::Rmtt: return EngineView::of(*store.rmtt, mode != "sound");
    }
    throw UserError("empty store");
}

int cmd_ingest(const std::string& input, const std::string& engine, const std::string& out_dir,
               bool lenient) {
    auto kind = io::store_kind_from_string(engine);
    if (!kind) throw UserError("unknown engine '" + engine + "'");
    auto triples =
        load_ntriples(input, lenient ? nt::ParseMode::Lenient : nt::ParseMode::Strict);

    io::AnyStore store;
    store.kind = *kind;
    switch (*kind) {
        case io::StoreKind::Single: store.single = SingleStore::build(triples); break;
        case io::StoreKind::Vp: store.vp = VpStore::build(triples); break;
        case io::StoreKind::Rmtt: store.rmtt = TwinTables::build(triples); break;
    }
    io::save_store(store, out_dir);
    std::cerr << "ingested " << store.triple_count() << " triples into " << out_dir << " ("
              << engine << ")\n";
    return kOk;
}

int cmd_query(const std::string& dir, const std::string& query_path, const std::string& mode,
              bool explain_too, bool strict) {
    io::AnyStore store = io::load_store(dir);
    bgp::BgpQuery query =
        load_query(query_path, strict ? bgp::QueryMode::Strict : bgp::QueryMode::Tolerant);
    EngineView view = view_of(store, mode);
    Plan p = plan(query, view);
    if (explain_too) std::cout << explain(p, view);
    ExecResult result = execute(p, view);

    const Dictionary& dict = view.dict();
    std::vector<std::string> lines;
    lines.reserve(result.rows.size());
    for (const auto& row : result.rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) line += "\t";
            line += nt::serialize_term(dict.decode(row[i]));
        }
        lines.push_back(std::move(line));
    }
    std::sort(lines.begin(), lines.end());

    for (std::size_t i = 0; i < result.var_names.size(); ++i)
        std::cout << (i ? "\t" : "") << "?" << result.var_names[i];
    std::cout << "\n";
    for (const std::string& line : lines) std::cout << line << "\n";
    std::cerr << "rows=" << result.stats.rows_out
              << " plan_self_joins=" << result.stats.plan_self_joins
              << " same_table_probes=" << result.stats.runtime_same_table_probes
              << " wall_ms=" << result.stats.wall_time.count() << "\n";
    return kOk;
}

int cmd_explain(const std::string& dir, const std::string& query_path, const std::string& mode) {
    io::AnyStore store = io::load_store(dir);
    bgp::BgpQuery query = load_query(query_path, bgp::QueryMode::Tolerant);
    EngineView view = view_of(store, mode);
    std::cout << explain(plan(query, view), view);
    return kOk;
}

int cmd_stats(const std::string& dir) {
    io::Manifest manifest = io::read_manifest(dir);
    for (const auto& [key, value] : manifest) std::cout << key << "=" << value << "\n";
    return kOk;
}

int cmd_gen(const gen::GenConfig& config, const std::string& out) {
    std::size_t n;
    try {
        n = gen::generate_file(out, config);
    } catch (const std::runtime_error& e) {
        throw UserError(e.what());
    }
    std::cerr << "wrote " << n << " triples to " << out << "\n";
    return kOk;
}

int cmd_bench(const std::string& data, const std::string& queries_dir,
              const std::string& engines_csv, std::size_t reps,
              const std::vector<std::string>& outputs) {
    std::vector<EngineKind> engines;
    std::stringstream ss(engines_csv);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name == "single") engines.push_back(EngineKind::Single);
        else if (name == "vp") engines.push_back(EngineKind::Vp);
        else if (name == "rmtt-sound") engines.push_back(EngineKind::RmttSound);
        else if (name == "rmtt-pruned") engines.push_back(EngineKind::RmttPruned);
        else throw UserError("unknown engine '" + name + "'");
    }
    if (engines.empty()) throw UserError("no engines selected");

    auto triples = load_ntriples(data, nt::ParseMode::Strict);

    std::vector<bench::NamedQuery> queries;
    std::vector<std::string> parse_errors;
    std::set<fs::path> files;
    if (!fs::is_directory(queries_dir)) throw UserError(queries_dir + " is not a directory");
    for (const auto& entry : fs::directory_iterator(queries_dir))
        if (entry.path().extension() == ".rq") files.insert(entry.path());
    if (files.empty()) throw UserError("no .rq files in " + queries_dir);
    for (const fs::path& f : files) {
        auto parsed = bgp::parse_query_file(f.string());
        if (auto* d = std::get_if<bgp::QueryDiagnostic>(&parsed)) {
            parse_errors.push_back(f.filename().string() + ": " + d->message);
            continue;
        }
        queries.push_back({f.stem().string(), std::get<bgp::BgpQuery>(std::move(parsed))});
    }

    bench::BenchReport report = bench::run_suite(triples, queries, engines, reps, data);
    report.errors.insert(report.errors.begin(), parse_errors.begin(), parse_errors.end());

    if (outputs.empty()) {
        bench::emit_csv(report, std::cout);
    } else {
        for (const std::string& out : outputs) {
            try {
                bench::emit_report_file(report, out);
            } catch (const std::runtime_error& e) {
                throw UserError(e.what());
            }
            std::cerr << "wrote " << out << "\n";
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rmtt: triple-store workbench with single-table, vertically partitioned, "
                 "and twin-table engines"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Build a store from an N-Triples file");
    std::string in_nt, engine = "rmtt", out_dir;
    bool lenient = false;
    ingest->add_option("input", in_nt, "N-Triples file")->required();
    ingest->add_option("--engine", engine, "single|vp|rmtt")->default_str("rmtt");
    ingest->add_option("-o,--out", out_dir, "store directory to create")->required();
    ingest->add_flag("--lenient", lenient, "skip malformed lines instead of failing");

    // query
    auto* query = app.add_subcommand("query", "Run a query against a store");
    std::string store_dir, query_file, mode = "pruned";
    bool explain_too = false, strict = false;
    query->add_option("store", store_dir, "store directory")->required();
    query->add_option("query", query_file, "query file (.rq)")->required();
    query->add_option("--mode", mode, "sound|pruned (twin stores only)")->default_str("pruned");
    query->add_flag("--explain", explain_too, "print the plan before the rows");
    query->add_flag("--strict", strict, "reject query-syntax tolerances");

    // explain
    auto* explain_cmd = app.add_subcommand("explain", "Print the plan for a query");
    std::string ex_dir, ex_file, ex_mode = "pruned";
    explain_cmd->add_option("store", ex_dir, "store directory")->required();
    explain_cmd->add_option("query", ex_file, "query file (.rq)")->required();
    explain_cmd->add_option("--mode", ex_mode, "sound|pruned")->default_str("pruned");

    // stats
    auto* stats = app.add_subcommand("stats", "Print a store's manifest");
    std::string stats_dir;
    stats->add_option("store", stats_dir, "store directory")->required();

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "Generate a university-domain dataset");
    gen::GenConfig config;
    std::string gen_out;
    gen_cmd->add_option("--seed", config.seed, "RNG seed");
    gen_cmd->add_option("--universities", config.universities, "university count");
    gen_cmd->add_option("--departments", config.departments_per_university,
                        "departments per university");
    gen_cmd->add_option("--students", config.students_per_department,
                        "students per department");
    gen_cmd->add_option("--professors", config.professors_per_department,
                        "professors per department");
    gen_cmd->add_option("--courses", config.courses_per_department, "courses per department");
    gen_cmd->add_option("-o,--out", gen_out, "output .nt file")->required();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run the query suite across engines");
    std::string bench_data, bench_queries, bench_engines = "single,vp,rmtt-sound,rmtt-pruned";
    std::size_t reps = 3;
    std::vector<std::string> bench_out;
    bench_cmd->add_option("--data", bench_data, "N-Triples dataset")->required();
    bench_cmd->add_option("--queries", bench_queries, "directory of .rq files")->required();
    bench_cmd->add_option("--engines", bench_engines, "comma-separated engine list");
    bench_cmd->add_option("--reps", reps, "repetitions per query");
    bench_cmd->add_option("-o,--out", bench_out,
                          "report file; .md gets markdown, anything else CSV (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kUserError;
    }

    try {
        if (*ingest) return cmd_ingest(in_nt, engine, out_dir, lenient);
        if (*query) return cmd_query(store_dir, query_file, mode, explain_too, strict);
        if (*explain_cmd) return cmd_explain(ex_dir, ex_file, ex_mode);
        if (*stats) return cmd_stats(stats_dir);
        if (*gen_cmd) return cmd_gen(config, gen_out);
        if (*bench_cmd) return cmd_bench(bench_data, bench_queries, bench_engines, reps, bench_out);
        return kUserError;
    } catch (const UserError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUserError;
    } catch (const io::StoreError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUserError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUserError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}
