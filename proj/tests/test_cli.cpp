#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;

namespace {

struct Sandbox {
    fs::path dir;
    Sandbox()
        : dir(fs::temp_directory_path() /
              ("rmtt_cli_" + std::to_string(std::random_device{}()))) {
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }
};

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run(const Sandbox& box, const std::string& args) {
    fs::path out = box.dir / "stdout.txt";
    fs::path err = box.dir / "stderr.txt";
    std::string command = std::string(RMTT_CLI_PATH) + " " + args + " > " + out.string() +
                          " 2> " + err.string();
    int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = fixtures::read_file(out);
    result.err = fixtures::read_file(err);
    return result;
}

std::string fig3_path() { return (fixtures::dir() / "fig3.nt").string(); }
std::string fixture(const std::string& name) { return (fixtures::dir() / name).string(); }

}  // namespace

TEST_CASE("ingest then stats reports the twin partition") {
    Sandbox box;
    std::string store = (box.dir / "s").string();
    auto ingest = run(box, "ingest " + fig3_path() + " --engine rmtt -o " + store);
    REQUIRE(ingest.exit_code == 0);

    auto stats = run(box, "stats " + store);
    CHECK(stats.exit_code == 0);
    CHECK(stats.out.find("twin0_count=15") != std::string::npos);
    CHECK(stats.out.find("twin1_count=10") != std::string::npos);
    CHECK(stats.out.find("fallback_count=0") != std::string::npos);
}

TEST_CASE("query prints the worked answer") {
    Sandbox box;
    std::string store = (box.dir / "s").string();
    REQUIRE(run(box, "ingest " + fig3_path() + " --engine rmtt -o " + store).exit_code == 0);

    auto q2 = run(box, "query " + store + " " + fixture("m2.rq"));
    CHECK(q2.exit_code == 0);
    CHECK(q2.out == "?N\n\"Bob Hacker\"\n");
    CHECK(q2.err.find("rows=1") != std::string::npos);

    auto q4 = run(box, "query " + store + " " + fixture("m4.rq") + " --mode sound");
    CHECK(q4.exit_code == 0);
    CHECK(q4.out.find("<http://magazine.example/B1>") != std::string::npos);
    CHECK(q4.out.find("<http://magazine.example/B2>") != std::string::npos);
}

TEST_CASE("missing query file is a user error") {
    Sandbox box;
    std::string store = (box.dir / "s").string();
    REQUIRE(run(box, "ingest " + fig3_path() + " --engine single -o " + store).exit_code == 0);
    auto r = run(box, "query " + store + " " + (box.dir / "missing.rq").string());
    CHECK(r.exit_code == 1);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("bad flags and bad stores are user errors") {
    Sandbox box;
    CHECK(run(box, "query").exit_code == 1);
    CHECK(run(box, "frobnicate x").exit_code == 1);
    CHECK(run(box, "stats " + (box.dir / "nostore").string()).exit_code == 1);
    CHECK(run(box, "ingest " + (box.dir / "absent.nt").string() + " --engine single -o " +
                       (box.dir / "s0").string())
              .exit_code == 1);
    CHECK(run(box, "ingest " + fig3_path() + " --engine cubic -o " + (box.dir / "s").string())
              .exit_code == 1);

    std::ofstream bad(box.dir / "bad.nt");
    bad << "this is not a triple\n";
    bad.close();
    CHECK(run(box, "ingest " + (box.dir / "bad.nt").string() + " --engine single -o " +
                       (box.dir / "s2").string())
              .exit_code == 1);
    // Lenient mode shrugs it off.
    CHECK(run(box, "ingest " + (box.dir / "bad.nt").string() + " --lenient --engine single -o " +
                       (box.dir / "s3").string())
              .exit_code == 0);
}

TEST_CASE("explain prints the plan with a self-join footer") {
    Sandbox box;
    std::string store = (box.dir / "s").string();
    REQUIRE(run(box, "ingest " + fig3_path() + " --engine single -o " + store).exit_code == 0);
    auto r = run(box, "explain " + store + " " + fixture("m4.rq"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("engine: single") == 0);
    CHECK(r.out.find("3 self-joins\n") != std::string::npos);
}

TEST_CASE("gen is deterministic and bench emits both report formats") {
    Sandbox box;
    std::string data = (box.dir / "tiny.nt").string();
    std::string args = "gen --seed 5 --universities 1 --departments 1 --students 9"
                       " --professors 3 --courses 5 -o ";
    REQUIRE(run(box, args + data).exit_code == 0);
    std::string first = fixtures::read_file(data);
    REQUIRE(run(box, "gen --seed 5 --universities 1 --departments 1 --students 9"
                     " --professors 3 --courses 5 -o " +
                         (box.dir / "tiny2.nt").string())
                .exit_code == 0);
    CHECK(first == fixtures::read_file(box.dir / "tiny2.nt"));
    CHECK(first.find("GraduateCourse0") != std::string::npos);

    std::string queries = (fixtures::dir() / "queries").string();
    auto r = run(box, "bench --data " + data + " --queries " + queries +
                          " --engines single,rmtt-pruned --reps 2 -o " +
                          (box.dir / "r.csv").string() + " -o " + (box.dir / "r.md").string());
    REQUIRE(r.exit_code == 0);
    std::string csv = fixtures::read_file(box.dir / "r.csv");
    CHECK(csv.rfind("query_id,engine,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 28);
    std::string md = fixtures::read_file(box.dir / "r.md");
    CHECK(md.find("| query | results |") != std::string::npos);
}

TEST_CASE("ingest refuses to clobber an existing store") {
    Sandbox box;
    std::string store = (box.dir / "s").string();
    REQUIRE(run(box, "ingest " + fig3_path() + " --engine vp -o " + store).exit_code == 0);
    CHECK(run(box, "ingest " + fig3_path() + " --engine vp -o " + store).exit_code == 1);
}
