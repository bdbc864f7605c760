#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rmtt/bgp.hpp"
#include "rmtt/ntriples.hpp"

namespace fixtures {

inline std::filesystem::path dir() { return std::filesystem::path(RMTT_FIXTURE_DIR); }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::vector<rmtt::Triple> fig3() {
    auto parsed = rmtt::nt::parse_file((dir() / "fig3.nt").string());
    if (!parsed.ok()) throw std::runtime_error("fig3.nt does not parse");
    return parsed.triples;
}

inline rmtt::bgp::BgpQuery query(const std::string& name) {
    auto parsed = rmtt::bgp::parse_query_file((dir() / name).string());
    if (auto* d = std::get_if<rmtt::bgp::QueryDiagnostic>(&parsed))
        throw std::runtime_error(name + " does not parse: " + d->message);
    return std::get<rmtt::bgp::BgpQuery>(std::move(parsed));
}

inline rmtt::Term mag(const std::string& local) {
    return rmtt::iri("http://magazine.example/" + local);
}

}  // namespace fixtures
