#include "rmtt/store_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rmtt/ntriples.hpp"

namespace rmtt::io {

namespace fs = std::filesystem;

namespace {

constexpr const char* kFormatVersion = "1";

std::string format_ratio(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r);
    return buf;
}

std::string kind_tag(TermKind k) {
    switch (k) {
        case TermKind::Iri: return "iri";
        case TermKind::Literal: return "lit";
        case TermKind::BlankNode: return "bnode";
    }
    return "?";
}

std::optional<TermKind> kind_from_tag(std::string_view s) {
    if (s == "iri") return TermKind::Iri;
    if (s == "lit") return TermKind::Literal;
    if (s == "bnode") return TermKind::BlankNode;
    return std::nullopt;
}

// dict.tsv stores the lexical form with N-Triples escaping so tabs and
// newlines in literals cannot break the row format.
std::string unescape_lexical(const std::string& s, const std::string& file) {
    std::string quoted = "\"" + s + "\"";
    auto r = nt::parse_line("<http://x/s> <http://x/p> " + quoted + " .");
    auto* t = std::get_if<Triple>(&r);
    if (!t) throw StoreError(file + ": bad escape sequence in lexical form");
    return t->o.lexical;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw StoreError("cannot write " + p.string());
    return out;
}

std::ifstream open_in(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw StoreError("cannot open " + p.string());
    return in;
}

void write_manifest(const Manifest& manifest, const fs::path& path) {
    auto out = open_out(path);
    for (const auto& [key, value] : manifest) out << key << "=" << value << "\n";
}

void write_dict(const Dictionary& dict, const fs::path& path) {
    auto out = open_out(path);
    for (TermId id = 0; id < dict.size(); ++id) {
        const Term& t = dict.decode(id);
        out << id << "\t" << kind_tag(t.kind) << "\t" << nt::escape_literal(t.lexical) << "\n";
    }
}

void write_table(std::span<const EncodedTriple> rows_spo_sorted, const fs::path& path) {
    auto out = open_out(path);
    for (const EncodedTriple& t : rows_spo_sorted)
        out << t.s << "\t" << t.p << "\t" << t.o << "\n";
}

void write_ids(const std::unordered_set<TermId>& set, const fs::path& path) {
    std::vector<TermId> ids(set.begin(), set.end());
    std::sort(ids.begin(), ids.end());
    auto out = open_out(path);
    for (TermId id : ids) out << id << "\n";
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

std::uint64_t parse_u64(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        std::uint64_t v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw StoreError(where + ": bad number '" + s + "'");
    }
}

Dictionary read_dict(const fs::path& path, std::size_t expected_size) {
    auto in = open_in(path);
    Dictionary dict;
    std::string line;
    std::string file = path.filename().string();
    while (std::getline(in, line)) {
        auto cols = split_tabs(line);
        if (cols.size() != 3) throw StoreError(file + ": expected 3 tab-separated columns");
        TermId id = static_cast<TermId>(parse_u64(cols[0], file));
        auto kind = kind_from_tag(cols[1]);
        if (!kind) throw StoreError(file + ": unknown term kind '" + cols[1] + "'");
        Term term{*kind, unescape_lexical(cols[2], file)};
        TermId assigned = dict.encode(term);
        if (assigned != id)
            throw StoreError(file + ": ids must be dense and ascending (saw " +
                             std::to_string(id) + ", expected " + std::to_string(assigned) + ")");
    }
    if (dict.size() != expected_size)
        throw StoreError(file + ": dictionary has " + std::to_string(dict.size()) +
                         " terms, manifest says " + std::to_string(expected_size));
    return dict;
}

std::vector<EncodedTriple> read_table(const fs::path& path, std::size_t dict_size) {
    auto in = open_in(path);
    std::vector<EncodedTriple> rows;
    std::string line;
    std::string file = path.filename().string();
    while (std::getline(in, line)) {
        auto cols = split_tabs(line);
        if (cols.size() != 3) throw StoreError(file + ": expected 3 tab-separated columns");
        EncodedTriple t{static_cast<TermId>(parse_u64(cols[0], file)),
                        static_cast<TermId>(parse_u64(cols[1], file)),
                        static_cast<TermId>(parse_u64(cols[2], file))};
        if (t.s >= dict_size || t.p >= dict_size || t.o >= dict_size)
            throw StoreError(file + ": term id out of dictionary range");
        rows.push_back(t);
    }
    return rows;
}

std::vector<TermId> read_ids(const fs::path& path, std::size_t dict_size) {
    auto in = open_in(path);
    std::vector<TermId> ids;
    std::string line;
    std::string file = path.filename().string();
    while (std::getline(in, line)) {
        TermId id = static_cast<TermId>(parse_u64(line, file));
        if (id >= dict_size) throw StoreError(file + ": term id out of dictionary range");
        ids.push_back(id);
    }
    return ids;
}

std::uint64_t manifest_count(const Manifest& m, const std::string& key) {
    auto it = m.find(key);
    if (it == m.end()) throw StoreError("manifest: missing key '" + key + "'");
    return parse_u64(it->second, "manifest");
}

std::vector<EncodedTriple> sorted_spo(std::span<const EncodedTriple> rows) {
    std::vector<EncodedTriple> out(rows.begin(), rows.end());
    std::sort(out.begin(), out.end());
    return out;
}

void verify_sets_match(const std::unordered_set<TermId>& derived, const std::vector<TermId>& read,
                       const std::string& file) {
    if (derived.size() != read.size())
        throw StoreError(file + ": membership set disagrees with table rows");
    for (TermId id : read)
        if (!derived.contains(id))
            throw StoreError(file + ": membership set disagrees with table rows");
}

}  // namespace

std::string to_string(StoreKind kind) {
    switch (kind) {
        case StoreKind::Single: return "single";
        case StoreKind::Vp: return "vp";
        case StoreKind::Rmtt: return "rmtt";
    }
    return "?";
}

std::optional<StoreKind> store_kind_from_string(std::string_view s) {
    if (s == "single") return StoreKind::Single;
    if (s == "vp") return StoreKind::Vp;
    if (s == "rmtt") return StoreKind::Rmtt;
    return std::nullopt;
}

const Dictionary& AnyStore::dict() const {
    switch (kind) {
        case StoreKind::Single: return single->dict();
        case StoreKind::Vp: return vp->dict();
        case StoreKind::Rmtt: return rmtt->dict();
    }
    throw StoreError("empty store");
}

std::size_t AnyStore::triple_count() const {
    switch (kind) {
        case StoreKind::Single: return single->triple_count();
        case StoreKind::Vp: return vp->triple_count();
        case StoreKind::Rmtt: return rmtt->triple_count();
    }
    return 0;
}

Manifest build_manifest(const AnyStore& store) {
    Manifest m;
    m["format_version"] = kFormatVersion;
    m["engine"] = to_string(store.kind);
    m["dict_size"] = std::to_string(store.dict().size());
    m["triple_count"] = std::to_string(store.triple_count());
    switch (store.kind) {
        case StoreKind::Single:
            m["table_count"] = "1";
            break;
        case StoreKind::Vp:
            m["table_count"] = std::to_string(store.vp->predicate_count());
            m["predicate_count"] = std::to_string(store.vp->predicate_count());
            break;
        case StoreKind::Rmtt: {
            const TwinTables& t = *store.rmtt;
            m["table_count"] = "2";
            m["twin0_count"] = std::to_string(t.stats().triples_per_twin[0]);
            m["twin1_count"] = std::to_string(t.stats().triples_per_twin[1]);
            m["switch_count"] = std::to_string(t.stats().switch_count);
            m["fallback_count"] = std::to_string(t.stats().fallback_count);
            m["reflexive_count"] = std::to_string(t.stats().reflexive_count);
            m["overlap0_size"] = std::to_string(t.twin(0).overlap.size());
            m["overlap1_size"] = std::to_string(t.twin(1).overlap.size());
            m["containment_sub0_obj1"] = format_ratio(t.containment_ratio(0));
            m["containment_sub1_obj0"] = format_ratio(t.containment_ratio(1));
            break;
        }
    }
    return m;
}

Manifest read_manifest(const std::filesystem::path& dir) {
    fs::path path = dir / "manifest";
    if (!fs::exists(path)) throw StoreError("missing manifest in " + dir.string());
    auto in = open_in(path);
    Manifest m;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw StoreError("manifest: bad line '" + line + "'");
        m[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return m;
}

void save_store(const AnyStore& store, const std::filesystem::path& dir) {
    if (fs::exists(dir)) throw StoreError(dir.string() + " already exists");
    fs::path tmp = dir;
    tmp += ".tmp";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    write_manifest(build_manifest(store), tmp / "manifest");
    write_dict(store.dict(), tmp / "dict.tsv");

    switch (store.kind) {
        case StoreKind::Single:
            write_table(store.single->index(PermOrder::SPO).rows(), tmp / "table0.tsv");
            break;
        case StoreKind::Vp: {
            std::size_t k = 0;
            for (const auto& [pid, table] : store.vp->tables()) {
                std::vector<EncodedTriple> rows;
                rows.reserve(table.size());
                for (const auto& so : table) rows.push_back({so.s, pid, so.o});
                write_table(sorted_spo(rows), tmp / ("table" + std::to_string(k) + ".tsv"));
                ++k;
            }
            break;
        }
        case StoreKind::Rmtt: {
            const TwinTables& t = *store.rmtt;
            for (int i = 0; i < 2; ++i) {
                std::string n = std::to_string(i);
                write_table(t.twin(i).indexes[0].rows(), tmp / ("table" + n + ".tsv"));
                write_ids(t.twin(i).subs, tmp / ("sub" + n + ".ids"));
                write_ids(t.twin(i).objs, tmp / ("obj" + n + ".ids"));
                write_ids(t.twin(i).overlap, tmp / ("overlap" + n + ".ids"));
            }
            break;
        }
    }
    fs::rename(tmp, dir);
}

AnyStore load_store(const std::filesystem::path& dir) {
    Manifest m = read_manifest(dir);
    auto version = m.find("format_version");
    if (version == m.end() || version->second != kFormatVersion)
        throw StoreError("manifest: unsupported format_version");
    auto engine = m.find("engine");
    if (engine == m.end()) throw StoreError("manifest: missing key 'engine'");
    auto kind = store_kind_from_string(engine->second);
    if (!kind) throw StoreError("manifest: unknown engine '" + engine->second + "'");

    std::size_t dict_size = manifest_count(m, "dict_size");
    std::size_t triple_count = manifest_count(m, "triple_count");
    std::size_t table_count = manifest_count(m, "table_count");
    Dictionary dict = read_dict(dir / "dict.tsv", dict_size);

    AnyStore store;
    store.kind = *kind;
    switch (*kind) {
        case StoreKind::Single: {
            auto rows = read_table(dir / "table0.tsv", dict_size);
            if (rows.size() != triple_count)
                throw StoreError("table0.tsv: has " + std::to_string(rows.size()) +
                                 " rows, manifest says " + std::to_string(triple_count));
            store.single = SingleStore::from_encoded(std::move(dict), std::move(rows));
            break;
        }
        case StoreKind::Vp: {
            std::vector<EncodedTriple> rows;
            for (std::size_t k = 0; k < table_count; ++k) {
                auto part = read_table(dir / ("table" + std::to_string(k) + ".tsv"), dict_size);
                rows.insert(rows.end(), part.begin(), part.end());
            }
            if (rows.size() != triple_count)
                throw StoreError("table files: have " + std::to_string(rows.size()) +
                                 " rows, manifest says " + std::to_string(triple_count));
            store.vp = VpStore::from_encoded(std::move(dict), rows);
            if (store.vp->predicate_count() != table_count)
                throw StoreError("table files: predicate count disagrees with manifest");
            break;
        }
        case StoreKind::Rmtt: {
            std::array<std::vector<EncodedTriple>, 2> rows;
            std::array<std::vector<TermId>, 2> subs, objs, overlap;
            BuildStats stats;
            stats.switch_count = manifest_count(m, "switch_count");
            stats.fallback_count = manifest_count(m, "fallback_count");
            stats.reflexive_count = manifest_count(m, "reflexive_count");
            for (int i = 0; i < 2; ++i) {
                std::string n = std::to_string(i);
                std::string table_file = "table" + n + ".tsv";
                rows[i] = read_table(dir / table_file, dict_size);
                std::size_t expected = manifest_count(m, "twin" + n + "_count");
                if (rows[i].size() != expected)
                    throw StoreError(table_file + ": has " + std::to_string(rows[i].size()) +
                                     " rows, manifest says " + std::to_string(expected));
                stats.triples_per_twin[i] = rows[i].size();
                subs[i] = read_ids(dir / ("sub" + n + ".ids"), dict_size);
                objs[i] = read_ids(dir / ("obj" + n + ".ids"), dict_size);
                overlap[i] = read_ids(dir / ("overlap" + n + ".ids"), dict_size);

                std::unordered_set<TermId> derived_subs, derived_objs;
                for (const EncodedTriple& t : rows[i]) {
                    derived_subs.insert(t.s);
                    derived_objs.insert(t.o);
                }
                verify_sets_match(derived_subs, subs[i], "sub" + n + ".ids");
                verify_sets_match(derived_objs, objs[i], "obj" + n + ".ids");
            }
            if (rows[0].size() + rows[1].size() != triple_count)
                throw StoreError("table files: twin sizes do not sum to manifest triple_count");
            store.rmtt = TwinTables::restore(std::move(dict), std::move(rows), std::move(subs),
                                             std::move(objs), std::move(overlap), std::move(stats));
            break;
        }
    }
    return store;
}

}  // namespace rmtt::io
