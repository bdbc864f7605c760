#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace rmtt {

enum class TermKind : std::uint8_t { Iri, Literal, BlankNode };

/// A lexical RDF term. The lexical form carries no delimiters: IRIs are
/// stored without angle brackets, literals without quotes, blank nodes
/// without the "_:" prefix. Literals are plain strings (no datatype or
/// language tag).
struct Term {
    TermKind kind = TermKind::Iri;
    std::string lexical;

    bool operator==(const Term&) const = default;
    auto operator<=>(const Term&) const = default;
};

inline Term iri(std::string s) { return {TermKind::Iri, std::move(s)}; }
inline Term literal(std::string s) { return {TermKind::Literal, std::move(s)}; }
inline Term blank(std::string s) { return {TermKind::BlankNode, std::move(s)}; }

struct Triple {
    Term s, p, o;

    bool operator==(const Triple&) const = default;
    auto operator<=>(const Triple&) const = default;
};

/// Dense id handed out by the Dictionary, contiguous from 0 in
/// first-seen order.
using TermId = std::uint32_t;

struct EncodedTriple {
    TermId s = 0, p = 0, o = 0;

    bool operator==(const EncodedTriple&) const = default;
    auto operator<=>(const EncodedTriple&) const = default;
};

struct TermHash {
    std::size_t operator()(const Term& t) const noexcept {
        return std::hash<std::string>{}(t.lexical) * 3u + static_cast<std::size_t>(t.kind);
    }
};

struct EncodedTripleHash {
    std::size_t operator()(const EncodedTriple& t) const noexcept {
        std::uint64_t h = t.s;
        h = h * 0x9e3779b97f4a7c15ull + t.p;
        h = h * 0x9e3779b97f4a7c15ull + t.o;
        return static_cast<std::size_t>(h ^ (h >> 32));
    }
};

/// Bijective term <-> id map. Single writer during ingestion, immutable
/// and safe for concurrent readers afterwards.
class Dictionary {
  public:
    /// Returns the existing id for t, or assigns the next dense id.
    TermId encode(const Term& t) {
        auto it = term_to_id_.find(t);
        if (it != term_to_id_.end()) return it->second;
        TermId id = static_cast<TermId>(id_to_term_.size());
        term_to_id_.emplace(t, id);
        id_to_term_.push_back(t);
        return id;
    }

    std::optional<TermId> lookup(const Term& t) const {
        auto it = term_to_id_.find(t);
        if (it == term_to_id_.end()) return std::nullopt;
        return it->second;
    }

    /// Throws std::out_of_range for ids never handed out.
    const Term& decode(TermId id) const {
        if (id >= id_to_term_.size())
            throw std::out_of_range("Dictionary::decode: unknown id " + std::to_string(id));
        return id_to_term_[id];
    }

    std::size_t size() const { return id_to_term_.size(); }

    EncodedTriple encode(const Triple& t) {
        return {encode(t.s), encode(t.p), encode(t.o)};
    }

    Triple decode(const EncodedTriple& t) const {
        return {decode(t.s), decode(t.p), decode(t.o)};
    }

  private:
    std::unordered_map<Term, TermId, TermHash> term_to_id_;
    std::vector<Term> id_to_term_;
};

}  // namespace rmtt
