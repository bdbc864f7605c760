#pragma once

#include <array>
#include <map>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "rmtt/model.hpp"
#include "rmtt/perm_index.hpp"

namespace rmtt::bgp {

struct QueryDiagnostic {
    std::size_t line = 1;    // 1-based
    std::size_t column = 1;  // 1-based
    std::string message;
};

struct PatternTerm {
    enum class Kind { Var, Iri, Literal } kind = Kind::Var;
    std::string var;  // without the '?'
    Term term;        // for Iri / Literal

    static PatternTerm variable(std::string name) {
        return {Kind::Var, std::move(name), {}};
    }
    static PatternTerm constant(Term t) {
        return {t.kind == TermKind::Literal ? Kind::Literal : Kind::Iri, {}, std::move(t)};
    }
    bool is_var() const { return kind == Kind::Var; }
    bool operator==(const PatternTerm&) const = default;
};

using PatternAst = std::array<PatternTerm, 3>;

struct BgpQuery {
    std::map<std::string, std::string> prefixes;
    bool select_all = false;
    std::vector<std::string> select_vars;  // empty iff select_all
    std::vector<PatternAst> patterns;
    std::vector<std::string> notes;  // tolerances applied while parsing

    /// Variables in first-mention order across patterns; the projection
    /// used by SELECT *.
    std::vector<std::string> all_vars() const;
    /// select_vars, or all_vars() under SELECT *.
    std::vector<std::string> projection() const;
};

enum class QueryMode { Tolerant, Strict };

using ParseQueryResult = std::variant<BgpQuery, QueryDiagnostic>;

/// Parses PREFIX declarations, SELECT with a variable list or *, and a
/// WHERE block of triple patterns. Tolerant mode (the default) accepts
/// bare http:// IRIs, stray commas between pattern terms, and line breaks
/// inside <...>, recording a note for each; strict mode rejects them.
ParseQueryResult parse_query(std::string_view text, QueryMode mode = QueryMode::Tolerant);
ParseQueryResult parse_query_file(const std::string& path, QueryMode mode = QueryMode::Tolerant);

/// A pattern lowered against a dictionary: constants become ids, bound
/// variables take their binding, unbound variables stay open. A constant
/// missing from the dictionary makes the pattern definitely empty.
struct ResolvedPattern {
    TriplePattern pattern;
    bool impossible = false;
};

ResolvedPattern to_triple_pattern(const PatternAst& p, const Dictionary& dict,
                                  const std::unordered_map<std::string, TermId>& bindings = {});

std::string to_string(const PatternTerm& t);
std::string to_string(const PatternAst& p);

}  // namespace rmtt::bgp
