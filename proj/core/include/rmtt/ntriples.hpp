#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rmtt/model.hpp"

namespace rmtt::nt {

struct ParseDiagnostic {
    std::size_t line_number = 1;   // 1-based physical line
    std::size_t byte_offset = 0;   // 0-based offset within the line
    std::string message;
};

/// Blank or comment-only line.
struct EmptyLine {};

using LineResult = std::variant<Triple, EmptyLine, ParseDiagnostic>;

/// Parses one physical line (no trailing newline). Recognizes <iri>,
/// "literal" with the usual escapes plus \uXXXX / \UXXXXXXXX, _:label,
/// and the terminating dot.
LineResult parse_line(std::string_view line);

enum class ParseMode { Strict, Lenient };

struct StreamResult {
    std::vector<Triple> triples;
    std::vector<ParseDiagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

/// Strict mode stops at the first bad line; lenient mode skips bad lines
/// and collects their diagnostics. Triples come back in file order.
StreamResult parse_stream(std::istream& in, ParseMode mode = ParseMode::Strict);
StreamResult parse_file(const std::string& path, ParseMode mode = ParseMode::Strict);

/// One N-Triples line, without trailing newline. parse_line(serialize(t))
/// reproduces t exactly; escapes are emitted only where required and for
/// control characters.
std::string serialize(const Triple& t);
std::string serialize_term(const Term& t);

/// Escaping helpers shared with the on-disk store format.
std::string escape_literal(std::string_view s);
std::string escape_iri(std::string_view s);

}  // namespace rmtt::nt
