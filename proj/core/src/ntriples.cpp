#include "rmtt/ntriples.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace rmtt::nt {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t'; }

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp <= 0x7f) {
        out.push_back(static_cast<char>(cp));
    } else if (cp <= 0x7ff) {
        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp <= 0xffff) {
        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
}

struct Cursor {
    std::string_view line;
    std::size_t pos = 0;

    bool done() const { return pos >= line.size(); }
    char peek() const { return line[pos]; }
    void skip_ws() {
        while (!done() && is_ws(peek())) ++pos;
    }
};

ParseDiagnostic err(const Cursor& c, std::string msg) {
    return ParseDiagnostic{1, c.pos, std::move(msg)};
}

// Decodes \\ \" \' \n \r \t \b \f \uXXXX \UXXXXXXXX starting after the
// backslash. Returns false on a malformed escape.
bool read_escape(Cursor& c, std::string& out, std::string& error) {
    if (c.done()) {
        error = "dangling backslash";
        return false;
    }
    char e = c.line[c.pos++];
    switch (e) {
        case 't': out.push_back('\t'); return true;
        case 'b': out.push_back('\b'); return true;
        case 'n': out.push_back('\n'); return true;
        case 'r': out.push_back('\r'); return true;
        case 'f': out.push_back('\f'); return true;
        case '"': out.push_back('"'); return true;
        case '\'': out.push_back('\''); return true;
        case '\\': out.push_back('\\'); return true;
        case 'u':
        case 'U': {
            std::size_t n = (e == 'u') ? 4 : 8;
            if (c.pos + n > c.line.size()) {
                error = "truncated \\u escape";
                return false;
            }
            std::uint32_t cp = 0;
            for (std::size_t i = 0; i < n; ++i) {
                char h = c.line[c.pos + i];
                cp <<= 4;
                if (h >= '0' && h <= '9') cp |= static_cast<std::uint32_t>(h - '0');
                else if (h >= 'a' && h <= 'f') cp |= static_cast<std::uint32_t>(h - 'a' + 10);
                else if (h >= 'A' && h <= 'F') cp |= static_cast<std::uint32_t>(h - 'A' + 10);
                else {
                    error = "bad hex digit in \\u escape";
                    return false;
                }
            }
            if (cp > 0x10ffff) {
                error = "code point out of range";
                return false;
            }
            c.pos += n;
            append_utf8(out, cp);
            return true;
        }
        default:
            error = std::string("unknown escape \\") + e;
            return false;
    }
}

std::variant<Term, ParseDiagnostic> read_term(Cursor& c, bool subject_position,
                                              bool predicate_position) {
    if (c.done()) return err(c, "unexpected end of line, term expected");
    char lead = c.peek();
    if (lead == '<') {
        ++c.pos;
        std::string lex;
        while (!c.done() && c.peek() != '>') {
            char ch = c.line[c.pos++];
            if (ch == '\\') {
                std::string why;
                if (!read_escape(c, lex, why)) return err(c, "in IRI: " + why);
            } else {
                lex.push_back(ch);
            }
        }
        if (c.done()) return err(c, "unterminated IRI, '>' expected");
        ++c.pos;  // consume '>'
        if (lex.empty()) return err(c, "empty IRI");
        return iri(std::move(lex));
    }
    if (lead == '"') {
        if (predicate_position) return err(c, "literal not allowed as predicate");
        if (subject_position) return err(c, "literal not allowed as subject");
        ++c.pos;
        std::string lex;
        while (!c.done() && c.peek() != '"') {
            char ch = c.line[c.pos++];
            if (ch == '\\') {
                std::string why;
                if (!read_escape(c, lex, why)) return err(c, "in literal: " + why);
            } else {
                lex.push_back(ch);
            }
        }
        if (c.done()) return err(c, "unterminated literal, '\"' expected");
        ++c.pos;  // consume closing quote
        if (!c.done() && (c.peek() == '^' || c.peek() == '@'))
            return err(c, "datatype/language tags are not supported");
        return literal(std::move(lex));
    }
    if (lead == '_') {
        if (predicate_position) return err(c, "blank node not allowed as predicate");
        if (c.pos + 1 >= c.line.size() || c.line[c.pos + 1] != ':')
            return err(c, "bad blank node, '_:' expected");
        c.pos += 2;
        std::string label;
        while (!c.done()) {
            char ch = c.peek();
            bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '_' || ch == '-';
            if (!ok) break;
            label.push_back(ch);
            ++c.pos;
        }
        if (label.empty()) return err(c, "empty blank node label");
        return blank(std::move(label));
    }
    return err(c, std::string("unexpected character '") + lead + "'");
}

}  // namespace

LineResult parse_line(std::string_view line) {
    Cursor c{line};
    c.skip_ws();
    if (c.done() || c.peek() == '#') return EmptyLine{};

    auto s = read_term(c, /*subject=*/true, /*predicate=*/false);
    if (auto* d = std::get_if<ParseDiagnostic>(&s)) return *d;
    c.skip_ws();
    if (c.done()) return err(c, "missing predicate");

    auto p = read_term(c, false, /*predicate=*/true);
    if (auto* d = std::get_if<ParseDiagnostic>(&p)) return *d;
    c.skip_ws();
    if (c.done()) return err(c, "missing object");

    auto o = read_term(c, false, false);
    if (auto* d = std::get_if<ParseDiagnostic>(&o)) return *d;

    c.skip_ws();
    if (c.done() || c.peek() != '.') return err(c, "missing terminating '.'");
    ++c.pos;
    c.skip_ws();
    if (!c.done() && c.peek() != '#') return err(c, "trailing characters after '.'");

    return Triple{std::get<Term>(std::move(s)), std::get<Term>(std::move(p)),
                  std::get<Term>(std::move(o))};
}

StreamResult parse_stream(std::istream& in, ParseMode mode) {
    StreamResult result;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        LineResult r = parse_line(line);
        if (auto* t = std::get_if<Triple>(&r)) {
            result.triples.push_back(std::move(*t));
        } else if (auto* d = std::get_if<ParseDiagnostic>(&r)) {
            d->line_number = line_number;
            result.diagnostics.push_back(std::move(*d));
            if (mode == ParseMode::Strict) return result;
        }
    }
    if (in.bad()) throw std::runtime_error("I/O error while reading N-Triples stream");
    return result;
}

StreamResult parse_file(const std::string& path, ParseMode mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_stream(in, mode);
}

std::string escape_literal(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        switch (ch) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04X", ch);
                    out += buf;
                } else {
                    out.push_back(ch);
                }
        }
    }
    return out;
}

std::string escape_iri(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        unsigned char u = static_cast<unsigned char>(ch);
        bool needs_escape = u < 0x21 || ch == '<' || ch == '>' || ch == '"' || ch == '{' ||
                            ch == '}' || ch == '|' || ch == '^' || ch == '`' || ch == '\\';
        if (needs_escape) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04X", u);
            out += buf;
        } else {
            out.push_back(ch);
        }
    }
    return out;
}

std::string serialize_term(const Term& t) {
    switch (t.kind) {
        case TermKind::Iri: return "<" + escape_iri(t.lexical) + ">";
        case TermKind::Literal: return "\"" + escape_literal(t.lexical) + "\"";
        case TermKind::BlankNode: return "_:" + t.lexical;
    }
    return {};
}

std::string serialize(const Triple& t) {
    return serialize_term(t.s) + " " + serialize_term(t.p) + " " + serialize_term(t.o) + " .";
}

}  // namespace rmtt::nt
