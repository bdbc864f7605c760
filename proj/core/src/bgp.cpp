#include "rmtt/bgp.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "rmtt/ntriples.hpp"

namespace rmtt::bgp {

namespace {

struct Token {
    enum class Kind {
        KwPrefix,
        KwSelect,
        KwWhere,
        LBrace,
        RBrace,
        Dot,
        Comma,
        Star,
        Var,      // text = name without '?'
        IriRef,   // text = IRI
        BareIri,  // text = IRI given without angle brackets
        PName,    // prefix:text split stored in prefix/local
        Literal,  // text = unescaped value
        End,
        Error,
    } kind = Kind::End;
    std::string text;
    std::string prefix, local;  // PName only
    std::size_t line = 1, column = 1;
    bool wrapped = false;  // IriRef spanned a line break
};

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

bool is_var_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_var_char(char c) {
    return is_var_start(c) || (c >= '0' && c <= '9');
}

class Lexer {
  public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_ws();
        Token tok;
        tok.line = line_;
        tok.column = column_;
        if (done()) {
            tok.kind = Token::Kind::End;
            return tok;
        }
        char c = peek();
        switch (c) {
            case '{': advance(); tok.kind = Token::Kind::LBrace; return tok;
            case '}': advance(); tok.kind = Token::Kind::RBrace; return tok;
            case ',': advance(); tok.kind = Token::Kind::Comma; return tok;
            case '*': advance(); tok.kind = Token::Kind::Star; return tok;
            case '.': advance(); tok.kind = Token::Kind::Dot; return tok;
            case '<': return lex_iri(tok);
            case '"': return lex_literal(tok);
            case '?': return lex_var(tok);
            default: return lex_word(tok);
        }
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1, column_ = 1;

    bool done() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }
    void skip_ws() {
        while (!done() && std::isspace(static_cast<unsigned char>(peek()))) advance();
    }

    Token lex_iri(Token tok) {
        advance();  // '<'
        std::string value;
        while (!done() && peek() != '>') {
            char c = peek();
            if (c == '\n' || c == '\r') {
                tok.wrapped = true;  // PDF-style wrap inside the IRI
            } else {
                value.push_back(c);
            }
            advance();
        }
        if (done()) {
            tok.kind = Token::Kind::Error;
            tok.text = "unterminated IRI, '>' expected";
            return tok;
        }
        advance();  // '>'
        tok.kind = Token::Kind::IriRef;
        tok.text = std::move(value);
        return tok;
    }

    Token lex_literal(Token tok) {
        advance();  // opening quote
        std::string value;
        while (!done() && peek() != '"') {
            char c = peek();
            if (c == '\\') {
                advance();
                if (done()) break;
                char e = peek();
                switch (e) {
                    case 'n': value.push_back('\n'); break;
                    case 'r': value.push_back('\r'); break;
                    case 't': value.push_back('\t'); break;
                    case '"': value.push_back('"'); break;
                    case '\\': value.push_back('\\'); break;
                    default:
                        tok.kind = Token::Kind::Error;
                        tok.text = std::string("unknown escape \\") + e;
                        return tok;
                }
                advance();
            } else {
                value.push_back(c);
                advance();
            }
        }
        if (done()) {
            tok.kind = Token::Kind::Error;
            tok.text = "unterminated literal";
            return tok;
        }
        advance();  // closing quote
        tok.kind = Token::Kind::Literal;
        tok.text = std::move(value);
        return tok;
    }

    Token lex_var(Token tok) {
        advance();  // '?'
        std::string name;
        if (!done() && is_var_start(peek())) {
            while (!done() && is_var_char(peek())) {
                name.push_back(peek());
                advance();
            }
        }
        if (name.empty()) {
            tok.kind = Token::Kind::Error;
            tok.text = "variable name expected after '?'";
            return tok;
        }
        tok.kind = Token::Kind::Var;
        tok.text = std::move(name);
        return tok;
    }

    // Keywords, prefixed names, and bare IRIs all lex as words delimited
    // by whitespace or by { } , < " ?. A single trailing '.' splits off as
    // the pattern separator.
    Token lex_word(Token tok) {
        std::string word;
        while (!done()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == '}' ||
                c == ',' || c == '<' || c == '"' || c == '?')
                break;
            word.push_back(c);
            advance();
        }
        if (word.size() > 1 && word.back() == '.') {
            word.pop_back();
            --pos_;
            --column_;
        }
        if (word.empty()) {
            tok.kind = Token::Kind::Error;
            tok.text = std::string("unexpected character '") + peek() + "'";
            return tok;
        }
        if (iequals(word, "PREFIX")) {
            tok.kind = Token::Kind::KwPrefix;
        } else if (iequals(word, "SELECT")) {
            tok.kind = Token::Kind::KwSelect;
        } else if (iequals(word, "WHERE")) {
            tok.kind = Token::Kind::KwWhere;
        } else if (word.starts_with("http://") || word.starts_with("https://")) {
            tok.kind = Token::Kind::BareIri;
            tok.text = std::move(word);
        } else if (auto colon = word.find(':'); colon != std::string::npos) {
            tok.kind = Token::Kind::PName;
            tok.prefix = word.substr(0, colon);
            tok.local = word.substr(colon + 1);
            tok.text = std::move(word);
        } else {
            tok.kind = Token::Kind::Error;
            tok.text = "unexpected token '" + word + "'";
        }
        return tok;
    }
};

class Parser {
  public:
    Parser(std::string_view text, QueryMode mode) : lexer_(text), mode_(mode) { shift(); }

    ParseQueryResult run() {
        while (tok_.kind == Token::Kind::KwPrefix)
            if (auto d = parse_prefix()) return *d;
        if (tok_.kind != Token::Kind::KwSelect) return fail("SELECT expected");
        shift();
        if (auto d = parse_projection()) return *d;
        if (tok_.kind == Token::Kind::KwWhere) shift();
        if (tok_.kind != Token::Kind::LBrace) return fail("'{' expected");
        shift();
        if (auto d = parse_patterns()) return *d;
        if (tok_.kind != Token::Kind::End) return fail("trailing input after '}'");
        if (query_.patterns.empty()) return fail("empty pattern block");
        for (const std::string& v : query_.select_vars) {
            bool found = false;
            for (const PatternAst& p : query_.patterns)
                for (const PatternTerm& t : p)
                    if (t.is_var() && t.var == v) found = true;
            if (!found) return fail("selected variable ?" + v + " does not occur in any pattern");
        }
        return std::move(query_);
    }

  private:
    Lexer lexer_;
    QueryMode mode_;
    Token tok_;
    BgpQuery query_;

    void shift() { tok_ = lexer_.next(); }

    QueryDiagnostic fail(std::string msg) const {
        return QueryDiagnostic{tok_.line, tok_.column, std::move(msg)};
    }

    void note(std::string msg) {
        std::ostringstream os;
        os << "line " << tok_.line << ": " << msg;
        query_.notes.push_back(os.str());
    }

    std::optional<QueryDiagnostic> parse_prefix() {
        shift();  // PREFIX
        if (tok_.kind != Token::Kind::PName || !tok_.local.empty())
            return fail("prefix declaration expected, e.g. ub: <...>");
        std::string name = tok_.prefix;
        shift();
        if (tok_.kind != Token::Kind::IriRef) return fail("IRI expected in prefix declaration");
        if (tok_.wrapped) {
            if (mode_ == QueryMode::Strict) return fail("line break inside IRI");
            note("joined a line break inside <...>");
        }
        query_.prefixes[name] = tok_.text;
        shift();
        return std::nullopt;
    }

    std::optional<QueryDiagnostic> parse_projection() {
        if (tok_.kind == Token::Kind::Star) {
            query_.select_all = true;
            shift();
            return std::nullopt;
        }
        while (true) {
            if (tok_.kind != Token::Kind::Var) {
                if (query_.select_vars.empty()) return fail("projection variable or * expected");
                return std::nullopt;
            }
            query_.select_vars.push_back(tok_.text);
            shift();
            if (tok_.kind == Token::Kind::Comma) shift();  // appendix-style list
        }
    }

    std::optional<QueryDiagnostic> parse_patterns() {
        std::vector<PatternTerm> pending;
        auto flush = [&]() -> std::optional<QueryDiagnostic> {
            if (pending.size() != 3)
                return fail("triple pattern needs 3 terms, got " +
                            std::to_string(pending.size()));
            query_.patterns.push_back({pending[0], pending[1], pending[2]});
            pending.clear();
            return std::nullopt;
        };
        while (true) {
            switch (tok_.kind) {
                case Token::Kind::RBrace:
                    if (!pending.empty())
                        if (auto d = flush()) return d;
                    shift();
                    return std::nullopt;
                case Token::Kind::Dot:
                    if (auto d = flush()) return d;
                    shift();
                    break;
                case Token::Kind::Comma:
                    if (mode_ == QueryMode::Strict) return fail("stray ',' between pattern terms");
                    note("ignored stray ',' between pattern terms");
                    shift();
                    break;
                case Token::Kind::Var:
                    pending.push_back(PatternTerm::variable(tok_.text));
                    shift();
                    break;
                case Token::Kind::IriRef:
                    if (tok_.wrapped) {
                        if (mode_ == QueryMode::Strict) return fail("line break inside IRI");
                        note("joined a line break inside <...>");
                    }
                    pending.push_back(PatternTerm::constant(iri(tok_.text)));
                    shift();
                    break;
                case Token::Kind::BareIri:
                    if (mode_ == QueryMode::Strict) return fail("bare IRI without <...>");
                    note("accepted bare IRI " + tok_.text);
                    pending.push_back(PatternTerm::constant(iri(tok_.text)));
                    shift();
                    break;
                case Token::Kind::PName: {
                    auto it = query_.prefixes.find(tok_.prefix);
                    if (it == query_.prefixes.end())
                        return fail("undeclared prefix '" + tok_.prefix + ":'");
                    pending.push_back(PatternTerm::constant(iri(it->second + tok_.local)));
                    shift();
                    break;
                }
                case Token::Kind::Literal:
                    if (pending.size() == 1)
                        return fail("literal not allowed in predicate position");
                    pending.push_back(PatternTerm::constant(literal(tok_.text)));
                    shift();
                    break;
                case Token::Kind::End:
                    return fail("unterminated pattern block, '}' expected");
                case Token::Kind::Error:
                    return fail(tok_.text);
                default:
                    return fail("unexpected token in pattern block");
            }
            if (pending.size() > 3) return fail("expected '.' between triple patterns");
        }
    }
};

}  // namespace

std::vector<std::string> BgpQuery::all_vars() const {
    std::vector<std::string> vars;
    for (const PatternAst& p : patterns)
        for (const PatternTerm& t : p)
            if (t.is_var() && std::find(vars.begin(), vars.end(), t.var) == vars.end())
                vars.push_back(t.var);
    return vars;
}

std::vector<std::string> BgpQuery::projection() const {
    return select_all ? all_vars() : select_vars;
}

ParseQueryResult parse_query(std::string_view text, QueryMode mode) {
    return Parser(text, mode).run();
}

ParseQueryResult parse_query_file(const std::string& path, QueryMode mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return QueryDiagnostic{1, 1, "cannot open " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_query(buf.str(), mode);
}

ResolvedPattern to_triple_pattern(const PatternAst& p, const Dictionary& dict,
                                  const std::unordered_map<std::string, TermId>& bindings) {
    ResolvedPattern out;
    auto resolve = [&](const PatternTerm& t) -> std::optional<TermId> {
        if (t.is_var()) {
            auto it = bindings.find(t.var);
            if (it != bindings.end()) return it->second;
            return std::nullopt;
        }
        auto id = dict.lookup(t.term);
        if (!id) out.impossible = true;
        return id;
    };
    out.pattern.s = resolve(p[0]);
    out.pattern.p = resolve(p[1]);
    out.pattern.o = resolve(p[2]);
    return out;
}

std::string to_string(const PatternTerm& t) {
    if (t.is_var()) return "?" + t.var;
    return nt::serialize_term(t.term);
}

std::string to_string(const PatternAst& p) {
    return to_string(p[0]) + " " + to_string(p[1]) + " " + to_string(p[2]);
}

}  // namespace rmtt::bgp
