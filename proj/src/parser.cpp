#include "logquest/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace logquest {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column, std::string token)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message +
            (token.empty() ? std::string() : " near '" + token + "'")),
      reason_(message),
      line_(line),
      column_(column),
      token_(std::move(token)) {}

namespace {

enum class Tok { Ident, Var, Equals, LParen, RParen, Comma, Semicolon, Neck, Dot, QueryMark, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t column;
};

bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

class Lexer {
public:
    Lexer(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] == '%') {
                out.push_back({Tok::End, "", pos_ + 1});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    Token next() {
        const std::size_t start = pos_;
        const unsigned char c = static_cast<unsigned char>(text_[pos_]);
        auto single = [&](Tok kind) {
            ++pos_;
            return Token{kind, std::string(1, static_cast<char>(c)), start + 1};
        };
        switch (c) {
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            case ',': return single(Tok::Comma);
            case ';': return single(Tok::Semicolon);
            case '.': return single(Tok::Dot);
            case '=': return single(Tok::Equals);
            case ':':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
                    pos_ += 2;
                    return {Tok::Neck, ":-", start + 1};
                }
                break;
            case '?':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
                    pos_ += 2;
                    return {Tok::QueryMark, "?-", start + 1};
                }
                break;
            default: break;
        }
        if (ident_char(c)) {
            while (pos_ < text_.size() && ident_char(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            std::string word(text_.substr(start, pos_ - start));
            const bool reserved_ident = word.size() > 2 && word[0] == '_' && word[1] == '_';
            const bool variable = !reserved_ident && (std::isupper(c) || c == '_');
            return {variable ? Tok::Var : Tok::Ident, std::move(word), start + 1};
        }
        throw ParseError("unexpected character", line_, start + 1, std::string(1, static_cast<char>(c)));
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& options)
        : tokens_(Lexer(text, options.line).run()), options_(options) {}

    Clause clause(std::string_view origin_tag) {
        Clause c;
        c.origin = std::string(origin_tag);
        if (peek().kind == Tok::Neck) {
            advance();
            c.body = conjunction();
        } else {
            if (peek().kind == Tok::Ident && peek().text == "false" && peek(1).kind != Tok::LParen &&
                peek(1).kind != Tok::Equals) {
                advance();
            } else {
                c.head.push_back(atom());
                while (peek().kind == Tok::Semicolon) {
                    advance();
                    c.head.push_back(atom());
                }
            }
            if (peek().kind == Tok::Neck) {
                advance();
                c.body = conjunction();
            } else if (c.head.empty()) {
                fail("constraint needs a body");
            }
        }
        finish();
        return c;
    }

    Query query() {
        expect(Tok::QueryMark, "expected '?-'");
        if (peek().kind == Tok::Dot) fail("query has no subgoals");
        auto subgoals = conjunction();
        finish();
        return make_query(std::move(subgoals));
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& message) const {
        const auto& t = peek();
        throw ParseError(message, options_.line, t.column, t.kind == Tok::End ? "end of line" : t.text);
    }

    void expect(Tok kind, const char* message) {
        if (peek().kind != kind) fail(message);
        advance();
    }

    void finish() {
        expect(Tok::Dot, "expected '.'");
        if (peek().kind != Tok::End) fail("trailing input after '.'");
    }

    std::vector<Atom> conjunction() {
        std::vector<Atom> atoms;
        atoms.push_back(atom());
        while (peek().kind == Tok::Comma) {
            advance();
            atoms.push_back(atom());
        }
        return atoms;
    }

    std::vector<Term> arguments() {
        std::vector<Term> args;
        expect(Tok::LParen, "expected '('");
        if (peek().kind == Tok::RParen) {
            advance();
            return args;
        }
        args.push_back(term());
        while (peek().kind == Tok::Comma) {
            advance();
            args.push_back(term());
        }
        expect(Tok::RParen, "expected ')' or ','");
        return args;
    }

    Term term() {
        const Token& t = peek();
        if (t.kind == Tok::Var) {
            advance();
            return Term::variable(t.text);
        }
        if (t.kind == Tok::Ident) {
            advance();
            if (peek().kind == Tok::LParen) {
                const Symbol functor = Symbol::intern(t.text);
                return Term::compound(functor, arguments());
            }
            return Term::constant(t.text);
        }
        fail("expected a term");
    }

    Atom atom() {
        const std::size_t column = peek().column;
        Atom result;
        if (peek().kind == Tok::Equals) {
            advance();
            result = Atom(reserved::equality(), arguments());
        } else if (peek().kind == Tok::Ident && peek(1).kind != Tok::Equals) {
            const Token& name = advance();
            result.predicate = Symbol::intern(name.text);
            if (peek().kind == Tok::LParen) result.args = arguments();
            if (peek().kind == Tok::Equals) {
                advance();
                Term lhs = Term::compound(result.predicate, std::move(result.args));
                result = Atom(reserved::equality(), {std::move(lhs), term()});
            }
        } else if (peek().kind == Tok::Ident || peek().kind == Tok::Var) {
            Term lhs = term();
            expect(Tok::Equals, "expected '=' after term");
            Term rhs = term();
            result = Atom(reserved::equality(), {std::move(lhs), std::move(rhs)});
        } else {
            fail("expected an atom");
        }
        if (!options_.allow_reserved) {
            try {
                check_reserved(result);
            } catch (const ReservedPredicateError& e) {
                throw ParseError(e.what(), options_.line, column, result.predicate.name());
            }
        }
        return result;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    ParseOptions options_;
};

std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

void check_reserved(const Atom& atom) {
    if (atom.predicate == reserved::dom() || atom.predicate == reserved::answer()) {
        throw ReservedPredicateError("reserved predicate " + atom.predicate.name() + " in input");
    }
    if (atom.predicate == reserved::equality() && atom.arity() != 2) {
        throw ReservedPredicateError("equality must be binary");
    }
}

Clause parse_clause(std::string_view text, std::string_view origin_tag, const ParseOptions& options) {
    return Parser(text, options).clause(origin_tag);
}

Query parse_query(std::string_view text, const ParseOptions& options) { return Parser(text, options).query(); }

std::vector<Clause> parse_kb(std::string_view text, std::string_view origin_tag, const ParseOptions& options) {
    std::vector<Clause> out;
    std::size_t line_no = options.line;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = strip(text.substr(start, end - start));
        if (!line.empty() && line.front() != '%') {
            ParseOptions line_options = options;
            line_options.line = line_no;
            out.push_back(parse_clause(line, origin_tag, line_options));
        }
        ++line_no;
        start = end + 1;
    }
    return out;
}

std::vector<Clause> load_kb_file(const std::filesystem::path& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open knowledge base: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_kb(buffer.str(), origin::background, options);
}

}  // namespace logquest
