#include "sltwfs/parser.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <optional>

namespace sltwfs {

namespace {

enum class Tok { ident, var, integer, lparen, rparen, comma, dot, neck, naf, plus, minus, star, less, end };

const char* tok_name(Tok t) {
    switch (t) {
    case Tok::ident: return "identifier";
    case Tok::var: return "variable";
    case Tok::integer: return "integer";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::comma: return "','";
    case Tok::dot: return "'.'";
    case Tok::neck: return "':-'";
    case Tok::naf: return "'\\+'";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::star: return "'*'";
    case Tok::less: return "'<'";
    case Tok::end: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_space();
        SourceSpan sp{line_, col_, pos_, pos_};
        if (pos_ >= src_.size()) return {Tok::end, "", sp};
        char c = src_[pos_];
        auto single = [&](Tok k) {
            advance(1);
            sp.end = pos_;
            return Token{k, std::string(1, c), sp};
        };
        if (std::islower(static_cast<unsigned char>(c)) || std::isupper(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                advance(1);
            sp.end = pos_;
            std::string word(src_.substr(start, pos_ - start));
            bool is_var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
            return {is_var ? Tok::var : Tok::ident, std::move(word), sp};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance(1);
            sp.end = pos_;
            return {Tok::integer, std::string(src_.substr(start, pos_ - start)), sp};
        }
        switch (c) {
        case '(': return single(Tok::lparen);
        case ')': return single(Tok::rparen);
        case ',': return single(Tok::comma);
        case '.': return single(Tok::dot);
        case '+': return single(Tok::plus);
        case '-': return single(Tok::minus);
        case '*': return single(Tok::star);
        case '<': return single(Tok::less);
        case ':':
            if (src_.substr(pos_, 2) == ":-") {
                advance(2);
                sp.end = pos_;
                return {Tok::neck, ":-", sp};
            }
            break;
        case '\\':
            if (src_.substr(pos_, 2) == "\\+") {
                advance(2);
                sp.end = pos_;
                return {Tok::naf, "\\+", sp};
            }
            break;
        default:
            break;
        }
        sp.end = pos_ + 1;
        throw ParseError(sp, std::string("unexpected character '") + c + "'");
    }

private:
    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { tok_ = lex_.next(); }

    Program program() {
        Program p;
        while (tok_.kind != Tok::end) clause(p);
        return p;
    }

    Atom query() {
        if (tok_.kind == Tok::naf) throw ParseError(tok_.span, "top goal must be a single atom");
        SourceSpan at = tok_.span;
        std::optional<Atom> a = body_atom_or_builtin();
        if (!a || is_builtin(*a)) throw ParseError(at, "builtins are only legal in clause bodies");
        if (tok_.kind == Tok::comma) throw ParseError(tok_.span, "top goal must be a single atom");
        if (tok_.kind == Tok::dot) shift();
        expect(Tok::end);
        return *a;
    }

private:
    void shift() { tok_ = lex_.next(); }

    [[noreturn]] void fail(std::string msg, std::vector<Tok> expected) {
        std::vector<std::string> names;
        for (Tok t : expected) names.emplace_back(tok_name(t));
        throw ParseError(tok_.span, std::move(msg), std::move(names));
    }

    Token expect(Tok k) {
        if (tok_.kind != k) fail(std::string("expected ") + tok_name(k) + ", found " + describe(tok_), {k});
        Token t = tok_;
        shift();
        return t;
    }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::end) return "end of input";
        return "'" + t.text + "'";
    }

    void clause(Program& p) {
        anon_ = 0;
        SourceSpan head_span = tok_.span;
        if (tok_.kind != Tok::ident) fail("expected a clause head, found " + describe(tok_), {Tok::ident});
        Atom head = plain_atom();
        if (is_builtin(head)) throw ParseError(head_span, "cannot define clauses for builtin " + head.predicate);
        check_arity(head, head_span);
        std::vector<Literal> body;
        if (tok_.kind == Tok::neck) {
            shift();
            body.push_back(literal());
            while (tok_.kind == Tok::comma) {
                shift();
                body.push_back(literal());
            }
        }
        if (tok_.kind != Tok::dot)
            fail("expected ',' or '.' after " + std::string(body.empty() ? "clause head" : "body literal") + ", found " +
                     describe(tok_),
                 body.empty() ? std::vector<Tok>{Tok::neck, Tok::dot} : std::vector<Tok>{Tok::comma, Tok::dot});
        shift();
        p.add(std::move(head), std::move(body));
    }

    Literal literal() {
        if (tok_.kind == Tok::naf) {
            shift();
            SourceSpan at = tok_.span;
            if (tok_.kind != Tok::ident) fail("expected an atom after \\+, found " + describe(tok_), {Tok::ident});
            Atom a = plain_atom();
            if (tok_.kind == Tok::less || (tok_.kind == Tok::ident && tok_.text == "is"))
                throw ParseError(at, "negated builtins are not supported");
            if (is_builtin(a)) throw ParseError(at, "negated builtins are not supported");
            check_arity(a, at);
            return Literal::neg(std::move(a));
        }
        SourceSpan at = tok_.span;
        std::optional<Atom> a = body_atom_or_builtin();
        if (!is_builtin(*a)) check_arity(*a, at);
        return Literal::pos(std::move(*a));
    }

    // An ordinary atom or `Expr is Expr` / `Expr < Expr`.
    std::optional<Atom> body_atom_or_builtin() {
        if (tok_.kind == Tok::ident && tok_.text != "is") {
            Atom a = plain_atom();
            bool infix_follows = tok_.kind == Tok::less || tok_.kind == Tok::plus || tok_.kind == Tok::minus ||
                                 tok_.kind == Tok::star || (tok_.kind == Tok::ident && tok_.text == "is");
            if (!infix_follows) return a;
            Term lhs = continue_expr(as_term(a));
            return builtin_tail(std::move(lhs));
        }
        if (tok_.kind == Tok::var || tok_.kind == Tok::integer || tok_.kind == Tok::lparen || tok_.kind == Tok::minus) {
            Term lhs = expr();
            return builtin_tail(std::move(lhs));
        }
        fail("expected a literal, found " + describe(tok_), {Tok::ident, Tok::var, Tok::naf});
    }

    Atom builtin_tail(Term lhs) {
        if (tok_.kind == Tok::ident && tok_.text == "is") {
            shift();
            return Atom{"is", {std::move(lhs), expr()}};
        }
        if (tok_.kind == Tok::less) {
            shift();
            return Atom{"<", {std::move(lhs), expr()}};
        }
        fail("expected 'is' or '<' after an arithmetic term, found " + describe(tok_), {Tok::ident, Tok::less});
    }

    static Term as_term(const Atom& a) { return Term::compound(a.predicate, a.args); }

    Atom plain_atom() {
        Token name = expect(Tok::ident);
        Atom a{name.text, {}};
        if (tok_.kind == Tok::lparen) {
            shift();
            a.args.push_back(expr());
            while (tok_.kind == Tok::comma) {
                shift();
                a.args.push_back(expr());
            }
            if (tok_.kind != Tok::rparen) fail("unclosed argument list, found " + describe(tok_), {Tok::comma, Tok::rparen});
            shift();
        }
        return a;
    }

    Term expr() { return continue_expr(mul()); }

    Term continue_expr(Term lhs) {
        lhs = continue_mul(std::move(lhs));
        while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
            std::string op = tok_.text;
            shift();
            lhs = Term::compound(op, {std::move(lhs), mul()});
        }
        return lhs;
    }

    Term mul() { return continue_mul(unary()); }

    Term continue_mul(Term lhs) {
        while (tok_.kind == Tok::star) {
            shift();
            lhs = Term::compound("*", {std::move(lhs), unary()});
        }
        return lhs;
    }

    Term unary() {
        if (tok_.kind == Tok::minus) {
            shift();
            Token t = expect(Tok::integer);
            return Term::integer(-to_int(t));
        }
        return primary();
    }

    Term primary() {
        switch (tok_.kind) {
        case Tok::var: {
            Token t = tok_;
            shift();
            if (t.text == "_") return Term::variable("_A" + std::to_string(++anon_));
            return Term::variable(t.text);
        }
        case Tok::integer: {
            Token t = tok_;
            shift();
            return Term::integer(to_int(t));
        }
        case Tok::ident: {
            Atom a = plain_atom();
            return as_term(a);
        }
        case Tok::lparen: {
            shift();
            Term e = expr();
            expect(Tok::rparen);
            return e;
        }
        default:
            fail("expected a term, found " + describe(tok_), {Tok::var, Tok::integer, Tok::ident, Tok::lparen});
        }
    }

    static std::int64_t to_int(const Token& t) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) throw ParseError(t.span, "integer out of range: " + t.text);
        return v;
    }

    void check_arity(const Atom& a, const SourceSpan& at) {
        auto [it, fresh] = arity_.emplace(a.predicate, a.arity());
        if (!fresh && it->second != a.arity())
            throw ParseError(at, "predicate " + a.predicate + " used with arity " + std::to_string(a.arity()) +
                                     " and arity " + std::to_string(it->second));
    }

    Lexer lex_;
    Token tok_;
    unsigned anon_ = 0;
    std::map<std::string, std::size_t> arity_;
};

std::string format_what(const SourceSpan& s, const std::string& msg, const std::vector<std::string>& expected) {
    std::string out = std::to_string(s.line) + ":" + std::to_string(s.column) + ": " + msg;
    if (!expected.empty()) {
        out += " (expected";
        for (std::size_t i = 0; i < expected.size(); ++i) out += (i ? " or " : " ") + expected[i];
        out += ")";
    }
    return out;
}

}  // namespace

ParseError::ParseError(SourceSpan span, std::string message, std::vector<std::string> expected)
    : std::runtime_error(format_what(span, message, expected)),
      span_(span),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

Program parse_program(std::string_view text) { return Parser(text).program(); }

Atom parse_query(std::string_view text) { return Parser(text).query(); }

}  // namespace sltwfs
