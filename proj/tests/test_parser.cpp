#include <doctest.h>

#include <random>

#include "sltwfs/parser.hpp"
#include "sltwfs/render.hpp"
#include "sltwfs/subst.hpp"

using namespace sltwfs;

namespace {

// Clause text with variables renamed by first occurrence, so two programs
// compare equal exactly when they differ only in variable names.
std::string normalized(const Program& p) {
    std::string out;
    for (const auto& c : p.clauses()) {
        std::vector<Var> vs;
        collect_vars(c.head, vs);
        for (const auto& l : c.body)
            if (!l.is_ustar()) collect_vars(l.atom, vs);
        std::map<Var, Term> m;
        for (std::size_t i = 0; i < vs.size(); ++i) m.emplace(vs[i], Term::variable("V" + std::to_string(i)));
        auto s = Substitution::from_bindings(std::move(m));
        Clause d = c;
        d.head = apply(s, c.head);
        for (auto& l : d.body) l = apply(s, l);
        out += render(d) + "\n";
    }
    return out;
}

Term random_term(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> kind(0, depth > 0 ? 4 : 2);
    switch (kind(rng)) {
    case 0: return Term::variable(std::string(1, "XYZW"[rng() % 4]));
    case 1: return Term::constant(std::string(1, "abc"[rng() % 3]));
    case 2: return Term::integer(static_cast<std::int64_t>(rng() % 7) - 3);
    case 3: return Term::compound("f", {random_term(rng, depth - 1)});
    default: return Term::compound("g", {random_term(rng, depth - 1), random_term(rng, depth - 1)});
    }
}

Term random_expr(std::mt19937& rng, int depth) {
    if (depth == 0 || rng() % 3 == 0) {
        return rng() % 2 ? Term::variable(std::string(1, "XYZ"[rng() % 3]))
                         : Term::integer(static_cast<std::int64_t>(rng() % 9) - 4);
    }
    const char* ops[] = {"+", "-", "*"};
    return Term::compound(ops[rng() % 3], {random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
}

Program random_program(std::mt19937& rng) {
    // fixed arities so the generated program is well formed
    const std::vector<std::pair<std::string, int>> preds{{"p", 0}, {"q", 1}, {"r", 2}, {"s", 1}};
    auto atom = [&](std::size_t which) {
        Atom a{preds[which].first, {}};
        for (int i = 0; i < preds[which].second; ++i) a.args.push_back(random_term(rng, 2));
        return a;
    };
    Program p;
    int n = static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
        Atom head = atom(rng() % preds.size());
        std::vector<Literal> body;
        int m = static_cast<int>(rng() % 4);
        for (int j = 0; j < m; ++j) {
            switch (rng() % 5) {
            case 0: body.push_back(Literal::neg(atom(rng() % preds.size()))); break;
            case 1: body.push_back(Literal::pos(Atom{"is", {Term::variable("X"), random_expr(rng, 3)}})); break;
            case 2: body.push_back(Literal::pos(Atom{"<", {random_expr(rng, 2), random_expr(rng, 2)}})); break;
            default: body.push_back(Literal::pos(atom(rng() % preds.size()))); break;
            }
        }
        p.add(std::move(head), std::move(body));
    }
    return p;
}

}  // namespace

TEST_CASE("parse the first two clauses of the running example") {
    Program p = parse_program("p(X) :- q(X).\np(a).");
    REQUIRE(p.size() == 2);
    CHECK(render(p.clause(0)) == "p(X) :- q(X).");
    CHECK(render(p.clause(1)) == "p(a).");
    CHECK(p.clause(0).label == "p_1");
    CHECK(p.clause(1).label == "p_2");
    CHECK(p.clauses_for(PredicateKey{"p", 1}).size() == 2);
}

TEST_CASE("empty and comment-only programs") {
    CHECK(parse_program("").empty());
    CHECK(parse_program("% nothing here\n   \n").empty());
}

TEST_CASE("unclosed argument list is reported with a span") {
    try {
        parse_program("p(X :- q.");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.span().line == 1);
        CHECK(e.span().column == 5);
        CHECK(e.span().begin == 4);
        CHECK(e.span().end == 6);
        CHECK(e.message().find("unclosed argument list") != std::string::npos);
        CHECK(e.expected() == std::vector<std::string>{"','", "')'"});
    }
}

TEST_CASE("other malformed programs") {
    CHECK_THROWS_AS(parse_program("p(a)"), ParseError);
    CHECK_THROWS_AS(parse_program("p :- ."), ParseError);
    CHECK_THROWS_AS(parse_program("X :- p."), ParseError);
    CHECK_THROWS_AS(parse_program("p(a). p(a,b)."), ParseError);
    CHECK_THROWS_AS(parse_program("odd(1)."), ParseError);
    CHECK_THROWS_AS(parse_program("p :- \\+ X is 1."), ParseError);
    CHECK_THROWS_AS(parse_program("p :- q ; r."), ParseError);
    try {
        parse_program("p.\nq :- r,\n  s(.");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.span().line == 3);
        CHECK(e.span().column == 5);
    }
}

TEST_CASE("negation, builtins and comments") {
    Program p = parse_program(
        "% the arithmetic example\n"
        "p(X,N) :- loop(N), p(Y,N), odd(Y), X is Y+1, X < N.  % trailing\n"
        "q :- \\+ r, s.\n");
    REQUIRE(p.size() == 2);
    const auto& body = p.clause(0).body;
    REQUIRE(body.size() == 5);
    CHECK(body[3].atom.predicate == "is");
    CHECK(render(body[3]) == "X is Y+1");
    CHECK(render(body[4]) == "X<N");
    CHECK(body[2].atom.predicate == "odd");
    CHECK(p.clause(1).body[0].is_negative());
    CHECK(render(p.clause(1).body[0]) == "\\+ r");
    CHECK(p.has_builtins());
}

TEST_CASE("arithmetic precedence") {
    Program p = parse_program("t :- X is 1+2*3-4, Y is (1+2)*3, Z is 5-(2-1), W is 3- -2.");
    const auto& b = p.clause(0).body;
    CHECK(render(b[0]) == "X is 1+2*3-4");
    CHECK(render(b[1]) == "Y is (1+2)*3");
    CHECK(render(b[2]) == "Z is 5-(2-1)");
    CHECK(render(b[3]) == "W is 3- -2");
    CHECK(b[0].atom.args[1].symbol() == "-");
}

TEST_CASE("queries") {
    CHECK(parse_query("p(X)") == Atom{"p", {Term::variable("X")}});
    CHECK(parse_query("  p(a). ") == Atom{"p", {Term::constant("a")}});
    try {
        parse_query("\\+ p(X)");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.message() == "top goal must be a single atom");
    }
    try {
        parse_query("p(X), q(X)");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.message() == "top goal must be a single atom");
    }
    CHECK_THROWS_AS(parse_query("X is 1"), ParseError);
    CHECK_THROWS_AS(parse_query(""), ParseError);
}

TEST_CASE("render of special literals") {
    CHECK(render(Atom{"p", {Term::constant("a")}}) == "p(a)");
    CHECK(render(Literal::neg(Atom{"r", {}})) == "\\+ r");
    CHECK(render(Literal::ustar()) == "u*");
    CHECK(render(Term::variable("X", 3)) == "X_3");
}

TEST_CASE("round trip on generated programs") {
    std::mt19937 rng(2024);
    for (int i = 0; i < 400; ++i) {
        Program p = random_program(rng);
        std::string text = render(p);
        Program q = parse_program(text);
        REQUIRE(q.size() == p.size());
        CHECK(normalized(q) == normalized(p));
        // rendering is a fixpoint after one trip
        CHECK(render(q) == text);
    }
}
