#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace sltwfs {

// A variable is identified by its source name plus a rename index.  Index 0
// is reserved for variables as written in source text; renaming a clause
// apart stamps every variable with a fresh index from a RenameCounter.
struct Var {
    std::string name;
    unsigned index = 0;

    friend auto operator<=>(const Var&, const Var&) = default;
    friend bool operator==(const Var&, const Var&) = default;
};

class Term {
public:
    enum class Kind { variable, constant, integer, compound };

    static Term variable(std::string name, unsigned index = 0);
    static Term variable(const Var& v) { return variable(v.name, v.index); }
    static Term constant(std::string symbol);
    static Term integer(std::int64_t value);
    static Term compound(std::string functor, std::vector<Term> args);

    Kind kind() const;
    bool is_variable() const { return kind() == Kind::variable; }
    bool is_constant() const { return kind() == Kind::constant; }
    bool is_integer() const { return kind() == Kind::integer; }
    bool is_compound() const { return kind() == Kind::compound; }

    // Variable name, constant symbol or functor.
    const std::string& symbol() const;
    unsigned rename_index() const;
    Var as_var() const;
    std::int64_t value() const;
    const std::vector<Term>& args() const;

    bool is_ground() const;
    // Nesting depth: 0 for variables, constants and integers.
    std::size_t depth() const;

    friend std::strong_ordering operator<=>(const Term& a, const Term& b);
    friend bool operator==(const Term& a, const Term& b);

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    std::size_t arity() const { return args.size(); }
    bool is_ground() const;
    std::size_t depth() const;

    friend auto operator<=>(const Atom&, const Atom&) = default;
    friend bool operator==(const Atom&, const Atom&) = default;
};

struct Literal {
    enum class Kind { positive, negative, ustar };

    Kind kind = Kind::positive;
    Atom atom;  // empty for ustar

    static Literal pos(Atom a) { return {Kind::positive, std::move(a)}; }
    static Literal neg(Atom a) { return {Kind::negative, std::move(a)}; }
    static Literal ustar() { return {Kind::ustar, {}}; }

    bool is_positive() const { return kind == Kind::positive; }
    bool is_negative() const { return kind == Kind::negative; }
    bool is_ustar() const { return kind == Kind::ustar; }

    friend auto operator<=>(const Literal&, const Literal&) = default;
    friend bool operator==(const Literal&, const Literal&) = default;
};

enum class ClauseOrigin { program, tabled_answer };

struct Clause {
    Atom head;
    std::vector<Literal> body;
    std::size_t id = 0;
    ClauseOrigin origin = ClauseOrigin::program;
    // Human readable id used in tree dumps, e.g. "p_2" for the second clause of p.
    std::string label;

    bool is_fact() const { return body.empty(); }
};

// Collect variables in first-occurrence order, without duplicates.
void collect_vars(const Term& t, std::vector<Var>& out);
void collect_vars(const Atom& a, std::vector<Var>& out);
std::vector<Var> vars_of(const Atom& a);

bool occurs_in(const Var& v, const Term& t);

}  // namespace sltwfs
