#include "sltwfs/term.hpp"

#include <algorithm>
#include <stdexcept>

namespace sltwfs {

struct Term::Node {
    Kind kind;
    std::string symbol;
    unsigned index = 0;
    std::int64_t value = 0;
    std::vector<Term> args;
    bool ground = true;
    std::size_t depth = 0;
};

Term Term::variable(std::string name, unsigned index) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::variable;
    n->symbol = std::move(name);
    n->index = index;
    n->ground = false;
    return Term(std::move(n));
}

Term Term::constant(std::string symbol) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->symbol = std::move(symbol);
    return Term(std::move(n));
}

Term Term::integer(std::int64_t value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::integer;
    n->value = value;
    return Term(std::move(n));
}

Term Term::compound(std::string functor, std::vector<Term> args) {
    if (args.empty()) return constant(std::move(functor));
    auto n = std::make_shared<Node>();
    n->kind = Kind::compound;
    n->symbol = std::move(functor);
    std::size_t d = 0;
    for (const auto& a : args) {
        n->ground = n->ground && a.is_ground();
        d = std::max(d, a.depth());
    }
    n->depth = d + 1;
    n->args = std::move(args);
    return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::symbol() const { return node_->symbol; }
unsigned Term::rename_index() const { return node_->index; }
Var Term::as_var() const { return Var{node_->symbol, node_->index}; }
std::int64_t Term::value() const { return node_->value; }
const std::vector<Term>& Term::args() const { return node_->args; }
bool Term::is_ground() const { return node_->ground; }
std::size_t Term::depth() const { return node_->depth; }

std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    switch (a.kind()) {
    case Term::Kind::integer:
        return a.value() <=> b.value();
    case Term::Kind::variable:
        if (auto c = a.symbol() <=> b.symbol(); c != 0) return c;
        return a.rename_index() <=> b.rename_index();
    case Term::Kind::constant:
        return a.symbol() <=> b.symbol();
    case Term::Kind::compound:
        if (auto c = a.symbol() <=> b.symbol(); c != 0) return c;
        return a.args() <=> b.args();
    }
    return std::strong_ordering::equal;
}

bool operator==(const Term& a, const Term& b) { return (a <=> b) == 0; }

bool Atom::is_ground() const {
    return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

std::size_t Atom::depth() const {
    std::size_t d = 0;
    for (const auto& t : args) d = std::max(d, t.depth());
    return d;
}

void collect_vars(const Term& t, std::vector<Var>& out) {
    switch (t.kind()) {
    case Term::Kind::variable: {
        Var v = t.as_var();
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
        break;
    }
    case Term::Kind::compound:
        for (const auto& a : t.args()) collect_vars(a, out);
        break;
    default:
        break;
    }
}

void collect_vars(const Atom& a, std::vector<Var>& out) {
    for (const auto& t : a.args) collect_vars(t, out);
}

std::vector<Var> vars_of(const Atom& a) {
    std::vector<Var> out;
    collect_vars(a, out);
    return out;
}

bool occurs_in(const Var& v, const Term& t) {
    if (t.is_ground()) return false;
    if (t.is_variable()) return t.symbol() == v.name && t.rename_index() == v.index;
    if (t.is_compound()) {
        for (const auto& a : t.args())
            if (occurs_in(v, a)) return true;
    }
    return false;
}

}  // namespace sltwfs
