#include "sltwfs/program.hpp"

#include <algorithm>
#include <set>

namespace sltwfs {

namespace {

const std::vector<std::size_t> kNoClauses;

bool term_has_function(const Term& t) { return t.is_compound(); }

void symbols_of(const Term& t, std::set<std::string>& out) {
    if (t.is_constant() || t.is_compound()) out.insert(t.symbol());
    if (t.is_compound())
        for (const auto& a : t.args()) symbols_of(a, out);
}

void symbols_of(const Atom& a, std::set<std::string>& out) {
    out.insert(a.predicate);
    for (const auto& t : a.args) symbols_of(t, out);
}

}  // namespace

bool is_builtin(const Atom& a) {
    return (a.arity() == 2 && (a.predicate == "is" || a.predicate == "<")) ||
           (a.arity() == 1 && (a.predicate == "odd" || a.predicate == "even"));
}

void Program::add(Atom head, std::vector<Literal> body) {
    Clause c;
    c.id = clauses_.size();
    auto& slot = index_[key_of(head)];
    c.label = head.predicate + "_" + std::to_string(slot.size() + 1);
    c.head = std::move(head);
    c.body = std::move(body);
    slot.push_back(c.id);
    clauses_.push_back(std::move(c));
}

const std::vector<std::size_t>& Program::clauses_for(const PredicateKey& k) const {
    auto it = index_.find(k);
    return it == index_.end() ? kNoClauses : it->second;
}

std::vector<PredicateKey> Program::predicates() const {
    std::set<PredicateKey> seen;
    for (const auto& c : clauses_) {
        seen.insert(key_of(c.head));
        for (const auto& l : c.body)
            if (!l.is_ustar() && !is_builtin(l.atom)) seen.insert(key_of(l.atom));
    }
    return {seen.begin(), seen.end()};
}

bool Program::has_builtins() const {
    return std::any_of(clauses_.begin(), clauses_.end(), [](const Clause& c) {
        return std::any_of(c.body.begin(), c.body.end(),
                           [](const Literal& l) { return !l.is_ustar() && is_builtin(l.atom); });
    });
}

bool Program::has_function_symbols() const {
    auto atom_has = [](const Atom& a) { return std::any_of(a.args.begin(), a.args.end(), term_has_function); };
    return std::any_of(clauses_.begin(), clauses_.end(), [&](const Clause& c) {
        return atom_has(c.head) ||
               std::any_of(c.body.begin(), c.body.end(), [&](const Literal& l) { return !l.is_ustar() && atom_has(l.atom); });
    });
}

Program augment(const Program& p) {
    std::set<std::string> used;
    for (const auto& c : p.clauses()) {
        symbols_of(c.head, used);
        for (const auto& l : c.body)
            if (!l.is_ustar()) symbols_of(l.atom, used);
    }
    for (const char* reserved : {"aug_p", "aug_f", "aug_c"})
        if (used.count(reserved)) throw ProgramError(std::string("reserved symbol already in program: ") + reserved);
    Program out = p;
    out.add(Atom{"aug_p", {Term::compound("aug_f", {Term::constant("aug_c")})}}, {});
    return out;
}

}  // namespace sltwfs
