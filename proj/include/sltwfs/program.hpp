#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sltwfs/term.hpp"

namespace sltwfs {

using PredicateKey = std::pair<std::string, std::size_t>;  // name, arity

inline PredicateKey key_of(const Atom& a) { return {a.predicate, a.arity()}; }

class ProgramError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool is_builtin(const Atom& a);

// Clauses in textual order.  add() assigns the clause id (its position)
// and a per-predicate label such as "p_1".
class Program {
public:
    void add(Atom head, std::vector<Literal> body);

    const std::vector<Clause>& clauses() const { return clauses_; }
    const Clause& clause(std::size_t id) const { return clauses_.at(id); }
    std::size_t size() const { return clauses_.size(); }
    bool empty() const { return clauses_.empty(); }

    const std::vector<std::size_t>& clauses_for(const PredicateKey& k) const;
    const std::vector<std::size_t>& clauses_for(const Atom& a) const { return clauses_for(key_of(a)); }

    // Every predicate mentioned in a head or body, with its arity.
    std::vector<PredicateKey> predicates() const;
    bool has_builtins() const;
    bool has_function_symbols() const;

private:
    std::vector<Clause> clauses_;
    std::map<PredicateKey, std::vector<std::size_t>> index_;
};

// P plus the unit clause aug_p(aug_f(aug_c)).  Throws ProgramError when any
// of the three reserved symbols already occurs in p.
Program augment(const Program& p);

}  // namespace sltwfs
