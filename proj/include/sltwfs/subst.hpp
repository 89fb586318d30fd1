#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sltwfs/term.hpp"

namespace sltwfs {

// Finite idempotent binding map.  bind() keeps the map idempotent by
// resolving the new binding against the existing ones and propagating it
// into existing ranges, so no bound variable ever occurs in a range.
class Substitution {
public:
    Substitution() = default;

    // Precondition: v is not bound yet and does not occur in apply(t).
    void bind(const Var& v, const Term& t);

    const Term* lookup(const Var& v) const;
    bool empty() const { return bindings_.empty(); }
    std::size_t size() const { return bindings_.size(); }
    const std::map<Var, Term>& bindings() const { return bindings_; }

    bool is_idempotent() const;

    // No normalization; apply() substitutes simultaneously either way.
    static Substitution from_bindings(std::map<Var, Term> b) {
        Substitution s;
        s.bindings_ = std::move(b);
        return s;
    }

    friend bool operator==(const Substitution&, const Substitution&) = default;

private:
    std::map<Var, Term> bindings_;
};

Term apply(const Substitution& s, const Term& t);
Atom apply(const Substitution& s, const Atom& a);
Literal apply(const Substitution& s, const Literal& l);

// Standard composition: apply(compose(s1, s2), x) == apply(s2, apply(s1, x)).
Substitution compose(const Substitution& s1, const Substitution& s2);

// Most general unifier with occurs-check.
std::optional<Substitution> mgu(const Term& a, const Term& b);
std::optional<Substitution> mgu(const Atom& a, const Atom& b);
// Extends `s` in place; returns false (leaving s unspecified) on clash.
bool unify_into(Substitution& s, const Term& a, const Term& b);

bool is_variant(const Atom& x, const Atom& y);
// True iff some substitution maps `general` onto `specific`.
bool is_instance_of(const Atom& specific, const Atom& general);

// Variables renamed to _0, _1, ... in order of first occurrence.  Two atoms
// are variants exactly when their canonical forms are equal.
Atom canonical(const Atom& a);
std::string canonical_key(const Atom& a);

// Monotone source of rename indices, one per clause use.
struct RenameCounter {
    unsigned next = 1;
    unsigned take() { return next++; }
};

Clause rename_apart(const Clause& c, unsigned index);

}  // namespace sltwfs
