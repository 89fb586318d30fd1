#include "sltwfs/subst.hpp"

#include <utility>

#include "sltwfs/render.hpp"

namespace sltwfs {

namespace {

// Replace a single variable; used to push a fresh binding into old ranges.
Term replace_var(const Term& t, const Var& v, const Term& by) {
    if (t.is_ground()) return t;
    if (t.is_variable()) return (t.symbol() == v.name && t.rename_index() == v.index) ? by : t;
    if (!t.is_compound()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    bool changed = false;
    for (const auto& a : t.args()) {
        args.push_back(replace_var(a, v, by));
        changed = changed || !(args.back() == a);
    }
    return changed ? Term::compound(t.symbol(), std::move(args)) : t;
}

bool variant_term(const Term& x, const Term& y, std::map<Var, Var>& fwd, std::map<Var, Var>& back) {
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
    case Term::Kind::variable: {
        Var a = x.as_var(), b = y.as_var();
        auto f = fwd.find(a);
        auto r = back.find(b);
        if (f == fwd.end() && r == back.end()) {
            fwd.emplace(a, b);
            back.emplace(b, a);
            return true;
        }
        return f != fwd.end() && r != back.end() && f->second == b && r->second == a;
    }
    case Term::Kind::constant:
        return x.symbol() == y.symbol();
    case Term::Kind::integer:
        return x.value() == y.value();
    case Term::Kind::compound:
        if (x.symbol() != y.symbol() || x.args().size() != y.args().size()) return false;
        for (std::size_t i = 0; i < x.args().size(); ++i)
            if (!variant_term(x.args()[i], y.args()[i], fwd, back)) return false;
        return true;
    }
    return false;
}

bool match_term(const Term& pattern, const Term& t, std::map<Var, Term>& env) {
    if (pattern.is_variable()) {
        auto [it, fresh] = env.emplace(pattern.as_var(), t);
        return fresh || it->second == t;
    }
    if (pattern.kind() != t.kind()) return false;
    switch (pattern.kind()) {
    case Term::Kind::constant:
        return pattern.symbol() == t.symbol();
    case Term::Kind::integer:
        return pattern.value() == t.value();
    case Term::Kind::compound:
        if (pattern.symbol() != t.symbol() || pattern.args().size() != t.args().size()) return false;
        for (std::size_t i = 0; i < t.args().size(); ++i)
            if (!match_term(pattern.args()[i], t.args()[i], env)) return false;
        return true;
    default:
        return false;
    }
}

Term rename_term(const Term& t, unsigned index) {
    if (t.is_ground()) return t;
    if (t.is_variable()) return Term::variable(t.symbol(), index);
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(rename_term(a, index));
    return Term::compound(t.symbol(), std::move(args));
}

Atom rename_atom(const Atom& a, unsigned index) {
    Atom out{a.predicate, {}};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(rename_term(t, index));
    return out;
}

}  // namespace

void Substitution::bind(const Var& v, const Term& t) {
    Term value = apply(*this, t);
    for (auto& [_, range] : bindings_) range = replace_var(range, v, value);
    bindings_.insert_or_assign(v, std::move(value));
}

const Term* Substitution::lookup(const Var& v) const {
    auto it = bindings_.find(v);
    return it == bindings_.end() ? nullptr : &it->second;
}

bool Substitution::is_idempotent() const {
    for (const auto& [v, t] : bindings_) {
        for (const auto& [w, _] : bindings_)
            if (occurs_in(w, t)) return false;
        if (occurs_in(v, t)) return false;
    }
    return true;
}

Term apply(const Substitution& s, const Term& t) {
    if (s.empty() || t.is_ground()) return t;
    if (t.is_variable()) {
        const Term* b = s.lookup(t.as_var());
        return b ? *b : t;
    }
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(apply(s, a));
    return Term::compound(t.symbol(), std::move(args));
}

Atom apply(const Substitution& s, const Atom& a) {
    if (s.empty()) return a;
    Atom out{a.predicate, {}};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(apply(s, t));
    return out;
}

Literal apply(const Substitution& s, const Literal& l) {
    if (l.is_ustar()) return l;
    return Literal{l.kind, apply(s, l.atom)};
}

Substitution compose(const Substitution& s1, const Substitution& s2) {
    std::map<Var, Term> out;
    for (const auto& [v, t] : s1.bindings()) {
        Term image = apply(s2, t);
        if (image.is_variable() && image.as_var() == v) continue;
        out.emplace(v, std::move(image));
    }
    for (const auto& [v, t] : s2.bindings())
        if (!s1.lookup(v)) out.emplace(v, t);
    // The plain composition; idempotent whenever no range of the result
    // mentions a bound variable, which holds for mgus along a derivation.
    return Substitution::from_bindings(std::move(out));
}

bool unify_into(Substitution& s, const Term& a0, const Term& b0) {
    std::vector<std::pair<Term, Term>> work{{a0, b0}};
    while (!work.empty()) {
        auto [a, b] = std::move(work.back());
        work.pop_back();
        a = apply(s, a);
        b = apply(s, b);
        if (a == b) continue;
        if (a.is_variable() || b.is_variable()) {
            if (!a.is_variable()) std::swap(a, b);
            Var v = a.as_var();
            if (occurs_in(v, b)) return false;
            s.bind(v, b);
            continue;
        }
        if (a.kind() != b.kind()) return false;
        if (!a.is_compound()) return false;  // distinct constants or integers
        if (a.symbol() != b.symbol() || a.args().size() != b.args().size()) return false;
        for (std::size_t i = a.args().size(); i-- > 0;) work.emplace_back(a.args()[i], b.args()[i]);
    }
    return true;
}

std::optional<Substitution> mgu(const Term& a, const Term& b) {
    Substitution s;
    if (!unify_into(s, a, b)) return std::nullopt;
    return s;
}

std::optional<Substitution> mgu(const Atom& a, const Atom& b) {
    if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
    Substitution s;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!unify_into(s, a.args[i], b.args[i])) return std::nullopt;
    return s;
}

bool is_variant(const Atom& x, const Atom& y) {
    if (x.predicate != y.predicate || x.args.size() != y.args.size()) return false;
    std::map<Var, Var> fwd, back;
    for (std::size_t i = 0; i < x.args.size(); ++i)
        if (!variant_term(x.args[i], y.args[i], fwd, back)) return false;
    return true;
}

bool is_instance_of(const Atom& specific, const Atom& general) {
    if (specific.predicate != general.predicate || specific.args.size() != general.args.size()) return false;
    // One-way matching: variables of `specific` behave as constants.
    std::map<Var, Term> env;
    for (std::size_t i = 0; i < general.args.size(); ++i)
        if (!match_term(general.args[i], specific.args[i], env)) return false;
    return true;
}

Atom canonical(const Atom& a) {
    std::vector<Var> vs = vars_of(a);
    if (vs.empty()) return a;
    std::map<Var, Term> renaming;
    for (std::size_t i = 0; i < vs.size(); ++i) renaming.emplace(vs[i], Term::variable("_" + std::to_string(i)));
    // Direct simultaneous replacement; bind() would chain renamings.
    auto rec = [&](auto&& self, const Term& t) -> Term {
        if (t.is_ground()) return t;
        if (t.is_variable()) return renaming.at(t.as_var());
        std::vector<Term> args;
        for (const auto& x : t.args()) args.push_back(self(self, x));
        return Term::compound(t.symbol(), std::move(args));
    };
    Atom out{a.predicate, {}};
    for (const auto& t : a.args) out.args.push_back(rec(rec, t));
    return out;
}

std::string canonical_key(const Atom& a) { return render(canonical(a)); }

Clause rename_apart(const Clause& c, unsigned index) {
    Clause out = c;
    out.head = rename_atom(c.head, index);
    for (auto& l : out.body)
        if (!l.is_ustar()) l.atom = rename_atom(l.atom, index);
    return out;
}

}  // namespace sltwfs
