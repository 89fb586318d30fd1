#include "sltwfs/oracle.hpp"

#include <algorithm>
#include <map>

#include "sltwfs/render.hpp"
#include "sltwfs/subst.hpp"

namespace sltwfs::wfs {

namespace {

void constants_in(const Term& t, std::set<Term>& out, std::set<std::pair<std::string, std::size_t>>& functors) {
    switch (t.kind()) {
    case Term::Kind::constant:
    case Term::Kind::integer:
        out.insert(t);
        break;
    case Term::Kind::compound:
        functors.emplace(t.symbol(), t.args().size());
        for (const auto& a : t.args()) constants_in(a, out, functors);
        break;
    case Term::Kind::variable:
        break;
    }
}

// Every argument tuple of length n over `universe`.
template <typename F>
void for_each_tuple(const std::vector<Term>& universe, std::size_t n, F&& f) {
    std::vector<std::size_t> pick(n, 0);
    std::vector<Term> tuple(n, universe.empty() ? Term::constant("c0") : universe[0]);
    if (universe.empty() && n > 0) return;
    while (true) {
        for (std::size_t i = 0; i < n; ++i) tuple[i] = universe[pick[i]];
        f(tuple);
        std::size_t i = 0;
        while (i < n && ++pick[i] == universe.size()) pick[i++] = 0;
        if (i == n) break;
    }
}

bool holds(const Literal& l, const PartialInterpretation& i) {
    return l.is_positive() ? i.positives.count(l.atom) > 0 : i.negatives.count(l.atom) > 0;
}

bool complement_holds(const Literal& l, const PartialInterpretation& i) {
    return l.is_positive() ? i.negatives.count(l.atom) > 0 : i.positives.count(l.atom) > 0;
}

// Least model of a positive ground program above `seed`.
std::set<Atom> positive_closure(const GroundProgram& g, std::set<Atom> seed) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& c : g.clauses) {
            if (seed.count(c.head)) continue;
            bool fire = std::all_of(c.body.begin(), c.body.end(),
                                    [&](const Literal& l) { return l.is_positive() && seed.count(l.atom); });
            if (fire) {
                seed.insert(c.head);
                changed = true;
            }
        }
    }
    return seed;
}

}  // namespace

bool PartialInterpretation::consistent() const {
    return std::none_of(positives.begin(), positives.end(), [&](const Atom& a) { return negatives.count(a) > 0; });
}

const char* to_string(Truth t) {
    switch (t) {
    case Truth::true_value: return "true";
    case Truth::false_value: return "false";
    case Truth::undefined: return "undefined";
    }
    return "?";
}

std::set<Term> herbrand_universe(const Program& p, std::size_t depth_cap) {
    std::set<Term> constants;
    std::set<std::pair<std::string, std::size_t>> functors;
    for (const auto& c : p.clauses()) {
        for (const auto& t : c.head.args) constants_in(t, constants, functors);
        for (const auto& l : c.body)
            if (!l.is_ustar())
                for (const auto& t : l.atom.args) constants_in(t, constants, functors);
    }
    if (!functors.empty() && depth_cap == 0)
        throw OracleError("program has function symbols; the oracle needs a nonzero depth cap and is then only approximate");
    if (constants.empty()) constants.insert(Term::constant("c0"));
    std::set<Term> universe = constants;
    for (std::size_t d = 1; d <= depth_cap && !functors.empty(); ++d) {
        std::vector<Term> level(universe.begin(), universe.end());
        std::set<Term> next = universe;
        for (const auto& [f, n] : functors)
            for_each_tuple(level, n, [&](const std::vector<Term>& args) { next.insert(Term::compound(f, args)); });
        universe = std::move(next);
    }
    return universe;
}

GroundProgram ground(const Program& p, const std::set<Term>& universe) {
    std::vector<Term> u(universe.begin(), universe.end());
    GroundProgram g;
    for (const auto& [pred, arity] : p.predicates())
        for_each_tuple(u, arity, [&](const std::vector<Term>& args) { g.base.insert(Atom{pred, args}); });
    for (const auto& c : p.clauses()) {
        std::vector<Var> vs;
        collect_vars(c.head, vs);
        for (const auto& l : c.body)
            if (!l.is_ustar()) collect_vars(l.atom, vs);
        for_each_tuple(u, vs.size(), [&](const std::vector<Term>& vals) {
            std::map<Var, Term> m;
            for (std::size_t k = 0; k < vs.size(); ++k) m.emplace(vs[k], vals[k]);
            auto s = Substitution::from_bindings(std::move(m));
            GroundClause gc{apply(s, c.head), {}};
            for (const auto& l : c.body) gc.body.push_back(apply(s, l));
            g.clauses.insert(std::move(gc));
        });
    }
    return g;
}

GroundProgram ground_program(std::vector<GroundClause> clauses) {
    GroundProgram g;
    for (auto& c : clauses) {
        g.base.insert(c.head);
        for (const auto& l : c.body) g.base.insert(l.atom);
        g.clauses.insert(std::move(c));
    }
    return g;
}

std::set<Atom> tp(const GroundProgram& g, const PartialInterpretation& i) {
    std::set<Atom> out;
    for (const auto& c : g.clauses)
        if (std::all_of(c.body.begin(), c.body.end(), [&](const Literal& l) { return holds(l, i); })) out.insert(c.head);
    return out;
}

PartialInterpretation mp(const GroundProgram& g, const PartialInterpretation& i) {
    PartialInterpretation cur = i;
    while (true) {
        std::size_t before = cur.positives.size();
        for (auto& a : tp(g, cur)) cur.positives.insert(a);
        if (cur.positives.size() == before) return cur;
    }
}

GroundProgram reduce(const GroundProgram& g, const PartialInterpretation& i) {
    GroundProgram out;
    out.base = g.base;
    for (const auto& c : g.clauses) {
        if (std::any_of(c.body.begin(), c.body.end(), [&](const Literal& l) { return complement_holds(l, i); })) continue;
        GroundClause kept{c.head, {}};
        for (const auto& l : c.body)
            if (l.is_positive()) kept.body.push_back(l);
        out.clauses.insert(std::move(kept));
    }
    return out;
}

std::set<Atom> np_op(const GroundProgram& g, const PartialInterpretation& i) {
    PartialInterpretation m = mp(g, i);
    std::set<Atom> reach = positive_closure(reduce(g, m), m.positives);
    std::set<Atom> out;
    for (const auto& a : g.base)
        if (!reach.count(a)) out.insert(a);
    return out;
}

std::set<Atom> op_op(const GroundProgram& g, const PartialInterpretation& i) {
    PartialInterpretation m = mp(g, i);
    std::set<Atom> reach = positive_closure(reduce(g, m), m.positives);
    std::set<Atom> out;
    for (const auto& a : reach)
        if (!m.positives.count(a)) out.insert(a);
    return out;
}

PartialInterpretation vp(const GroundProgram& g, const PartialInterpretation& i) {
    PartialInterpretation out = mp(g, i);
    for (auto& a : np_op(g, i)) out.negatives.insert(a);
    return out;
}

PartialInterpretation wf_iterate(const GroundProgram& g, std::vector<PartialInterpretation>* iterates) {
    PartialInterpretation cur;
    while (true) {
        PartialInterpretation next = vp(g, cur);
        if (iterates) iterates->push_back(next);
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

Model wf_model(const Program& p, std::size_t depth_cap) {
    if (p.has_builtins()) throw OracleError("the oracle does not evaluate builtins");
    GroundProgram g = ground(p, herbrand_universe(p, depth_cap));
    return Model{wf_iterate(g), g.base};
}

Truth truth(const Model& m, const Atom& a) {
    if (!m.base.count(a)) throw OracleError("atom outside the Herbrand base: " + render(a));
    if (m.interpretation.positives.count(a)) return Truth::true_value;
    if (m.interpretation.negatives.count(a)) return Truth::false_value;
    return Truth::undefined;
}

QueryResult query(const Program& p, const Atom& q, std::size_t depth_cap) {
    if (p.has_builtins()) throw OracleError("the oracle does not evaluate builtins");
    std::set<Term> universe = herbrand_universe(p, depth_cap);
    std::set<std::pair<std::string, std::size_t>> functors;
    std::set<Term> extra;
    for (const auto& t : q.args) constants_in(t, extra, functors);
    if (!functors.empty() && depth_cap == 0)
        throw OracleError("query has function symbols; the oracle needs a nonzero depth cap");
    if (!extra.empty()) {
        // drop the stand-in constant when the query brings real ones
        std::set<Term> own;
        for (const auto& c : p.clauses()) {
            for (const auto& t : c.head.args) constants_in(t, own, functors);
            for (const auto& l : c.body)
                if (!l.is_ustar())
                    for (const auto& t : l.atom.args) constants_in(t, own, functors);
        }
        if (own.empty()) universe.erase(Term::constant("c0"));
        universe.insert(extra.begin(), extra.end());
        for (const auto& t : q.args)
            if (t.is_ground() && t.depth() <= depth_cap) universe.insert(t);
    }
    GroundProgram g = ground(p, universe);
    PartialInterpretation m = wf_iterate(g);

    QueryResult out;
    std::map<std::string, Atom> found;
    bool all_false = true;
    for (const auto& a : g.base) {
        if (!is_instance_of(a, q)) continue;
        out.instances.push_back(a);
        if (m.positives.count(a))
            found.emplace(render(a), a);
        else if (!m.negatives.count(a))
            all_false = false;
    }
    for (auto& [text, a] : found) out.answers.push_back(a);
    if (!out.answers.empty())
        out.truth = Truth::true_value;
    else
        out.truth = all_false ? Truth::false_value : Truth::undefined;
    return out;
}

}  // namespace sltwfs::wfs
