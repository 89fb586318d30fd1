#include "sltwfs/render.hpp"

#include "sltwfs/program.hpp"

namespace sltwfs {

namespace {

int precedence(const Term& t) {
    if (!t.is_compound() || t.args().size() != 2) return 3;
    if (t.symbol() == "+" || t.symbol() == "-") return 1;
    if (t.symbol() == "*") return 2;
    return 3;
}

void render_into(const Term& t, std::string& out) {
    switch (t.kind()) {
    case Term::Kind::variable:
        out += t.symbol();
        if (t.rename_index() != 0) {
            out += '_';
            out += std::to_string(t.rename_index());
        }
        return;
    case Term::Kind::constant:
        out += t.symbol();
        return;
    case Term::Kind::integer:
        out += std::to_string(t.value());
        return;
    case Term::Kind::compound:
        break;
    }
    int p = precedence(t);
    if (p < 3) {
        const Term& l = t.args()[0];
        const Term& r = t.args()[1];
        bool paren_l = precedence(l) < p;
        bool paren_r = precedence(r) <= p;
        if (paren_l) out += '(';
        render_into(l, out);
        if (paren_l) out += ')';
        out += t.symbol();
        // "X- -1" must not fuse into a single token sequence like "X--1".
        if (!paren_r && r.is_integer() && r.value() < 0) out += ' ';
        if (paren_r) out += '(';
        render_into(r, out);
        if (paren_r) out += ')';
        return;
    }
    out += t.symbol();
    out += '(';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ',';
        render_into(t.args()[i], out);
    }
    out += ')';
}

}  // namespace

std::string render(const Term& t) {
    std::string out;
    render_into(t, out);
    return out;
}

std::string render(const Atom& a) {
    if (a.predicate == "is" && a.args.size() == 2) return render(a.args[0]) + " is " + render(a.args[1]);
    if (a.predicate == "<" && a.args.size() == 2) return render(a.args[0]) + "<" + render(a.args[1]);
    std::string out = a.predicate;
    if (a.args.empty()) return out;
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ',';
        render_into(a.args[i], out);
    }
    out += ')';
    return out;
}

std::string render(const Literal& l) {
    switch (l.kind) {
    case Literal::Kind::positive:
        return render(l.atom);
    case Literal::Kind::negative:
        return "\\+ " + render(l.atom);
    case Literal::Kind::ustar:
        return "u*";
    }
    return {};
}

std::string render(const std::vector<Literal>& conjunction) {
    std::string out;
    for (std::size_t i = 0; i < conjunction.size(); ++i) {
        if (i) out += ", ";
        out += render(conjunction[i]);
    }
    return out;
}

std::string render(const Clause& c) {
    std::string out = render(c.head);
    if (!c.body.empty()) out += " :- " + render(c.body);
    return out + ".";
}

std::string render(const Program& p) {
    std::string out;
    for (const auto& c : p.clauses()) {
        out += render(c);
        out += '\n';
    }
    return out;
}

}  // namespace sltwfs
