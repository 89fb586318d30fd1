#include <string>

#include "sltwfs/engine.hpp"
#include "sltwfs/render.hpp"

namespace sltwfs {

namespace {

std::int64_t evaluate(const Term& t) {
    switch (t.kind()) {
    case Term::Kind::integer: return t.value();
    case Term::Kind::variable: throw BuiltinError("unbound variable " + render(t));
    case Term::Kind::constant: throw BuiltinError("not a number: " + render(t));
    case Term::Kind::compound: break;
    }
    const auto& args = t.args();
    const std::string& f = t.symbol();
    std::int64_t out = 0;
    if (args.size() == 1 && f == "-") {
        if (__builtin_sub_overflow(std::int64_t{0}, evaluate(args[0]), &out)) throw BuiltinError("integer overflow");
        return out;
    }
    if (args.size() != 2) throw BuiltinError("not an arithmetic expression: " + render(t));
    std::int64_t a = evaluate(args[0]), b = evaluate(args[1]);
    bool overflow = false;
    if (f == "+")
        overflow = __builtin_add_overflow(a, b, &out);
    else if (f == "-")
        overflow = __builtin_sub_overflow(a, b, &out);
    else if (f == "*")
        overflow = __builtin_mul_overflow(a, b, &out);
    else
        throw BuiltinError("not an arithmetic expression: " + render(t));
    if (overflow) throw BuiltinError("integer overflow in " + render(t));
    return out;
}

}  // namespace

std::optional<Substitution> eval_builtin(const Atom& call) {
    const auto& a = call.args;
    if (call.predicate == "is" && a.size() == 2) {
        std::int64_t v = evaluate(a[1]);
        if (a[0].is_variable()) {
            Substitution s;
            s.bind(a[0].as_var(), Term::integer(v));
            return s;
        }
        if (a[0].is_integer()) return a[0].value() == v ? std::optional<Substitution>(Substitution{}) : std::nullopt;
        throw BuiltinError("left side of is must be a variable or an integer: " + render(call));
    }
    if (call.predicate == "<" && a.size() == 2)
        return evaluate(a[0]) < evaluate(a[1]) ? std::optional<Substitution>(Substitution{}) : std::nullopt;
    if ((call.predicate == "odd" || call.predicate == "even") && a.size() == 1) {
        bool odd = (evaluate(a[0]) % 2) != 0;
        return odd == (call.predicate == "odd") ? std::optional<Substitution>(Substitution{}) : std::nullopt;
    }
    throw BuiltinError("unknown builtin " + render(call));
}

}  // namespace sltwfs
