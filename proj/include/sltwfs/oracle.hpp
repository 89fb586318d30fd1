#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

#include "sltwfs/program.hpp"
#include "sltwfs/term.hpp"

// Bottom-up well-founded model of a program with a finite Herbrand
// instantiation.  Used as the reference the tabled engine is checked against.
namespace sltwfs::wfs {

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PartialInterpretation {
    std::set<Atom> positives;
    std::set<Atom> negatives;

    bool consistent() const;
    friend bool operator==(const PartialInterpretation&, const PartialInterpretation&) = default;
};

struct GroundClause {
    Atom head;
    std::vector<Literal> body;

    friend auto operator<=>(const GroundClause&, const GroundClause&) = default;
    friend bool operator==(const GroundClause&, const GroundClause&) = default;
};

struct GroundProgram {
    std::set<GroundClause> clauses;
    std::set<Atom> base;
};

enum class Truth { true_value, false_value, undefined };
const char* to_string(Truth t);

struct Model {
    PartialInterpretation interpretation;
    std::set<Atom> base;
};

// All ground terms up to nesting depth `depth_cap`.  Adds the reserved
// constant c0 when the program has no constant at all.  Throws when the
// program uses function symbols and depth_cap is 0.
std::set<Term> herbrand_universe(const Program& p, std::size_t depth_cap = 0);

// Every instance of every clause over `universe`.  The base holds every
// atom of every program predicate over the universe.
GroundProgram ground(const Program& p, const std::set<Term>& universe);

// Single-clause ground programs are handy in tests; no universe needed.
GroundProgram ground_program(std::vector<GroundClause> clauses);

std::set<Atom> tp(const GroundProgram& g, const PartialInterpretation& i);
PartialInterpretation mp(const GroundProgram& g, const PartialInterpretation& i);
GroundProgram reduce(const GroundProgram& g, const PartialInterpretation& i);
std::set<Atom> np_op(const GroundProgram& g, const PartialInterpretation& i);
std::set<Atom> op_op(const GroundProgram& g, const PartialInterpretation& i);
PartialInterpretation vp(const GroundProgram& g, const PartialInterpretation& i);

// Iterates from the empty interpretation; `iterates` (optional) receives
// I_1, I_2, ... up to and including the fixpoint.
PartialInterpretation wf_iterate(const GroundProgram& g, std::vector<PartialInterpretation>* iterates = nullptr);
Model wf_model(const Program& p, std::size_t depth_cap = 0);

// Throws OracleError when `a` is outside the model's Herbrand base.
Truth truth(const Model& m, const Atom& a);

// A query against the model.  Constants of the query join the universe;
// an open query is true when some instance is, false when all are.
struct QueryResult {
    Truth truth = Truth::undefined;
    std::vector<Atom> answers;    // true ground instances, sorted by rendered text
    std::vector<Atom> instances;  // every ground instance over the universe
};
QueryResult query(const Program& p, const Atom& q, std::size_t depth_cap = 0);

}  // namespace sltwfs::wfs
