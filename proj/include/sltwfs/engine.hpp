#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sltwfs/goal.hpp"
#include "sltwfs/program.hpp"
#include "sltwfs/subst.hpp"
#include "sltwfs/term.hpp"

namespace sltwfs {

class EngineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FlounderError : public EngineError {
public:
    FlounderError() : EngineError("floundering query") {}
};

class GuardError : public EngineError {
public:
    explicit GuardError(const std::string& detail) : EngineError("bounded-term-size guard tripped: " + detail) {}
};

class BuiltinError : public EngineError {
public:
    explicit BuiltinError(const std::string& detail) : EngineError("builtin instantiation error: " + detail) {}
};

// ---------------------------------------------------------------- builtins

// is/2, </2, odd/1, even/1 over 64-bit integers with +, - and *.
// nullopt means the builtin fails; a non-ground or non-integer argument
// where a value is needed throws BuiltinError.
std::optional<Substitution> eval_builtin(const Atom& call);

// ------------------------------------------------------------------ tables

// Tabled positive answers, deduplicated up to variants, in insertion order.
class AnswerTable {
public:
    // Stores the canonical form; returns false when a variant is present.
    bool insert(const Atom& a);
    bool contains(const Atom& a) const { return keys_.count(canonical_key(a)) > 0; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    // Indices into atoms(), in insertion order.
    const std::vector<std::size_t>& for_predicate(const PredicateKey& k) const;
    std::size_t size() const { return atoms_.size(); }

private:
    std::vector<Atom> atoms_;
    std::set<std::string> keys_;
    std::map<PredicateKey, std::vector<std::size_t>> by_pred_;
};

struct Tables {
    AnswerTable positive;    // TB_t
    std::set<Atom> negative;  // TB_f, ground atoms
};

// ------------------------------------------------------------------- flags

// comp lives for a whole evaluation; comp_used and loop_depend describe one
// generalized tree and are cleared before each build.
struct Flags {
    std::set<std::string> comp;
    std::set<std::pair<std::string, std::size_t>> comp_used;
    std::set<std::string> loop_depend;
};

struct TreeStats {
    std::uint64_t nodes = 0;
    std::uint64_t clause_applications = 0;
    std::uint64_t answer_applications = 0;
    std::size_t distinct_subgoals = 0;
    // (canonical subgoal, clause id) -> program clause applications
    std::map<std::pair<std::string, std::size_t>, std::uint64_t> clause_uses;
    // canonical subgoal -> tabled answers that are instances of it, at the end of the build
    std::map<std::string, std::uint64_t> answers_for;
};

struct Stats {
    std::uint64_t slt_calls = 0;
    std::uint64_t sltp_calls = 0;
    std::uint64_t generalized_trees_built = 0;
    std::uint64_t nodes_built = 0;
    std::uint64_t clause_applications = 0;
    std::uint64_t tabled_answer_applications = 0;
    std::uint64_t subgoal_comparisons = 0;
    std::uint64_t unfounded_checks = 0;  // optimistic builds behind negative answers
    std::uint64_t unfounded_nodes = 0;
    std::vector<TreeStats> trees;

    // Flat name -> value view used for the JSON dump.
    std::vector<std::pair<std::string, std::uint64_t>> counters() const;
};

// ----------------------------------------------------------------- options

struct Guard {
    std::size_t max_term_depth = 32;
    std::size_t max_nodes = 1'000'000;
    // nested expansions (branch length plus child-tree nesting)
    std::size_t max_branch = 100'000;
};

struct EngineOptions {
    bool opt1 = false;  // loop-independent all-failed child tree proves the negation
    bool opt2 = false;  // completed subgoals only consume tabled answers
    bool opt3 = false;  // depth-first builder with comp_used / loop_depend
    // A ground query is settled as soon as its top tree has a success leaf.
    bool stop_on_ground_success = true;
    Guard guard;

    static EngineOptions plain() { return {}; }
    static EngineOptions optimized() {
        EngineOptions o;
        o.opt1 = o.opt2 = o.opt3 = true;
        return o;
    }
};

// ------------------------------------------------------------------- trees

enum class LeafMark { none, success, failure, undefined, flounder };
enum class EdgeKind { root, clause, answer, builtin, negation };

// How a selected ground negative literal was discharged.
enum class NegationStep { none, in_table, proved_by_opt1, made_undefined };

// Per selected positive subgoal: how its sub-derivations ended.
struct SubderivationSummary {
    std::uint32_t success = 0;
    std::uint32_t failure = 0;
    std::uint32_t undefined = 0;
    std::uint32_t flounder = 0;
    // canonical keys of positive subgoals selected at failure leaves
    std::set<std::string> depends_on;
};

struct SltNode {
    NodeId id = 0;
    std::size_t tree = 0;
    Goal goal;
    std::optional<NodeId> parent;
    EdgeKind edge = EdgeKind::root;
    std::size_t clause = 0;       // valid for EdgeKind::clause
    std::optional<Atom> answer;   // valid for EdgeKind::answer
    bool answer_undefined = false;  // `answer` came from the undefined-answer table
    Substitution mgu;
    LeafMark leaf = LeafMark::none;
    bool loop_node = false;
    bool loop_dependent = false;
    std::vector<NodeId> children;
    std::optional<std::size_t> child_tree;  // dotted edge
    // Not expanded: the subtree below is the one under this earlier node.
    std::optional<NodeId> same_as;
    NegationStep negation = NegationStep::none;
    std::vector<AnswerMark> completed;   // marks that reached the front here
    std::set<std::string> produced;      // answer keys this node's subgoal produced
    SubderivationSummary outcome;        // for positive selected subgoals

    // Selected subgoal (first literal), if any.
    const Subgoal* selected() const;
};

struct SltTree {
    std::size_t id = 0;
    NodeId root = 0;
    std::optional<NodeId> spawned_by;
    Atom root_atom;
    std::uint32_t success_leaves = 0;
    std::uint32_t failure_leaves = 0;
    std::uint32_t undefined_leaves = 0;
    std::uint32_t flounder_leaves = 0;

    bool all_failed() const { return success_leaves == 0 && undefined_leaves == 0 && flounder_leaves == 0; }
};

struct GeneralizedTree {
    std::vector<SltNode> nodes;
    std::vector<SltTree> trees;  // trees[0] is the top tree
    std::vector<Atom> answers;      // every distinct answer found in this build
    std::vector<Atom> new_answers;  // answers that were not tabled before this build
    std::vector<Atom> query_answers;  // answers to the top query itself, canonical

    const SltTree& top() const { return trees.front(); }
    const SltNode& node(NodeId id) const { return nodes.at(id); }
};

// ------------------------------------------------------- evaluation state

struct Evaluation {
    Tables tables;
    Flags flags;
    Stats stats;
    RenameCounter counter;
};

// Clauses used by ancestor variants of `a` (the looping clauses of a).
std::set<std::size_t> looping_clauses(const Atom& a, const AncestorList& al);

// One generalized tree for the query under the current tables.  With opt3
// the depth-first builder is used and new answers go into the table as
// soon as they appear; otherwise the table is read-only during the build.
GeneralizedTree build_generalized_tree(const Program& p, const Atom& query, Evaluation& ev, const EngineOptions& opt);
GeneralizedTree build_optimized(const Program& p, const Atom& query, Evaluation& ev, const EngineOptions& opt);

std::vector<Atom> positive_answers(const GeneralizedTree& gt);
// Ground atoms whose falsity decides something in `gt`: the query and the
// roots of child trees, minus what is already in TB_f.
std::vector<Atom> negative_candidates(const GeneralizedTree& gt, const std::set<Atom>& tb_f);
// The candidates that are unfounded with respect to the current tables.
std::set<Atom> negative_answers(const Program& p, const std::vector<Atom>& candidates, const Tables& tables,
                                const EngineOptions& opt, Stats& stats);
// Whether some instance of `query` has a derivation when negation is read
// that optimistically.  No such instance means every instance is false.
bool optimistically_derivable(const Program& p, const Atom& query, const Tables& tables, const EngineOptions& opt,
                              Stats& stats);

struct SltpResult {
    GeneralizedTree tree;
    bool settled = false;  // ground query proved; no further iteration needed
};

SltpResult sltp(const Program& p, const Atom& query, Evaluation& ev, const EngineOptions& opt);

enum class VerdictKind { true_value, false_value, undefined };
const char* to_string(VerdictKind k);

struct Verdict {
    VerdictKind kind = VerdictKind::undefined;
    std::vector<Atom> answers;  // canonical, deduplicated, sorted by rendered text
    Tables tables;
    std::shared_ptr<const GeneralizedTree> tree;  // final generalized tree
    Stats stats;
};

Verdict slt(const Program& p, const Atom& query, const EngineOptions& opt = EngineOptions::optimized());

// ------------------------------------------------------------ optimizations

bool loop_independent(const GeneralizedTree& gt, NodeId node);

enum class Opt1Decision { treat_negation_true, keep_undefined, child_succeeded };
Opt1Decision opt1_negation_check(const GeneralizedTree& gt, std::size_t child_tree);

enum class Opt2Gate { answers_only, clauses_allowed };
Opt2Gate opt2_completion_gate(const Atom& a, const Flags& flags);

// Next clause id at or after `cursor` (advanced past it) that is neither a
// looping clause of `a` nor marked comp_used for a's variant class.
std::optional<std::size_t> opt3_select_clause(const Atom& a, const std::vector<std::size_t>& clauses,
                                               std::size_t& cursor, const std::set<std::size_t>& looping,
                                               const Flags& flags);

// --------------------------------------------------------------- rendering

std::string render(const Goal& g);
// DOT digraph of the whole forest; byte-stable for a fixed program and query.
std::string to_dot(const GeneralizedTree& gt, const Program& p);

}  // namespace sltwfs
