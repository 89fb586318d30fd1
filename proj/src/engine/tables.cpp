#include "sltwfs/engine.hpp"

namespace sltwfs {

bool AnswerTable::insert(const Atom& a) {
    if (!keys_.insert(canonical_key(a)).second) return false;
    by_pred_[key_of(a)].push_back(atoms_.size());
    atoms_.push_back(canonical(a));
    return true;
}

const std::vector<std::size_t>& AnswerTable::for_predicate(const PredicateKey& k) const {
    static const std::vector<std::size_t> none;
    auto it = by_pred_.find(k);
    return it == by_pred_.end() ? none : it->second;
}

std::vector<std::pair<std::string, std::uint64_t>> Stats::counters() const {
    std::uint64_t widest = 0;
    for (const auto& t : trees) widest = std::max<std::uint64_t>(widest, t.distinct_subgoals);
    return {
        {"slt_calls", slt_calls},
        {"sltp_calls", sltp_calls},
        {"generalized_trees_built", generalized_trees_built},
        {"nodes_built", nodes_built},
        {"clause_applications", clause_applications},
        {"tabled_answer_applications", tabled_answer_applications},
        {"subgoal_comparisons", subgoal_comparisons},
        {"unfounded_checks", unfounded_checks},
        {"unfounded_nodes", unfounded_nodes},
        {"max_distinct_subgoals", widest},
    };
}

const char* to_string(VerdictKind k) {
    switch (k) {
    case VerdictKind::true_value: return "true";
    case VerdictKind::false_value: return "false";
    case VerdictKind::undefined: return "undefined";
    }
    return "?";
}

const Subgoal* SltNode::selected() const {
    if (goal.items().empty()) return nullptr;
    return std::get_if<Subgoal>(&goal.items().front());
}

std::set<std::size_t> looping_clauses(const Atom& a, const AncestorList& al) {
    std::set<std::size_t> out;
    const std::string key = canonical_key(a);
    al.for_each([&](const AncestorEntry& e) {
        if (e.variant == key) out.insert(e.clause);
    });
    return out;
}

bool loop_independent(const GeneralizedTree& gt, NodeId node) { return !gt.node(node).loop_dependent; }

Opt1Decision opt1_negation_check(const GeneralizedTree& gt, std::size_t child_tree) {
    const SltTree& t = gt.trees.at(child_tree);
    if (t.success_leaves > 0) return Opt1Decision::child_succeeded;
    if (t.all_failed() && loop_independent(gt, t.root)) return Opt1Decision::treat_negation_true;
    return Opt1Decision::keep_undefined;
}

Opt2Gate opt2_completion_gate(const Atom& a, const Flags& flags) {
    return flags.comp.count(canonical_key(a)) ? Opt2Gate::answers_only : Opt2Gate::clauses_allowed;
}

std::optional<std::size_t> opt3_select_clause(const Atom& a, const std::vector<std::size_t>& clauses,
                                               std::size_t& cursor, const std::set<std::size_t>& looping,
                                               const Flags& flags) {
    const std::string key = canonical_key(a);
    while (cursor < clauses.size()) {
        std::size_t id = clauses[cursor++];
        if (looping.count(id) || flags.comp_used.count({key, id})) continue;
        return id;
    }
    return std::nullopt;
}

}  // namespace sltwfs
