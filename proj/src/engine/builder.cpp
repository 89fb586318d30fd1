#include <algorithm>
#include <string>
#include <tuple>

#include "sltwfs/engine.hpp"
#include "sltwfs/render.hpp"

namespace sltwfs {

namespace {

class Builder {
public:
    // With `blocking`, negation is read optimistically: \+ B holds unless B
    // is in that table, and no child trees are built.
    Builder(const Program& p, Evaluation& ev, const EngineOptions& opt, bool depth_first,
            const AnswerTable* blocking = nullptr)
        : prog_(p), ev_(ev), opt_(opt), dfs_(depth_first), blocking_(blocking) {}

    GeneralizedTree run(const Atom& query) {
        ev_.flags.comp_used.clear();
        ev_.flags.loop_depend.clear();
        ++ev_.stats.generalized_trees_built;
        new_tree(query, {}, std::nullopt);
        if (!dfs_ && opt_.opt2) mark_completed_after_build();
        finish_stats();
        return std::move(gt_);
    }

private:
    const Program& prog_;
    Evaluation& ev_;
    const EngineOptions& opt_;
    const bool dfs_;
    const AnswerTable* blocking_;
    GeneralizedTree gt_;
    TreeStats ts_;
    std::set<std::string> answer_keys_;
    std::map<std::string, Atom> subgoals_;
    // Instances proved only through a temporarily undefined negation, per
    // (subgoal variant, clause).  A variant that skips a completely used
    // clause picks these up so the undefined outcome is not lost.
    std::map<std::pair<std::string, std::size_t>, std::vector<Atom>> undefined_answers_;
    std::set<std::pair<std::pair<std::string, std::size_t>, std::string>> undefined_seen_;
    std::set<NodeId> cut_past_;
    std::set<std::string> query_answer_keys_;
    // Unoptimized builder only: leaf counts of expanded goals, reused for
    // later goals that are equal up to renaming and whose ancestors answer
    // every loop check the same way.
    struct LoopCheck {
        std::size_t literal;  // index among the goal's subgoals
        std::string variant;
        std::set<std::size_t> clauses;  // looping clauses from outside the subtree
        friend bool operator<(const LoopCheck& x, const LoopCheck& y) {
            return std::tie(x.literal, x.variant, x.clauses) < std::tie(y.literal, y.variant, y.clauses);
        }
    };
    struct Shared {
        NodeId node;
        std::set<LoopCheck> checks;
        std::uint32_t success, failure, undefined, flounder;
    };
    std::map<std::string, std::vector<Shared>> shared_;
    std::vector<std::pair<AncestorList, std::string>> check_log_;
    std::set<std::pair<std::string, std::size_t>> cut_short_uses_;
    std::size_t nesting_ = 0;

    SltNode& node(NodeId id) { return gt_.nodes[id]; }

    std::size_t new_tree(const Atom& a, const AncestorList& al, std::optional<NodeId> spawned_by) {
        SltTree t;
        t.id = gt_.trees.size();
        t.root_atom = a;
        t.spawned_by = spawned_by;
        gt_.trees.push_back(t);
        NodeId root = add_node(t.id, std::nullopt, Goal({Subgoal{Literal::pos(a), al}}), EdgeKind::root);
        gt_.trees[t.id].root = root;
        expand(root);
        return t.id;
    }

    NodeId add_node(std::size_t tree, std::optional<NodeId> parent, Goal goal, EdgeKind edge) {
        if (gt_.nodes.size() >= opt_.guard.max_nodes)
            throw GuardError("more than " + std::to_string(opt_.guard.max_nodes) + " nodes");
        SltNode x;
        x.id = gt_.nodes.size();
        x.tree = tree;
        x.parent = parent;
        x.edge = edge;
        auto& items = goal.items();
        auto first_subgoal = std::find_if(items.begin(), items.end(),
                                          [](const GoalItem& it) { return std::holds_alternative<Subgoal>(it); });
        for (auto it = items.begin(); it != first_subgoal; ++it) x.completed.push_back(std::get<AnswerMark>(*it));
        items.erase(items.begin(), first_subgoal);
        for (const auto& it : items)
            if (auto* sg = std::get_if<Subgoal>(&it); sg && sg->literal.atom.depth() > opt_.guard.max_term_depth)
                throw GuardError("term deeper than " + std::to_string(opt_.guard.max_term_depth) + " in " +
                                 render(sg->literal));
        x.goal = std::move(goal);

        NodeId id = x.id;
        gt_.nodes.push_back(std::move(x));
        if (parent) node(*parent).children.push_back(id);
        ++ev_.stats.nodes_built;
        ++ts_.nodes;

        for (const auto& m : std::vector<AnswerMark>(node(id).completed)) {
            if (m.tainted) {
                ++node(m.owner).outcome.undefined;
                if (dfs_ && m.via) record_undefined(m);
            } else {
                ++node(m.owner).outcome.success;
                record_answer(m.owner, m.atom);
                if (m.owner == 0 && query_answer_keys_.insert(canonical_key(m.atom)).second)
                    gt_.query_answers.push_back(canonical(m.atom));
            }
        }
        const Goal& g = node(id).goal;
        if (g.items().empty())
            settle(id, LeafMark::success);
        else if (std::get<Subgoal>(g.items().front()).literal.is_ustar())
            settle(id, LeafMark::undefined);
        return id;
    }

    void record_answer(NodeId owner, const Atom& a) {
        if (a.depth() > opt_.guard.max_term_depth) throw GuardError("answer too deep: " + render(a));
        std::string key = canonical_key(a);
        node(owner).produced.insert(key);
        if (!answer_keys_.insert(key).second) return;
        gt_.answers.push_back(canonical(a));
        bool fresh = dfs_ ? ev_.tables.positive.insert(a) : !ev_.tables.positive.contains(a);
        if (fresh) gt_.new_answers.push_back(canonical(a));
    }

    void record_undefined(const AnswerMark& m) {
        std::pair<std::string, std::size_t> slot{canonical_key(node(m.owner).selected()->literal.atom), *m.via};
        if (undefined_seen_.insert({slot, canonical_key(m.atom)}).second)
            undefined_answers_[slot].push_back(canonical(m.atom));
    }

    // A leaf ends one sub-derivation for every subgoal whose mark is still
    // pending in its goal.
    void settle(NodeId id, LeafMark mark) {
        SltNode& n = node(id);
        n.leaf = mark;
        SltTree& t = gt_.trees[n.tree];
        std::optional<std::string> failed_on;
        if (mark == LeafMark::failure) {
            const Subgoal* sg = n.selected();
            if (sg && sg->literal.is_positive() && !is_builtin(sg->literal.atom)) {
                failed_on = canonical_key(sg->literal.atom);
                ++n.outcome.failure;
                n.outcome.depends_on.insert(*failed_on);
            }
        }
        switch (mark) {
        case LeafMark::success: ++t.success_leaves; break;
        case LeafMark::failure: ++t.failure_leaves; break;
        case LeafMark::undefined: ++t.undefined_leaves; break;
        case LeafMark::flounder: ++t.flounder_leaves; break;
        case LeafMark::none: break;
        }
        for (const auto& it : std::vector<GoalItem>(node(id).goal.items())) {
            auto* m = std::get_if<AnswerMark>(&it);
            if (!m) continue;
            auto& o = node(m->owner).outcome;
            if (mark == LeafMark::failure) {
                ++o.failure;
                if (failed_on) o.depends_on.insert(*failed_on);
            } else if (mark == LeafMark::flounder) {
                ++o.flounder;
            } else if (mark == LeafMark::undefined) {
                ++o.undefined;
            }
        }
    }

    // Literals and marks up to a joint renaming.
    std::string share_key(NodeId id) {
        Atom whole{"", {}};
        for (const auto& it : node(id).goal.items()) {
            if (auto* sg = std::get_if<Subgoal>(&it)) {
                if (sg->literal.is_ustar()) {
                    whole.args.push_back(Term::constant("u*"));
                    continue;
                }
                const Atom& a = sg->literal.atom;
                whole.args.push_back(Term::compound((sg->literal.is_negative() ? "-" : "+") + a.predicate, a.args));
            } else {
                const auto& m = std::get<AnswerMark>(it);
                // the top query's own answers are collected separately
                std::string tag = std::string(m.tainted ? "!" : "@") + (m.owner == 0 ? "0" : "") + m.atom.predicate;
                whole.args.push_back(Term::compound(tag, m.atom.args));
            }
        }
        return canonical_key(whole);
    }

    std::vector<const AncestorList*> literal_ancestors(NodeId id) {
        std::vector<const AncestorList*> out;
        for (const auto& it : node(id).goal.items())
            if (auto* sg = std::get_if<Subgoal>(&it)) out.push_back(&sg->ancestors);
        return out;
    }

    static std::set<std::size_t> outside_looping(const AncestorList& al, const std::string& variant) {
        std::set<std::size_t> out;
        al.for_each([&](const AncestorEntry& e) {
            if (e.variant == variant) out.insert(e.clause);
        });
        return out;
    }

    bool sharing() const { return !dfs_ && !opt_.opt1 && !opt_.opt2 && !blocking_; }

    void expand(NodeId id) {
        if (node(id).leaf != LeafMark::none) return;
        if (!sharing()) {
            expand_here(id);
            return;
        }
        std::string k = share_key(id);
        auto als = literal_ancestors(id);
        SltTree& t = gt_.trees[node(id).tree];
        // Recording costs a pass over the subtree's loop checks, so a key
        // is only recorded once it has come up before.
        auto found = shared_.find(k);
        if (found == shared_.end()) {
            shared_[k];
            expand_here(id);
            return;
        }
        for (const auto& cand : found->second) {
            bool same = std::all_of(cand.checks.begin(), cand.checks.end(), [&](const LoopCheck& c) {
                return outside_looping(*als[c.literal], c.variant) == c.clauses;
            });
            if (!same) continue;
            node(id).same_as = cand.node;
            t.success_leaves += cand.success;
            t.failure_leaves += cand.failure;
            t.undefined_leaves += cand.undefined;
            t.flounder_leaves += cand.flounder;
            return;
        }
        Shared rec{id, {}, t.success_leaves, t.failure_leaves, t.undefined_leaves, t.flounder_leaves};
        std::size_t log_from = check_log_.size();
        expand_here(id);
        const SltTree& after = gt_.trees[node(id).tree];
        rec.success = after.success_leaves - rec.success;
        rec.failure = after.failure_leaves - rec.failure;
        rec.undefined = after.undefined_leaves - rec.undefined;
        rec.flounder = after.flounder_leaves - rec.flounder;
        for (std::size_t q = log_from; q < check_log_.size(); ++q) {
            AncestorList outer = check_log_[q].first.older_than(id);
            if (outer.empty()) continue;
            for (std::size_t i = 0; i < als.size(); ++i) {
                if (!(*als[i] == outer)) continue;
                rec.checks.insert(LoopCheck{i, check_log_[q].second, outside_looping(outer, check_log_[q].second)});
                break;
            }
        }
        shared_[k].push_back(std::move(rec));
    }

    void expand_here(NodeId id) {
        if (++nesting_ > opt_.guard.max_branch)
            throw GuardError("derivation longer than " + std::to_string(opt_.guard.max_branch) + " steps");
        Subgoal sg = *node(id).selected();
        if (sg.literal.is_negative())
            expand_negative(id, sg);
        else if (is_builtin(sg.literal.atom))
            expand_builtin(id, sg);
        else
            expand_positive(id, sg);
        --nesting_;
    }

    void expand_builtin(NodeId id, const Subgoal& sg) {
        auto theta = eval_builtin(sg.literal.atom);
        if (!theta) {
            settle(id, LeafMark::failure);
            return;
        }
        Goal g = node(id).goal;
        g.items().erase(g.items().begin());
        NodeId c = add_node(node(id).tree, id, apply(*theta, g), EdgeKind::builtin);
        node(c).mgu = *theta;
        expand(c);
    }

    void expand_negative(NodeId id, const Subgoal& sg) {
        const Atom& b = sg.literal.atom;
        if (blocking_) {
            if (b.is_ground() && blocking_->contains(b))
                settle(id, LeafMark::failure);
            else
                drop_negation(id, false);
            return;
        }
        if (!b.is_ground()) {
            settle(id, LeafMark::flounder);
            return;
        }
        if (ev_.tables.negative.count(b)) {
            node(id).negation = NegationStep::in_table;
            drop_negation(id, false);
            return;
        }
        std::size_t t = new_tree(b, sg.ancestors, id);
        node(id).child_tree = t;
        const SltTree& child = gt_.trees[t];
        Opt1Decision d = opt1_negation_check(gt_, t);
        if (d == Opt1Decision::child_succeeded) {
            settle(id, LeafMark::failure);
        } else if (child.flounder_leaves > 0) {
            settle(id, LeafMark::flounder);
        } else if (opt_.opt1 && d == Opt1Decision::treat_negation_true) {
            node(id).negation = NegationStep::proved_by_opt1;
            drop_negation(id, false);
        } else {
            node(id).negation = NegationStep::made_undefined;
            drop_negation(id, true);
        }
    }

    void drop_negation(NodeId id, bool undefined) {
        Goal g = node(id).goal;
        auto& items = g.items();
        items.erase(items.begin());
        if (undefined) {
            for (auto& it : items)
                if (auto* m = std::get_if<AnswerMark>(&it)) m->tainted = true;
            if (!g.has_ustar()) items.emplace_back(Subgoal{Literal::ustar(), {}});
        }
        NodeId c = add_node(node(id).tree, id, std::move(g), EdgeKind::negation);
        expand(c);
    }

    void mark_dependent(NodeId id, const Atom& selected) {
        node(id).loop_dependent = true;
        if (dfs_) ev_.flags.loop_depend.insert(canonical_key(selected));
    }

    void mark_loop(NodeId id, const Subgoal& sg) {
        node(id).loop_node = true;
        mark_incomplete(id, sg);
    }

    void mark_incomplete(NodeId id, const Subgoal& sg) {
        mark_dependent(id, sg.literal.atom);
        sg.ancestors.for_each([&](const AncestorEntry& e) { mark_dependent(e.node, e.atom); });
    }

    // Ancestors strictly below the outermost variant lose sub-derivations to
    // this cut.
    void note_cut(const Subgoal& sg) {
        auto entries = sg.ancestors.entries();
        std::size_t outermost = 0;
        for (std::size_t k = 0; k < entries.size(); ++k)
            if (is_variant(entries[k].atom, sg.literal.atom)) outermost = k;
        for (std::size_t k = 0; k < outermost; ++k) cut_past_.insert(entries[k].node);
    }

    bool apply_clause(NodeId id, const std::string& key, std::size_t cid) {
        auto r = resolve(node(id).goal, 0, prog_.clause(cid), ev_.counter, id);
        if (!r) return false;
        NodeId c = add_node(node(id).tree, id, std::move(r->goal), EdgeKind::clause);
        node(c).clause = cid;
        node(c).mgu = std::move(r->mgu);
        ++ev_.stats.clause_applications;
        ++ts_.clause_applications;
        ++ts_.clause_uses[{key, cid}];
        expand(c);
        return true;
    }

    bool apply_answer(NodeId id, const Atom& ans) {
        Clause fact{ans, {}, 0, ClauseOrigin::tabled_answer, ""};
        auto r = resolve(node(id).goal, 0, fact, ev_.counter, id);
        if (!r) return false;
        NodeId c = add_node(node(id).tree, id, std::move(r->goal), EdgeKind::answer);
        node(c).answer = ans;
        node(c).mgu = std::move(r->mgu);
        ++ev_.stats.tabled_answer_applications;
        ++ts_.answer_applications;
        expand(c);
        return true;
    }

    void apply_undefined_answer(NodeId id, const Atom& ans) {
        Clause fact{ans, {}, 0, ClauseOrigin::tabled_answer, ""};
        auto r = resolve(node(id).goal, 0, fact, ev_.counter, id);
        if (!r) return;
        for (auto& it : r->goal.items())
            if (auto* m = std::get_if<AnswerMark>(&it)) m->tainted = true;
        if (!r->goal.has_ustar()) r->goal.items().emplace_back(Subgoal{Literal::ustar(), {}});
        NodeId c = add_node(node(id).tree, id, std::move(r->goal), EdgeKind::answer);
        node(c).answer = ans;
        node(c).answer_undefined = true;
        node(c).mgu = std::move(r->mgu);
        ++ev_.stats.tabled_answer_applications;
        ++ts_.answer_applications;
        expand(c);
    }

    void expand_positive(NodeId id, const Subgoal& sg) {
        const Atom& a = sg.literal.atom;
        const std::string key = canonical_key(a);
        subgoals_.emplace(key, a);

        std::set<std::size_t> looping = looping_clauses(a, sg.ancestors);
        if (sharing()) check_log_.emplace_back(sg.ancestors, key);
        ev_.stats.subgoal_comparisons += sg.ancestors.size();
        if (!looping.empty() || (dfs_ && ev_.flags.loop_depend.count(key))) mark_loop(id, sg);
        if (!looping.empty()) note_cut(sg);
        const bool answers_only = opt_.opt2 && opt2_completion_gate(a, ev_.flags) == Opt2Gate::answers_only;
        const auto& clauses = prog_.clauses_for(a);
        const PredicateKey pk = key_of(a);

        if (!dfs_) {
            if (!answers_only)
                for (std::size_t cid : clauses)
                    if (!looping.count(cid)) apply_clause(id, key, cid);
            // the table does not change during this build
            for (std::size_t idx : ev_.tables.positive.for_predicate(pk))
                apply_answer(id, ev_.tables.positive.atoms()[idx]);
        } else {
            std::size_t answer_cursor = 0, clause_cursor = 0;
            std::set<std::size_t> applied_here;
            std::set<std::string> undefined_used;
            while (true) {
                // answers first, including ones that show up while we explore
                while (answer_cursor < ev_.tables.positive.for_predicate(pk).size()) {
                    Atom ans = ev_.tables.positive.atoms()[ev_.tables.positive.for_predicate(pk)[answer_cursor++]];
                    if (node(id).produced.count(canonical_key(ans))) continue;
                    apply_answer(id, ans);
                }
                bool progress = false;
                if (!answers_only) {
                    while (auto cid = opt3_select_clause(a, clauses, clause_cursor, looping, ev_.flags)) {
                        cut_past_.erase(id);
                        if (apply_clause(id, key, *cid)) {
                            ev_.flags.comp_used.insert({key, *cid});
                            if (cut_past_.count(id)) cut_short_uses_.insert({key, *cid});
                            applied_here.insert(*cid);
                            progress = true;
                            break;
                        }
                    }
                }
                if (progress) continue;
                if (!answers_only) {
                    for (std::size_t cid : clauses) {
                        if (looping.count(cid) || applied_here.count(cid) || !ev_.flags.comp_used.count({key, cid}))
                            continue;
                        // A loop cut above the variant that used this clause
                        // may have hidden something that would show here.
                        if (cut_short_uses_.count({key, cid})) mark_incomplete(id, sg);
                        for (std::size_t k = 0; k < undefined_answers_[{key, cid}].size(); ++k) {
                            Atom u = undefined_answers_[{key, cid}][k];
                            if (!undefined_used.insert(canonical_key(u)).second) continue;
                            apply_undefined_answer(id, u);
                            progress = true;
                        }
                    }
                }
                if (!progress && answer_cursor >= ev_.tables.positive.for_predicate(pk).size()) break;
            }
        }

        if (node(id).children.empty()) settle(id, LeafMark::failure);

        if (dfs_ && opt_.opt2 && completed_here(id)) ev_.flags.comp.insert(key);
    }

    bool completed_here(NodeId id) {
        const SltNode& n = node(id);
        return !n.loop_dependent && n.outcome.undefined == 0 && n.outcome.flounder == 0;
    }

    void mark_completed_after_build() {
        for (const auto& n : gt_.nodes) {
            const Subgoal* sg = n.selected();
            if (!sg || !sg->literal.is_positive() || is_builtin(sg->literal.atom)) continue;
            if (completed_here(n.id)) ev_.flags.comp.insert(canonical_key(sg->literal.atom));
        }
    }

    void finish_stats() {
        ts_.distinct_subgoals = subgoals_.size();
        for (const auto& [use, count] : ts_.clause_uses) {
            (void)count;
            const Atom& general = subgoals_.at(use.first);
            if (ts_.answers_for.count(use.first)) continue;
            std::set<std::string> seen;
            auto consider = [&](const Atom& ans) {
                if (is_instance_of(ans, general)) seen.insert(canonical_key(ans));
            };
            for (std::size_t idx : ev_.tables.positive.for_predicate(key_of(general)))
                consider(ev_.tables.positive.atoms()[idx]);
            for (const auto& ans : gt_.new_answers) consider(ans);
            ts_.answers_for[use.first] = seen.size();
        }
        ev_.stats.trees.push_back(std::move(ts_));
    }
};

// An atom is unfounded when it has no derivation even if every negative
// literal not already contradicted by a true answer is taken to hold.  The
// optimistic derivations are found with the depth-first builder, iterated
// until no answer is new.
class Optimistic {
public:
    Optimistic(const Program& p, const Tables& tables, const EngineOptions& opt, Stats& stats)
        : prog_(p), tables_(tables), opt_(opt), stats_(stats) {
        for (const auto& a : tables.positive.atoms()) ev_.tables.positive.insert(a);
        opt_.opt2 = opt_.opt3 = true;
    }
    ~Optimistic() { stats_.unfounded_nodes += ev_.stats.nodes_built; }

    bool derivable(const Atom& a) {
        while (!has_instance(a)) {
            ++stats_.unfounded_checks;
            GeneralizedTree gt = Builder(prog_, ev_, opt_, true, &tables_.positive).run(a);
            if (gt.new_answers.empty()) break;
        }
        return has_instance(a);
    }

private:
    const Program& prog_;
    const Tables& tables_;
    EngineOptions opt_;
    Stats& stats_;
    Evaluation ev_;

    bool has_instance(const Atom& a) const {
        if (a.is_ground()) return ev_.tables.positive.contains(a);
        for (std::size_t idx : ev_.tables.positive.for_predicate(key_of(a)))
            if (is_instance_of(ev_.tables.positive.atoms()[idx], a)) return true;
        return false;
    }
};

}  // namespace

GeneralizedTree build_generalized_tree(const Program& p, const Atom& query, Evaluation& ev, const EngineOptions& opt) {
    return Builder(p, ev, opt, false).run(query);
}

GeneralizedTree build_optimized(const Program& p, const Atom& query, Evaluation& ev, const EngineOptions& opt) {
    return Builder(p, ev, opt, true).run(query);
}

std::vector<Atom> positive_answers(const GeneralizedTree& gt) { return gt.answers; }

std::vector<Atom> negative_candidates(const GeneralizedTree& gt, const std::set<Atom>& tb_f) {
    std::vector<Atom> out;
    std::set<Atom> seen;
    auto consider = [&](const Atom& a) {
        if (a.is_ground() && !tb_f.count(a) && seen.insert(a).second) out.push_back(a);
    };
    consider(gt.top().root_atom);
    for (const auto& n : gt.nodes)
        if (n.child_tree) consider(gt.trees[*n.child_tree].root_atom);
    return out;
}

std::set<Atom> negative_answers(const Program& p, const std::vector<Atom>& candidates, const Tables& tables,
                                const EngineOptions& opt, Stats& stats) {
    Optimistic o(p, tables, opt, stats);
    std::set<Atom> out;
    for (const auto& a : candidates)
        if (!o.derivable(a)) out.insert(a);
    return out;
}

bool optimistically_derivable(const Program& p, const Atom& query, const Tables& tables, const EngineOptions& opt,
                              Stats& stats) {
    return Optimistic(p, tables, opt, stats).derivable(query);
}

}  // namespace sltwfs
