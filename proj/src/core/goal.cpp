#include "sltwfs/goal.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace sltwfs {

AncestorList AncestorList::push(AncestorEntry e) const {
    e.variant = canonical_key(e.atom);
    std::string k = e.variant + "/" + std::to_string(e.clause);
    std::uint64_t a = std::hash<std::string>{}(k);
    // second digest from an unrelated mixing of the same text
    std::uint64_t b = 1469598103934665603ull;
    for (unsigned char c : k) b = (b ^ c) * 1099511628211ull;
    auto [h1, h2] = fingerprint();
    AncestorList out;
    out.head_ = std::make_shared<const Cell>(Cell{std::move(e), head_, size() + 1, h1 + a, h2 + b});
    return out;
}

AncestorList AncestorList::older_than(NodeId boundary) const {
    AncestorList out;
    out.head_ = head_;
    while (out.head_ && out.head_->entry.node >= boundary) out.head_ = out.head_->next;
    return out;
}

std::vector<AncestorEntry> AncestorList::entries() const {
    std::vector<AncestorEntry> out;
    for_each([&](const AncestorEntry& e) { out.push_back(e); });
    return out;
}

Goal Goal::top(const Atom& query) { return Goal({Subgoal{Literal::pos(query), {}}}); }

std::vector<Literal> Goal::literals() const {
    std::vector<Literal> out;
    for (const auto& it : items_)
        if (auto* s = std::get_if<Subgoal>(&it)) out.push_back(s->literal);
    return out;
}

std::size_t Goal::literal_count() const {
    return static_cast<std::size_t>(
        std::count_if(items_.begin(), items_.end(), [](const GoalItem& it) { return std::holds_alternative<Subgoal>(it); }));
}

bool Goal::has_ustar() const {
    return std::any_of(items_.begin(), items_.end(), [](const GoalItem& it) {
        auto* s = std::get_if<Subgoal>(&it);
        return s && s->literal.is_ustar();
    });
}

std::optional<std::size_t> Goal::item_index(std::size_t j) const {
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (!std::holds_alternative<Subgoal>(items_[i])) continue;
        if (j == 0) return i;
        --j;
    }
    return std::nullopt;
}

Goal apply(const Substitution& s, const Goal& g) {
    if (s.empty()) return g;
    std::vector<GoalItem> items;
    items.reserve(g.items().size());
    for (const auto& it : g.items()) {
        if (auto* sg = std::get_if<Subgoal>(&it))
            items.emplace_back(Subgoal{apply(s, sg->literal), sg->ancestors});
        else {
            AnswerMark m = std::get<AnswerMark>(it);
            m.atom = apply(s, m.atom);
            items.emplace_back(std::move(m));
        }
    }
    return Goal(std::move(items));
}

std::optional<Resolvent> resolve(const Goal& g, std::size_t j, const Clause& c, RenameCounter& counter, NodeId node) {
    auto pos = g.item_index(j);
    if (!pos) return std::nullopt;
    const auto& selected = std::get<Subgoal>(g.items()[*pos]);
    if (!selected.literal.is_positive()) return std::nullopt;
    Clause renamed = rename_apart(c, counter.take());
    auto theta = mgu(selected.literal.atom, renamed.head);
    if (!theta) return std::nullopt;

    AncestorList inherited = selected.ancestors.push({node, selected.literal.atom, c.id});
    std::vector<GoalItem> items;
    items.reserve(g.items().size() + renamed.body.size() + 1);
    items.insert(items.end(), g.items().begin(), g.items().begin() + static_cast<std::ptrdiff_t>(*pos));
    for (auto& l : renamed.body) items.emplace_back(Subgoal{std::move(l), inherited});
    std::optional<std::size_t> via;
    if (c.origin == ClauseOrigin::program) via = c.id;
    items.emplace_back(AnswerMark{node, selected.literal.atom, false, via});
    items.insert(items.end(), g.items().begin() + static_cast<std::ptrdiff_t>(*pos) + 1, g.items().end());
    return Resolvent{apply(*theta, Goal(std::move(items))), std::move(*theta)};
}

}  // namespace sltwfs
