#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sltwfs/subst.hpp"
#include "sltwfs/term.hpp"

namespace sltwfs {

using NodeId = std::size_t;

struct AncestorEntry {
    NodeId node;
    Atom atom;           // the subgoal as selected at `node`
    std::size_t clause;  // program clause `node` used on the way down
    std::string variant = {};  // canonical_key(atom), filled in by push
};

// Persistent root-ward list; pushing shares the tail with the parent.
class AncestorList {
public:
    AncestorList() = default;

    AncestorList push(AncestorEntry e) const;
    bool empty() const { return head_ == nullptr; }
    std::size_t size() const { return head_ ? head_->size : 0; }
    std::vector<AncestorEntry> entries() const;
    // The tail made of entries for nodes numbered below `boundary`.
    AncestorList older_than(NodeId boundary) const;
    // Order-independent digest of the (variant, clause) pairs in the list.
    std::pair<std::uint64_t, std::uint64_t> fingerprint() const {
        return head_ ? std::pair{head_->h1, head_->h2} : std::pair<std::uint64_t, std::uint64_t>{0, 0};
    }

    template <typename F>
    void for_each(F&& f) const {
        for (const Cell* c = head_.get(); c; c = c->next.get()) f(c->entry);
    }

    friend bool operator==(const AncestorList& a, const AncestorList& b) { return a.head_ == b.head_; }

private:
    struct Cell {
        AncestorEntry entry;
        std::shared_ptr<const Cell> next;
        std::size_t size;
        std::uint64_t h1, h2;
    };
    std::shared_ptr<const Cell> head_;
};

struct Subgoal {
    Literal literal;
    AncestorList ancestors;
};

// Placed after the body of a resolved subgoal.  When every literal in front
// of it is gone, the subgoal selected at `owner` has been proved and `atom`
// (instantiated by the later unifiers) is its answer.  A tainted mark means
// the proof went through a temporarily undefined negation.
struct AnswerMark {
    NodeId owner;
    Atom atom;
    bool tainted = false;
    std::optional<std::size_t> via;  // program clause applied at `owner`
};

using GoalItem = std::variant<Subgoal, AnswerMark>;

class Goal {
public:
    Goal() = default;
    explicit Goal(std::vector<GoalItem> items) : items_(std::move(items)) {}

    static Goal top(const Atom& query);

    const std::vector<GoalItem>& items() const { return items_; }
    std::vector<GoalItem>& items() { return items_; }

    // Subgoals only, marks skipped.
    std::vector<Literal> literals() const;
    std::size_t literal_count() const;
    bool is_success() const { return literal_count() == 0; }
    bool has_ustar() const;

    // Item index of the j-th subgoal (0-based), if any.
    std::optional<std::size_t> item_index(std::size_t j) const;

private:
    std::vector<GoalItem> items_;
};

Goal apply(const Substitution& s, const Goal& g);

struct Resolvent {
    Goal goal;
    Substitution mgu;
};

// Resolve subgoal j (0-based, counting subgoals only) of g against clause c
// renamed apart with the next counter index.  Body literals land at the
// selected position and inherit (node, selected atom, c.id) on top of the
// selected subgoal's ancestor list; an AnswerMark for `node` follows them.
std::optional<Resolvent> resolve(const Goal& g, std::size_t j, const Clause& c, RenameCounter& counter,
                                 NodeId node = 0);

}  // namespace sltwfs
