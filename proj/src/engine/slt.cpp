#include <pthread.h>

#include <algorithm>
#include <exception>
#include <functional>

#include "sltwfs/engine.hpp"
#include "sltwfs/render.hpp"

namespace sltwfs {

namespace {

// Tree construction recurses once per node along a branch, which outgrows
// the default 8 MB stack long before the node guard trips.
void run_on_big_stack(const std::function<void()>& body) {
    constexpr std::size_t stack_bytes = std::size_t{1} << 30;
    struct Job {
        const std::function<void()>* body;
        std::exception_ptr error;
    } job{&body, nullptr};
    auto trampoline = [](void* p) -> void* {
        auto* j = static_cast<Job*>(p);
        try {
            (*j->body)();
        } catch (...) {
            j->error = std::current_exception();
        }
        return nullptr;
    };
    pthread_attr_t attr;
    pthread_attr_init(&attr);
    pthread_attr_setstacksize(&attr, stack_bytes);
    pthread_t th;
    int rc = pthread_create(&th, &attr, trampoline, &job);
    pthread_attr_destroy(&attr);
    if (rc != 0) {
        body();  // no thread available; take our chances on this stack
        return;
    }
    pthread_join(th, nullptr);
    if (job.error) std::rethrow_exception(job.error);
}

std::vector<Atom> top_answers(const GeneralizedTree& gt) {
    std::map<std::string, Atom> by_text;
    for (const auto& a : gt.query_answers) by_text.emplace(render(a), a);
    std::vector<Atom> out;
    for (auto& [text, a] : by_text) out.push_back(std::move(a));
    return out;
}

}  // namespace

SltpResult sltp(const Program& p, const Atom& query, Evaluation& ev, const EngineOptions& opt) {
    while (true) {
        ++ev.stats.sltp_calls;
        GeneralizedTree gt =
            opt.opt3 ? build_optimized(p, query, ev, opt) : build_generalized_tree(p, query, ev, opt);
        if (!opt.opt3)
            for (const auto& a : gt.new_answers) ev.tables.positive.insert(a);
        bool settled = opt.stop_on_ground_success && query.is_ground() && gt.top().success_leaves > 0;
        if (settled || gt.new_answers.empty()) return {std::move(gt), settled};
    }
}

Verdict slt(const Program& p, const Atom& query, const EngineOptions& opt) {
    Verdict v;
    run_on_big_stack([&] {
        Evaluation ev;
        GeneralizedTree last;
        while (true) {
            ++ev.stats.slt_calls;
            SltpResult r = sltp(p, query, ev, opt);
            last = std::move(r.tree);
            if (r.settled) break;
            std::set<Atom> fresh =
                negative_answers(p, negative_candidates(last, ev.tables.negative), ev.tables, opt, ev.stats);
            if (fresh.empty()) break;
            for (const auto& a : fresh) {
                ev.tables.negative.insert(a);
                if (opt.opt2) ev.flags.comp.insert(canonical_key(a));
            }
        }
        const SltTree& top = last.top();
        if (top.flounder_leaves > 0 && (top.success_leaves == 0 || !query.is_ground())) throw FlounderError();
        if (top.success_leaves > 0) {
            v.kind = VerdictKind::true_value;
            v.answers = top_answers(last);
        } else if (ev.tables.negative.count(query) ||
                   (!query.is_ground() && !optimistically_derivable(p, query, ev.tables, opt, ev.stats))) {
            v.kind = VerdictKind::false_value;
        } else {
            v.kind = VerdictKind::undefined;
        }
        v.tables = std::move(ev.tables);
        v.stats = std::move(ev.stats);
        v.tree = std::make_shared<const GeneralizedTree>(std::move(last));
    });
    return v;
}

}  // namespace sltwfs
