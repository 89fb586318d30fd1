// slt-wfs: run one query against a program under the tabled engine or the
// bottom-up oracle.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "sltwfs/engine.hpp"
#include "sltwfs/oracle.hpp"
#include "sltwfs/parser.hpp"
#include "sltwfs/render.hpp"

using namespace sltwfs;

namespace {

enum Exit { ok = 0, parse_failed = 1, floundered = 2, guard_tripped = 3, oracle_disagrees = 4, evaluation_failed = 5 };

struct RunConfig {
    std::string program_path;
    std::string query_text;
    std::string engine = "slt-optimized";
    bool no_opt1 = false, no_opt2 = false, no_opt3 = false;
    std::size_t guard_depth = Guard{}.max_term_depth;
    std::size_t guard_nodes = Guard{}.max_nodes;
    std::string dump_tree;
    std::string stats;
    bool oracle_check = false;
    std::size_t oracle_depth_cap = 0;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* word(wfs::Truth t) {
    switch (t) {
    case wfs::Truth::true_value: return "true";
    case wfs::Truth::false_value: return "false";
    case wfs::Truth::undefined: break;
    }
    return "undefined";
}

wfs::Truth as_truth(VerdictKind k) {
    switch (k) {
    case VerdictKind::true_value: return wfs::Truth::true_value;
    case VerdictKind::false_value: return wfs::Truth::false_value;
    case VerdictKind::undefined: break;
    }
    return wfs::Truth::undefined;
}

void report(wfs::Truth t, const std::vector<Atom>& answers, bool open) {
    std::cout << word(t) << "\n";
    if (open)
        for (const auto& a : answers) std::cout << "A = " << render(a) << "\n";
}

// Which of the oracle's ground instances the engine's answers cover.
std::vector<std::string> covered(const std::vector<Atom>& answers, const wfs::QueryResult& r) {
    std::set<std::string> out;
    for (const auto& g : r.instances)
        for (const auto& a : answers)
            if (is_instance_of(g, a)) out.insert(render(g));
    return {out.begin(), out.end()};
}

int run(const RunConfig& cfg) {
    Program p;
    Atom q;
    try {
        p = parse_program(read_file(cfg.program_path));
        q = parse_query(cfg.query_text);
    } catch (const ParseError& e) {
        std::cerr << "parse error at " << e.span().line << ":" << e.span().column << ": " << e.message() << "\n";
        return parse_failed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return parse_failed;
    }

    if (cfg.oracle_check && (p.has_builtins() || p.has_function_symbols())) {
        std::cerr << "error: --oracle-check needs a program without builtins or function symbols\n";
        return evaluation_failed;
    }

    try {
        if (cfg.engine == "oracle") {
            wfs::QueryResult r = wfs::query(p, q, cfg.oracle_depth_cap);
            report(r.truth, r.answers, !q.is_ground());
            return ok;
        }

        EngineOptions opt = cfg.engine == "slt" ? EngineOptions::plain() : EngineOptions::optimized();
        if (cfg.no_opt1) opt.opt1 = false;
        if (cfg.no_opt2) opt.opt2 = false;
        if (cfg.no_opt3) opt.opt3 = false;
        opt.guard.max_term_depth = cfg.guard_depth;
        opt.guard.max_nodes = cfg.guard_nodes;

        Verdict v = slt(p, q, opt);
        report(as_truth(v.kind), v.answers, !q.is_ground());

        if (!cfg.dump_tree.empty()) {
            std::ofstream out(cfg.dump_tree);
            out << to_dot(*v.tree, p);
        }
        if (!cfg.stats.empty()) {
            nlohmann::ordered_json j;
            for (const auto& [name, value] : v.stats.counters()) j[name] = value;
            std::ofstream out(cfg.stats);
            out << j.dump(2) << "\n";
        }

        if (cfg.oracle_check) {
            wfs::QueryResult r = wfs::query(p, q);
            std::vector<std::string> want;
            for (const auto& a : r.answers) want.push_back(render(a));
            std::vector<std::string> got = covered(v.answers, r);
            std::string details;
            if (as_truth(v.kind) != r.truth)
                details = std::string("verdict ") + word(as_truth(v.kind)) + " vs " + word(r.truth);
            else if (got != want)
                details = "answer instances differ";
            if (details.empty()) {
                std::cout << "ORACLE AGREE\n";
            } else {
                std::cout << "ORACLE DISAGREE " << details << "\n";
                return oracle_disagrees;
            }
        }
        return ok;
    } catch (const FlounderError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return floundered;
    } catch (const GuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return guard_tripped;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return evaluation_failed;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Well-founded query evaluation by tabled resolution"};
    app.require_subcommand(1);
    RunConfig cfg;
    CLI::App* sub = app.add_subcommand("run", "Evaluate one query");
    sub->add_option("program", cfg.program_path, "Program file")->required();
    sub->add_option("query", cfg.query_text, "Query atom, e.g. \"p(X)\"")->required();
    sub->add_option("--engine", cfg.engine, "slt, slt-optimized or oracle")
        ->check(CLI::IsMember({"slt", "slt-optimized", "oracle"}))
        ->capture_default_str();
    sub->add_flag("--no-opt1", cfg.no_opt1, "Do not settle a negation from a loop-independent failed child tree");
    sub->add_flag("--no-opt2", cfg.no_opt2, "Do not restrict completed subgoals to tabled answers");
    sub->add_flag("--no-opt3", cfg.no_opt3, "Use the breadth builder instead of the depth-first one");
    sub->add_option("--guard-depth", cfg.guard_depth, "Largest term nesting allowed in a subgoal or answer")
        ->capture_default_str();
    sub->add_option("--guard-nodes", cfg.guard_nodes, "Largest forest, in nodes, per generalized tree")
        ->capture_default_str();
    sub->add_option("--dump-tree", cfg.dump_tree, "Write the final generalized tree as DOT");
    sub->add_option("--stats", cfg.stats, "Write counters as JSON");
    sub->add_flag("--oracle-check", cfg.oracle_check, "Compare with the bottom-up model");
    sub->add_option("--oracle-depth-cap", cfg.oracle_depth_cap, "Term depth for the oracle's universe")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return parse_failed;
    }
    return run(cfg);
}
