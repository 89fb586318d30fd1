#include <sstream>

#include "sltwfs/engine.hpp"
#include "sltwfs/render.hpp"

namespace sltwfs {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

const char* leaf_text(LeafMark m) {
    switch (m) {
    case LeafMark::success: return "□t";
    case LeafMark::failure: return "□f";
    case LeafMark::undefined: return "□u*";
    case LeafMark::flounder: return "□fl";
    case LeafMark::none: break;
    }
    return "";
}

const char* leaf_shape(LeafMark m) {
    switch (m) {
    case LeafMark::success: return "shape=box, peripheries=2";
    case LeafMark::failure: return "shape=box";
    case LeafMark::undefined: return "shape=diamond";
    case LeafMark::flounder: return "shape=octagon";
    case LeafMark::none: break;
    }
    return "shape=plaintext";
}

std::string edge_label(const SltNode& child, const GeneralizedTree& gt, const Program& p) {
    switch (child.edge) {
    case EdgeKind::clause: return p.clause(child.clause).label;
    case EdgeKind::answer: return (child.answer_undefined ? "undefined answer " : "answer ") + render(*child.answer);
    case EdgeKind::builtin: return "builtin";
    case EdgeKind::negation: {
        const SltNode& parent = gt.node(*child.parent);
        switch (parent.negation) {
        case NegationStep::in_table: return "in TB_f";
        case NegationStep::proved_by_opt1: return "opt1";
        case NegationStep::made_undefined: return "u*";
        case NegationStep::none: break;
        }
        return "";
    }
    case EdgeKind::root: break;
    }
    return "";
}

}  // namespace

std::string render(const Goal& g) {
    auto lits = g.literals();
    return lits.empty() ? "[]" : render(lits);
}

std::string to_dot(const GeneralizedTree& gt, const Program& p) {
    std::ostringstream out;
    out << "digraph slt {\n  node [fontname=\"monospace\"];\n";
    for (const auto& n : gt.nodes) {
        std::string label = "N" + std::to_string(n.id) + ": " + render(n.goal);
        if (n.leaf != LeafMark::none) label += " " + std::string(leaf_text(n.leaf));
        if (n.same_as) label += " = N" + std::to_string(*n.same_as);
        out << "  N" << n.id << " [label=" << quoted(label) << ", " << leaf_shape(n.leaf);
        if (n.loop_node) out << ", style=dashed";
        out << "];\n";
    }
    for (const auto& n : gt.nodes) {
        for (NodeId c : n.children)
            out << "  N" << n.id << " -> N" << c << " [label=" << quoted(edge_label(gt.node(c), gt, p)) << "];\n";
        if (n.child_tree) out << "  N" << n.id << " -> N" << gt.trees[*n.child_tree].root << " [style=dotted];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace sltwfs
