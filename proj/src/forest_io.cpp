#include "ocf/forest_io.hpp"

#include "ocf/errors.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <vector>

namespace ocf {
namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct LineScanner {
    const std::string& line;
    int line_no;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("forest file line " + std::to_string(line_no) + ", column " +
                         std::to_string(pos + 1) + ": " + what);
    }

    bool done() {
        while (pos < line.size() && line[pos] == ' ') ++pos;
        return pos >= line.size();
    }

    std::string word() {
        if (done()) fail("unexpected end of line");
        std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ') ++pos;
        return line.substr(start, pos - start);
    }

    long integer() {
        std::string w = word();
        long v = 0;
        auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
        if (ec != std::errc() || p != w.data() + w.size()) fail("expected integer, got '" + w + "'");
        return v;
    }

    double real() {
        std::string w = word();
        try {
            std::size_t used = 0;
            double v = std::stod(w, &used);
            if (used != w.size()) fail("expected number, got '" + w + "'");
            return v;
        } catch (const std::exception&) {
            fail("expected number, got '" + w + "'");
        }
    }

    std::string rest() {
        if (done()) fail("expected text");
        return line.substr(pos);
    }
};

}  // namespace

std::string serialize_forest(const Forest& forest) {
    std::ostringstream out;
    out << "ocf-forest v1\n";
    out << "trees " << forest.tree_count() << " features " << forest.feature_count() << "\n";
    const auto& names = forest.feature_names();
    for (std::size_t q = 0; q < names.size(); ++q) out << "fname " << q << " " << names[q] << "\n";
    for (std::size_t r = 0; r < forest.tree_count(); ++r) {
        const DecisionTree& tree = forest.tree(r);
        const TreeTopology& topo = tree.topology();
        out << "tree " << r << " depth " << topo.depth() << " fallback " << tree.fallback_class() << "\n";
        for (NodeId t = 1; t <= topo.node_count(); ++t) {
            if (topo.is_branch(t)) {
                const auto& s = tree.split(t);
                if (s.has_value())
                    out << "node " << t << " split " << s->feature << " " << format_double(s->threshold) << "\n";
            } else {
                auto cls = tree.leaf_class(t);
                if (!cls.has_value()) continue;
                out << "node " << t << " leaf " << *cls;
                auto support = tree.leaf_support(t);
                if (support.has_value()) out << " support " << *support;
                out << "\n";
            }
        }
    }
    out << "end\n";
    return out.str();
}

Forest deserialize_forest(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;

    auto next_line = [&](std::string& store) -> bool {
        while (std::getline(in, raw)) {
            ++line_no;
            if (!raw.empty() && raw.back() == '\r') raw.pop_back();
            bool blank = true;
            for (char c : raw)
                if (c != ' ' && c != '\t') blank = false;
            if (blank || raw[0] == '#') continue;
            store = raw;
            return true;
        }
        return false;
    };

    std::string line;
    if (!next_line(line)) throw ParseError("forest file is empty");
    if (line != "ocf-forest v1")
        throw ParseError("forest file line " + std::to_string(line_no) + ": unsupported header '" + line + "'");

    if (!next_line(line)) throw ParseError("forest file ends before the trees line");
    LineScanner head{line, line_no};
    if (head.word() != "trees") head.fail("expected 'trees'");
    long tree_count = head.integer();
    if (head.word() != "features") head.fail("expected 'features'");
    long feature_count = head.integer();
    if (tree_count < 1) head.fail("tree count must be positive");
    if (feature_count < 0) head.fail("feature count must be non-negative");

    std::vector<std::string> names;
    std::vector<DecisionTree> trees;
    long expected_tree = 0;
    bool saw_end = false;

    while (next_line(line)) {
        LineScanner sc{line, line_no};
        std::string kind = sc.word();
        if (kind == "fname") {
            long idx = sc.integer();
            std::string name = sc.rest();
            if (idx < 0 || idx >= feature_count) sc.fail("feature index out of range");
            if (names.size() <= static_cast<std::size_t>(idx)) names.resize(static_cast<std::size_t>(idx) + 1);
            names[static_cast<std::size_t>(idx)] = name;
        } else if (kind == "tree") {
            long idx = sc.integer();
            if (idx != expected_tree) sc.fail("trees must appear in order; expected tree " + std::to_string(expected_tree));
            ++expected_tree;
            if (sc.word() != "depth") sc.fail("expected 'depth'");
            long depth = sc.integer();
            if (sc.word() != "fallback") sc.fail("expected 'fallback'");
            long fallback = sc.integer();
            if (fallback != 0 && fallback != 1) sc.fail("fallback class must be 0 or 1");
            try {
                trees.emplace_back(TreeTopology(static_cast<int>(depth)), static_cast<int>(fallback));
            } catch (const Error& e) {
                sc.fail(e.what());
            }
        } else if (kind == "node") {
            if (trees.empty()) sc.fail("node record before any tree header");
            DecisionTree& tree = trees.back();
            long node = sc.integer();
            if (node < 1 || node > tree.topology().node_count()) sc.fail("node id out of range");
            std::string what = sc.word();
            try {
                if (what == "split") {
                    long feature = sc.integer();
                    double threshold = sc.real();
                    if (feature < 0 || feature >= feature_count) sc.fail("split feature index out of range");
                    tree.set_split(static_cast<NodeId>(node), Split{static_cast<int>(feature), threshold});
                } else if (what == "leaf") {
                    long cls = sc.integer();
                    tree.set_leaf_class(static_cast<NodeId>(node), static_cast<int>(cls));
                    if (!sc.done()) {
                        if (sc.word() != "support") sc.fail("expected 'support'");
                        tree.set_leaf_support(static_cast<NodeId>(node), static_cast<int>(sc.integer()));
                    }
                } else {
                    sc.fail("unknown node kind '" + what + "'");
                }
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                sc.fail(e.what());
            }
        } else if (kind == "end") {
            saw_end = true;
            break;
        } else {
            sc.fail("unknown record '" + kind + "'");
        }
    }

    if (!saw_end) throw ParseError("forest file line " + std::to_string(line_no + 1) + ": missing 'end' terminator");
    if (expected_tree != tree_count)
        throw ParseError("forest file declares " + std::to_string(tree_count) + " trees but contains " +
                         std::to_string(expected_tree));

    Forest forest(std::move(trees));
    forest.set_feature_count(static_cast<std::size_t>(feature_count));
    if (!names.empty()) {
        names.resize(static_cast<std::size_t>(feature_count));
        forest.set_feature_names(std::move(names));
    }
    return forest;
}

}  // namespace ocf
