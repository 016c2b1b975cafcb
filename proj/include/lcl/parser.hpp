#pragma once

// Text and JSON formats for problems, trees, and labelings.
//
// Problem text format ('#' starts a comment, blank lines ignored):
//   rooted delta=2          |  unrooted delta=3
//   labels = 1,2            |  labels = a
//   1 : 1 2                 |  node : a a a
//   2 : 1 1                 |  edge : a a
//
// Tree format:
//   tree rooted n=3         |  tree unrooted n=4
//   1 -> 0                  |  0 -- 1
//   2 -> 0                  |  ...
// with optional per-node annotation lines: @ <id> layer=C,2 role=central
//
// Labeling format: rooted "<node> <label>" per node; unrooted
// "<node> <neighbor> <label>" per half-edge, ordered by ids.

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lcl/core.hpp"
#include "lcl/trees.hpp"

namespace lcl {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    explicit ParseError(const std::string& msg) : std::runtime_error(msg), line_(0) {}
    int line() const { return line_; }

private:
    int line_;
};

using Problem = std::variant<UnrootedProblem, RootedProblem>;

struct ParsedProblem {
    Problem problem;
    std::vector<std::string> warnings;

    bool is_rooted() const { return std::holds_alternative<RootedProblem>(problem); }
    const RootedProblem& rooted() const { return std::get<RootedProblem>(problem); }
    const UnrootedProblem& unrooted() const { return std::get<UnrootedProblem>(problem); }
};

namespace detail {

inline std::string strip_comment(std::string_view s) {
    auto pos = s.find('#');
    if (pos != std::string_view::npos) s = s.substr(0, pos);
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

inline std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline int parse_int(const std::string& s, int line, const char* what) {
    int value = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError(line, std::string("expected an integer for ") + what + ", got '" + s + "'");
    return value;
}

struct LabelInterner {
    std::vector<std::string> names;
    LabelId id_of(const std::string& name, int line) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<LabelId>(i);
        throw ParseError(line, "unknown label name '" + name + "'");
    }
};

inline std::vector<std::string> parse_label_list(const std::string& body, int line) {
    std::vector<std::string> names;
    std::string cur;
    for (char c : body + ",") {
        if (c == ',') {
            size_t a = cur.find_first_not_of(" \t");
            size_t b = cur.find_last_not_of(" \t");
            if (a == std::string::npos) throw ParseError(line, "empty label name");
            names.push_back(cur.substr(a, b - a + 1));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (names.empty()) throw ParseError(line, "label list is empty");
    if (names.size() > kMaxAlphabet)
        throw ParseError(line, "too many labels (max " + std::to_string(kMaxAlphabet) + ")");
    for (size_t i = 0; i + 1 < names.size(); ++i)
        for (size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j]) throw ParseError(line, "duplicate label name '" + names[i] + "'");
    return names;
}

} // namespace detail

inline ParsedProblem parse_problem(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    ParsedProblem result;
    bool have_header = false, have_labels = false, rooted = false;
    int delta = 0;
    detail::LabelInterner interner;
    UnrootedProblem up;
    RootedProblem rp;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string s = detail::strip_comment(raw);
        if (s.empty()) continue;
        auto toks = detail::tokens(s);

        if (!have_header) {
            // "<kind> delta=<d>"
            if (toks.size() != 2 || (toks[0] != "rooted" && toks[0] != "unrooted") ||
                toks[1].rfind("delta=", 0) != 0)
                throw ParseError(lineno, "expected 'rooted delta=<d>' or 'unrooted delta=<d>'");
            rooted = toks[0] == "rooted";
            delta = detail::parse_int(toks[1].substr(6), lineno, "delta");
            if (rooted && delta < 1) throw ParseError(lineno, "rooted delta must be >= 1");
            if (!rooted && delta < 2) throw ParseError(lineno, "unrooted delta must be >= 2");
            have_header = true;
            continue;
        }
        if (!have_labels) {
            // "labels = a,b,c"
            auto eq = s.find('=');
            if (s.rfind("labels", 0) != 0 || eq == std::string::npos)
                throw ParseError(lineno, "expected 'labels = <name>[,<name>...]'");
            interner.names = detail::parse_label_list(s.substr(eq + 1), lineno);
            have_labels = true;
            if (rooted) {
                rp.delta = delta;
                rp.alphabet = interner.names;
            } else {
                up.delta = delta;
                up.alphabet = interner.names;
            }
            continue;
        }

        auto colon = std::find(toks.begin(), toks.end(), ":");
        if (colon == toks.end() || colon == toks.begin())
            throw ParseError(lineno, "expected '<head> : <labels...>' configuration line");
        std::vector<std::string> head(toks.begin(), colon);
        std::vector<std::string> tail(colon + 1, toks.end());
        if (head.size() != 1) throw ParseError(lineno, "configuration head must be a single token");

        if (rooted) {
            LabelId lab = interner.id_of(head[0], lineno);
            if (static_cast<int>(tail.size()) != delta)
                throw ParseError(lineno, "expected " + std::to_string(delta) + " children, got " +
                                             std::to_string(tail.size()));
            std::vector<LabelId> kids;
            for (const auto& t : tail) kids.push_back(interner.id_of(t, lineno));
            RootedConfig cfg{lab, LabelMultiset(std::move(kids))};
            if (std::find(rp.configs.begin(), rp.configs.end(), cfg) != rp.configs.end())
                result.warnings.push_back("line " + std::to_string(lineno) +
                                          ": duplicate configuration ignored");
            else
                rp.configs.push_back(cfg);
        } else if (head[0] == "node") {
            if (static_cast<int>(tail.size()) != delta)
                throw ParseError(lineno, "node configuration needs " + std::to_string(delta) +
                                             " labels, got " + std::to_string(tail.size()));
            std::vector<LabelId> ids;
            for (const auto& t : tail) ids.push_back(interner.id_of(t, lineno));
            LabelMultiset m(std::move(ids));
            if (std::find(up.node_configs.begin(), up.node_configs.end(), m) != up.node_configs.end())
                result.warnings.push_back("line " + std::to_string(lineno) +
                                          ": duplicate configuration ignored");
            else
                up.node_configs.push_back(m);
        } else if (head[0] == "edge") {
            if (tail.size() != 2)
                throw ParseError(lineno, "edge configuration needs 2 labels, got " +
                                             std::to_string(tail.size()));
            LabelMultiset m({interner.id_of(tail[0], lineno), interner.id_of(tail[1], lineno)});
            if (std::find(up.edge_configs.begin(), up.edge_configs.end(), m) != up.edge_configs.end())
                result.warnings.push_back("line " + std::to_string(lineno) +
                                          ": duplicate configuration ignored");
            else
                up.edge_configs.push_back(m);
        } else {
            throw ParseError(lineno, "unrooted configuration lines start with 'node' or 'edge'");
        }
    }
    if (!have_header) throw ParseError(lineno, "missing problem header");
    if (!have_labels) throw ParseError(lineno, "missing labels line");

    if (rooted) {
        rp.normalize();
        auto diags = validate_problem(rp);
        if (!diags.empty()) throw ParseError("invalid problem: " + diags.front());
        result.problem = std::move(rp);
    } else {
        up.normalize();
        auto diags = validate_problem(up);
        if (!diags.empty()) throw ParseError("invalid problem: " + diags.front());
        result.problem = std::move(up);
    }
    return result;
}

inline ParsedProblem parse_problem_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    ParsedProblem result;
    const std::string kind = j.at("kind").get<std::string>();
    detail::LabelInterner interner;
    interner.names = j.at("labels").get<std::vector<std::string>>();
    if (kind == "rooted") {
        RootedProblem rp;
        rp.delta = j.at("delta").get<int>();
        rp.alphabet = interner.names;
        for (const auto& c : j.at("configs")) {
            RootedConfig cfg;
            cfg.label = interner.id_of(c.at("label").get<std::string>(), 0);
            std::vector<LabelId> kids;
            for (const auto& k : c.at("children")) kids.push_back(interner.id_of(k.get<std::string>(), 0));
            cfg.children = LabelMultiset(std::move(kids));
            if (std::find(rp.configs.begin(), rp.configs.end(), cfg) != rp.configs.end())
                result.warnings.push_back("duplicate configuration ignored");
            else
                rp.configs.push_back(cfg);
        }
        rp.normalize();
        auto diags = validate_problem(rp);
        if (!diags.empty()) throw ParseError("invalid problem: " + diags.front());
        result.problem = std::move(rp);
    } else if (kind == "unrooted") {
        UnrootedProblem up;
        up.delta = j.at("delta").get<int>();
        up.alphabet = interner.names;
        for (const auto& c : j.at("node_configs")) {
            std::vector<LabelId> ids;
            for (const auto& k : c) ids.push_back(interner.id_of(k.get<std::string>(), 0));
            up.node_configs.push_back(LabelMultiset(std::move(ids)));
        }
        for (const auto& c : j.at("edge_configs")) {
            std::vector<LabelId> ids;
            for (const auto& k : c) ids.push_back(interner.id_of(k.get<std::string>(), 0));
            up.edge_configs.push_back(LabelMultiset(std::move(ids)));
        }
        up.normalize();
        auto diags = validate_problem(up);
        if (!diags.empty()) throw ParseError("invalid problem: " + diags.front());
        result.problem = std::move(up);
    } else {
        throw ParseError("kind must be 'rooted' or 'unrooted'");
    }
    return result;
}

inline std::string serialize_problem(const Problem& prob) {
    std::ostringstream out;
    if (std::holds_alternative<RootedProblem>(prob)) {
        const auto& p = std::get<RootedProblem>(prob);
        out << "rooted delta=" << p.delta << "\n";
        out << "labels = ";
        for (size_t i = 0; i < p.alphabet.size(); ++i)
            out << (i ? "," : "") << p.alphabet[i];
        out << "\n";
        for (const auto& c : p.configs) {
            out << p.alphabet[c.label] << " :";
            for (LabelId k : c.children.entries) out << " " << p.alphabet[k];
            out << "\n";
        }
    } else {
        const auto& p = std::get<UnrootedProblem>(prob);
        out << "unrooted delta=" << p.delta << "\n";
        out << "labels = ";
        for (size_t i = 0; i < p.alphabet.size(); ++i)
            out << (i ? "," : "") << p.alphabet[i];
        out << "\n";
        for (const auto& c : p.node_configs) {
            out << "node :";
            for (LabelId k : c.entries) out << " " << p.alphabet[k];
            out << "\n";
        }
        for (const auto& c : p.edge_configs) {
            out << "edge :";
            for (LabelId k : c.entries) out << " " << p.alphabet[k];
            out << "\n";
        }
    }
    return out.str();
}

inline nlohmann::ordered_json serialize_problem_json(const Problem& prob) {
    nlohmann::ordered_json j;
    if (std::holds_alternative<RootedProblem>(prob)) {
        const auto& p = std::get<RootedProblem>(prob);
        j["kind"] = "rooted";
        j["delta"] = p.delta;
        j["labels"] = p.alphabet;
        auto& cs = j["configs"] = nlohmann::ordered_json::array();
        for (const auto& c : p.configs) {
            nlohmann::ordered_json jc;
            jc["label"] = p.alphabet[c.label];
            auto& kids = jc["children"] = nlohmann::ordered_json::array();
            for (LabelId k : c.children.entries) kids.push_back(p.alphabet[k]);
            cs.push_back(jc);
        }
    } else {
        const auto& p = std::get<UnrootedProblem>(prob);
        j["kind"] = "unrooted";
        j["delta"] = p.delta;
        j["labels"] = p.alphabet;
        auto& nc = j["node_configs"] = nlohmann::ordered_json::array();
        for (const auto& c : p.node_configs) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (LabelId k : c.entries) row.push_back(p.alphabet[k]);
            nc.push_back(row);
        }
        auto& ec = j["edge_configs"] = nlohmann::ordered_json::array();
        for (const auto& c : p.edge_configs) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (LabelId k : c.entries) row.push_back(p.alphabet[k]);
            ec.push_back(row);
        }
    }
    return j;
}

// ---------------------------------------------------------------------------
// Trees
// ---------------------------------------------------------------------------

inline Tree parse_tree(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    Tree t;
    bool have_header = false;
    int expected_n = 0;
    std::vector<std::pair<int, NodeAnnotation>> annots;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string s = detail::strip_comment(raw);
        if (s.empty()) continue;
        auto toks = detail::tokens(s);
        if (!have_header) {
            if (toks.size() != 3 || toks[0] != "tree" ||
                (toks[1] != "rooted" && toks[1] != "unrooted") || toks[2].rfind("n=", 0) != 0)
                throw ParseError(lineno, "expected 'tree rooted|unrooted n=<count>'");
            t.kind = toks[1] == "rooted" ? TreeKind::rooted : TreeKind::unrooted;
            expected_n = detail::parse_int(toks[2].substr(2), lineno, "node count");
            if (expected_n < 1) throw ParseError(lineno, "node count must be >= 1");
            t.n = expected_n;
            have_header = true;
            continue;
        }
        if (toks[0] == "@") {
            // "@ <id> layer=<R|C>,<i> [role=<front|central|rear>]"
            if (toks.size() < 3) throw ParseError(lineno, "malformed annotation line");
            int id = detail::parse_int(toks[1], lineno, "node id");
            NodeAnnotation a;
            for (size_t i = 2; i < toks.size(); ++i) {
                if (toks[i].rfind("layer=", 0) == 0) {
                    std::string v = toks[i].substr(6);
                    auto comma = v.find(',');
                    if (comma == std::string::npos || (v[0] != 'R' && v[0] != 'C'))
                        throw ParseError(lineno, "layer must be R,<i> or C,<i>");
                    a.layer_kind = v[0];
                    a.layer_index = detail::parse_int(v.substr(comma + 1), lineno, "layer index");
                } else if (toks[i].rfind("role=", 0) == 0) {
                    std::string v = toks[i].substr(5);
                    if (v == "front") a.role = NodeRole::front;
                    else if (v == "central") a.role = NodeRole::central;
                    else if (v == "rear") a.role = NodeRole::rear;
                    else throw ParseError(lineno, "unknown role '" + v + "'");
                } else {
                    throw ParseError(lineno, "unknown annotation field '" + toks[i] + "'");
                }
            }
            annots.push_back({id, a});
            continue;
        }
        if (toks.size() != 3) throw ParseError(lineno, "expected '<a> -> <b>' or '<a> -- <b>'");
        int a = detail::parse_int(toks[0], lineno, "node id");
        int b = detail::parse_int(toks[2], lineno, "node id");
        if (t.kind == TreeKind::rooted) {
            if (toks[1] != "->") throw ParseError(lineno, "rooted edges use '<child> -> <parent>'");
        } else {
            if (toks[1] != "--") throw ParseError(lineno, "unrooted edges use '<u> -- <v>'");
        }
        t.edges.push_back({a, b});
    }
    if (!have_header) throw ParseError(lineno, "missing tree header");
    if (!annots.empty()) {
        t.annotations.assign(t.n, {});
        for (auto& [id, a] : annots) {
            if (id < 0 || id >= t.n) throw ParseError("annotation for unknown node " + std::to_string(id));
            t.annotations[id] = a;
        }
    }
    try {
        t.finalize();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid tree: ") + e.what());
    }
    return t;
}

inline const char* role_name(NodeRole r) {
    switch (r) {
        case NodeRole::front: return "front";
        case NodeRole::central: return "central";
        case NodeRole::rear: return "rear";
        default: return "";
    }
}

inline std::string serialize_tree(const Tree& t, bool include_annotations = true) {
    std::ostringstream out;
    out << "tree " << (t.kind == TreeKind::rooted ? "rooted" : "unrooted") << " n=" << t.n << "\n";
    auto edges = t.edges;
    if (t.kind == TreeKind::rooted) {
        std::sort(edges.begin(), edges.end());
        for (auto [c, p] : edges) out << c << " -> " << p << "\n";
    } else {
        for (auto& [a, b] : edges)
            if (a > b) std::swap(a, b);
        std::sort(edges.begin(), edges.end());
        for (auto [a, b] : edges) out << a << " -- " << b << "\n";
    }
    if (include_annotations && t.annotated()) {
        for (int v = 0; v < t.n; ++v) {
            const auto& a = t.annotations[v];
            if (a.layer_kind == 0) continue;
            out << "@ " << v << " layer=" << a.layer_kind << "," << a.layer_index;
            if (a.role != NodeRole::none) out << " role=" << role_name(a.role);
            out << "\n";
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Labelings
// ---------------------------------------------------------------------------

inline std::string serialize_labeling(const Tree& t, const Labeling& l,
                                      const std::vector<std::string>& alphabet) {
    if (!l.complete(t)) throw std::invalid_argument("cannot serialize an incomplete labeling");
    std::ostringstream out;
    if (t.kind == TreeKind::rooted) {
        for (int v = 0; v < t.n; ++v) out << v << " " << alphabet[l.node_labels[v]] << "\n";
    } else {
        for (int v = 0; v < t.n; ++v)
            for (size_t i = 0; i < t.adj[v].size(); ++i)
                out << v << " " << t.adj[v][i] << " " << alphabet[l.half_edges[v][i]] << "\n";
    }
    return out.str();
}

inline Labeling parse_labeling(const std::string& text, const Tree& t,
                               const std::vector<std::string>& alphabet) {
    detail::LabelInterner interner{alphabet};
    Labeling l = Labeling::empty_for(t);
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string s = detail::strip_comment(raw);
        if (s.empty()) continue;
        auto toks = detail::tokens(s);
        if (t.kind == TreeKind::rooted) {
            if (toks.size() != 2) throw ParseError(lineno, "expected '<node> <label>'");
            int v = detail::parse_int(toks[0], lineno, "node id");
            if (v < 0 || v >= t.n) throw ParseError(lineno, "node id out of range");
            l.node_labels[v] = interner.id_of(toks[1], lineno);
        } else {
            if (toks.size() != 3) throw ParseError(lineno, "expected '<node> <neighbor> <label>'");
            int v = detail::parse_int(toks[0], lineno, "node id");
            int u = detail::parse_int(toks[1], lineno, "node id");
            if (v < 0 || v >= t.n || u < 0 || u >= t.n)
                throw ParseError(lineno, "node id out of range");
            if (!std::binary_search(t.adj[v].begin(), t.adj[v].end(), u))
                throw ParseError(lineno, "no edge between " + std::to_string(v) + " and " +
                                             std::to_string(u));
            l.set(t, v, u, interner.id_of(toks[2], lineno));
        }
    }
    return l;
}

} // namespace lcl
