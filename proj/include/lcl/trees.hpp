#pragma once

// Concrete tree instances and labelings, plus the generators used by the
// classifier's test harness: complete trees, hairy paths, random regular
// trees, and the recursive layered gadget trees.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lcl/core.hpp"

namespace lcl {

enum class TreeKind { rooted, unrooted };

enum class NodeRole { none, front, central, rear };

struct NodeAnnotation {
    char layer_kind = 0; // 'R' or 'C', 0 = unannotated
    int layer_index = 0;
    NodeRole role = NodeRole::none;
};

struct Tree {
    TreeKind kind = TreeKind::unrooted;
    int n = 0;
    // rooted: (child, parent); unrooted: unordered endpoints as given
    std::vector<std::pair<int, int>> edges;
    std::vector<NodeAnnotation> annotations; // empty or size n

    // derived, filled by finalize()
    std::vector<std::vector<int>> adj;
    std::vector<int> parent;                 // rooted only, -1 at the root
    std::vector<std::vector<int>> children;  // rooted only
    int root = -1;

    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    int indegree(int v) const { return static_cast<int>(children[v].size()); }
    bool annotated() const { return !annotations.empty(); }

    // Builds adjacency and checks tree structure; throws on malformed input.
    void finalize() {
        if (n <= 0) throw std::invalid_argument("tree must have at least one node");
        adj.assign(n, {});
        parent.assign(n, -1);
        children.assign(n, {});
        std::vector<std::pair<int, int>> seen; // normalized edges for duplicate check
        seen.reserve(edges.size());
        for (auto [a, b] : edges) {
            if (a < 0 || a >= n || b < 0 || b >= n)
                throw std::invalid_argument("edge endpoint out of range: " + std::to_string(a) +
                                            "," + std::to_string(b));
            if (a == b) throw std::invalid_argument("self-loop at node " + std::to_string(a));
            seen.push_back({std::min(a, b), std::max(a, b)});
        }
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
            throw std::invalid_argument("duplicate edge");
        if (static_cast<int>(edges.size()) != n - 1)
            throw std::invalid_argument("a tree with " + std::to_string(n) + " nodes needs " +
                                        std::to_string(n - 1) + " edges, got " +
                                        std::to_string(edges.size()));
        for (auto [a, b] : edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        // connectivity (n-1 edges + connected => acyclic)
        std::vector<char> vis(n, 0);
        std::vector<int> stack{0};
        vis[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u : adj[v])
                if (!vis[u]) {
                    vis[u] = 1;
                    ++count;
                    stack.push_back(u);
                }
        }
        if (count != n) throw std::invalid_argument("tree is disconnected");
        if (kind == TreeKind::rooted) {
            std::vector<int> outdeg(n, 0);
            for (auto [c, p] : edges) {
                ++outdeg[c];
                if (outdeg[c] > 1)
                    throw std::invalid_argument("node " + std::to_string(c) +
                                                " has outdegree > 1");
                parent[c] = p;
                children[p].push_back(c);
            }
            root = -1;
            for (int v = 0; v < n; ++v)
                if (outdeg[v] == 0) {
                    if (root != -1) throw std::invalid_argument("multiple roots");
                    root = v;
                }
            if (root == -1) throw std::invalid_argument("no root found");
            for (auto& cs : children) std::sort(cs.begin(), cs.end());
        }
        for (auto& ns : adj) std::sort(ns.begin(), ns.end());
        if (!annotations.empty() && static_cast<int>(annotations.size()) != n)
            throw std::invalid_argument("annotation list does not cover all nodes");
    }

    int max_degree() const {
        int d = 0;
        for (int v = 0; v < n; ++v) d = std::max(d, degree(v));
        return d;
    }
    int max_indegree() const {
        int d = 0;
        for (int v = 0; v < n; ++v) d = std::max(d, indegree(v));
        return d;
    }
};

// A labeling of a tree: per-node labels (rooted) or per-half-edge labels
// (unrooted). Half-edge storage parallels Tree::adj.
struct Labeling {
    TreeKind kind = TreeKind::unrooted;
    std::vector<LabelId> node_labels;              // rooted; -1 = unassigned
    std::vector<std::vector<LabelId>> half_edges;  // unrooted; shape of adj; -1 = unassigned

    static Labeling empty_for(const Tree& t) {
        Labeling l;
        l.kind = t.kind;
        if (t.kind == TreeKind::rooted) {
            l.node_labels.assign(t.n, -1);
        } else {
            l.half_edges.resize(t.n);
            for (int v = 0; v < t.n; ++v) l.half_edges[v].assign(t.adj[v].size(), -1);
        }
        return l;
    }

    bool complete(const Tree& t) const {
        if (kind == TreeKind::rooted) {
            for (int v = 0; v < t.n; ++v)
                if (node_labels[v] < 0) return false;
        } else {
            for (int v = 0; v < t.n; ++v)
                for (LabelId x : half_edges[v])
                    if (x < 0) return false;
        }
        return true;
    }

    // unrooted accessors: label of half-edge (v, {v,u})
    LabelId get(const Tree& t, int v, int u) const {
        auto it = std::lower_bound(t.adj[v].begin(), t.adj[v].end(), u);
        return half_edges[v][it - t.adj[v].begin()];
    }
    void set(const Tree& t, int v, int u, LabelId x) {
        auto it = std::lower_bound(t.adj[v].begin(), t.adj[v].end(), u);
        half_edges[v][it - t.adj[v].begin()] = x;
    }
};

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace detail {

struct TreeBuild {
    std::vector<std::pair<int, int>> edges;
    std::vector<NodeAnnotation> annot;
    int next = 0;
    int fresh(NodeAnnotation a = {}) {
        annot.push_back(a);
        return next++;
    }
    // rooted convention: edge (child, parent)
    void link(int child, int parent) { edges.push_back({child, parent}); }
};

// Complete tree of height h where the root gets `root_branch` subtrees and
// every internal node below gets `branch` subtrees. Returns the root id.
inline int complete_subtree(TreeBuild& b, int height, int root_branch, int branch,
                            NodeAnnotation a) {
    int r = b.fresh(a);
    if (height == 0) return r;
    for (int i = 0; i < root_branch; ++i) {
        int c = complete_subtree(b, height - 1, branch, branch, a);
        b.link(c, r);
    }
    return r;
}

} // namespace detail

// Complete trees: rooted T_i branches delta at every internal node; unrooted
// T_i branches Delta-1 (T_i*: Delta at the root, Delta-1 below).
inline Tree complete_tree(TreeKind kind, int degree, int height, bool starred = false) {
    if (height < 0) throw std::invalid_argument("height must be >= 0");
    if (kind == TreeKind::rooted && starred)
        throw std::invalid_argument("rooted complete trees have no starred variant");
    detail::TreeBuild b;
    if (kind == TreeKind::rooted) {
        detail::complete_subtree(b, height, degree, degree, {});
    } else {
        int branch = degree - 1;
        detail::complete_subtree(b, height, starred ? degree : branch, branch, {});
    }
    Tree t;
    t.kind = kind;
    t.n = b.next;
    t.edges = std::move(b.edges);
    t.finalize();
    return t;
}

// Hairy path H_k: a (k+1)-node path padded with leaves so every path node
// has degree delta.
inline Tree hairy_path(int k, int delta) {
    if (k < 1 || delta < 3) throw std::invalid_argument("hairy_path requires k >= 1, delta >= 3");
    detail::TreeBuild b;
    std::vector<int> path;
    for (int i = 0; i <= k; ++i) path.push_back(b.fresh());
    for (int i = 0; i < k; ++i) b.edges.push_back({path[i], path[i + 1]});
    for (int i = 0; i <= k; ++i) {
        int have = (i == 0 || i == k) ? 1 : 2;
        if (i == 0 && k == 0) have = 0;
        for (int j = have; j < delta; ++j) {
            int leaf = b.fresh();
            b.edges.push_back({leaf, path[i]});
        }
    }
    Tree t;
    t.kind = TreeKind::unrooted;
    t.n = b.next;
    t.edges = std::move(b.edges);
    t.finalize();
    return t;
}

// Random tree where every internal node has full degree (unrooted) or full
// indegree (rooted); grows by expanding a random leaf until n_target is
// reached. Deterministic for a fixed seed.
inline Tree random_regular_tree(int n_target, TreeKind kind, int degree, std::uint64_t seed) {
    if (n_target < 1) throw std::invalid_argument("n_target must be >= 1");
    std::mt19937_64 rng(seed);
    detail::TreeBuild b;
    int root = b.fresh();
    std::vector<int> leaves{root};
    bool root_fresh = true;
    while (b.next < n_target && !leaves.empty()) {
        std::uniform_int_distribution<size_t> pick(0, leaves.size() - 1);
        size_t idx = pick(rng);
        int v = leaves[idx];
        leaves[idx] = leaves.back();
        leaves.pop_back();
        int width = (kind == TreeKind::rooted) ? degree
                                               : (root_fresh && v == root ? degree : degree - 1);
        for (int i = 0; i < width; ++i) {
            int c = b.fresh();
            b.link(c, v);
            leaves.push_back(c);
        }
        root_fresh = false;
    }
    Tree t;
    t.kind = kind;
    t.n = b.next;
    t.edges = std::move(b.edges);
    t.finalize();
    return t;
}

// Path length for the layered gadget trees; linear in the round parameter t
// with enough slack that central nodes always exist.
inline int lower_bound_path_length(int t, int sigma_size) {
    return 10 * t + sigma_size * sigma_size + 10;
}

namespace detail {

// Unrooted gadgets. Layer (R,i) pieces are complete trees of height
// gamma_hat; layer (C,i) pieces are s-node paths with rake gadgets of the
// same level attached at every position.
struct UnrootedGadget {
    TreeBuild b;
    int delta, gamma_hat, s, t;

    int rake(int level) { // G_{R,level}, returns root
        NodeAnnotation a{'R', level, NodeRole::none};
        if (level == 1) return complete_subtree(b, gamma_hat, delta - 1, delta - 1, a);
        int r = rake_skeleton(level, gamma_hat, delta - 1, a);
        return r;
    }

    int rake_star(int level) { // G_{R,level}^*
        NodeAnnotation a{'R', level, NodeRole::none};
        if (level == 1) return complete_subtree(b, gamma_hat, delta, delta - 1, a);
        return rake_skeleton(level, gamma_hat, delta, a);
    }

    // T_gamma (or T_gamma^*) skeleton whose leaves each receive delta-1
    // copies of G_{C,level-1}.
    int rake_skeleton(int level, int height, int root_branch, NodeAnnotation a) {
        int r = b.fresh(a);
        if (height == 0) {
            for (int i = 0; i < delta - 1; ++i) b.link(compress(level - 1), r);
            return r;
        }
        for (int i = 0; i < root_branch; ++i)
            b.link(rake_skeleton(level, height - 1, delta - 1, a), r);
        return r;
    }

    int compress(int level) { // G_{C,level}, returns v_1 (the attachment end)
        std::vector<int> path;
        for (int j = 1; j <= s; ++j) {
            NodeRole role = (j <= t) ? NodeRole::front
                                     : (j <= s - t ? NodeRole::central : NodeRole::rear);
            path.push_back(b.fresh({'C', level, role}));
        }
        for (int j = 0; j + 1 < s; ++j) b.edges.push_back({path[j], path[j + 1]});
        for (int j = 0; j < s; ++j) {
            int copies = (j == s - 1) ? delta - 1 : delta - 2;
            for (int c = 0; c < copies; ++c) b.link(rake(level), path[j]);
        }
        return path[0];
    }
};

// Rooted gadgets; edges are oriented child -> parent throughout.
struct RootedGadget {
    TreeBuild b;
    int delta, gamma_hat, s, t;

    int rake(int level) { // G_{R,level}, returns root of its T_gamma
        NodeAnnotation a{'R', level, NodeRole::none};
        return rake_rec(level, gamma_hat, a);
    }

    int rake_rec(int level, int height, NodeAnnotation a) {
        int r = b.fresh(a);
        if (height == 0) {
            if (level >= 2)
                for (int i = 0; i < delta; ++i) b.link(compress(level - 1, false), r);
            return r;
        }
        for (int i = 0; i < delta; ++i) b.link(rake_rec(level, height - 1, a), r);
        return r;
    }

    // G_{C,level} (full=true appends delta copies at v_s) or the chained
    // variant with delta-1 copies at v_s. Returns (v_1, v_s).
    std::pair<int, int> compress_path(int level, bool full) {
        std::vector<int> path;
        for (int j = 1; j <= s; ++j) {
            NodeRole role = (j <= t) ? NodeRole::front
                                     : (j <= s - t ? NodeRole::central : NodeRole::rear);
            path.push_back(b.fresh({'C', level, role}));
        }
        for (int j = 0; j + 1 < s; ++j) b.link(path[j + 1], path[j]); // v_{j+1} -> v_j
        for (int j = 0; j < s; ++j) {
            int copies = (j == s - 1) ? (full ? delta : delta - 1) : delta - 1;
            for (int c = 0; c < copies; ++c) b.link(rake(level), path[j]);
        }
        return {path.front(), path.back()};
    }

    int compress(int level, bool full) { return compress_path(level, full).first; }
};

} // namespace detail

// Unrooted layered gadget: the tree G_{R,k+1}^* built from complete trees of
// height gamma_hat and s-node compress paths, with layer and role annotations.
inline Tree lower_bound_tree_unrooted(int delta, int k, int t, int gamma_hat, int s) {
    if (k < 1 || t < 1 || delta < 3 || gamma_hat < 1 || s < 2 * t + 1)
        throw std::invalid_argument("lower_bound_tree_unrooted: bad parameters");
    detail::UnrootedGadget g{{}, delta, gamma_hat, s, t};
    g.rake_star(k + 1);
    Tree tr;
    tr.kind = TreeKind::unrooted;
    tr.n = g.b.next;
    tr.edges = std::move(g.b.edges);
    tr.annotations = std::move(g.b.annot);
    tr.finalize();
    return tr;
}

// Rooted layered gadget: the chained graph built from the compress gadgets
// with delta-1 copies at the path tail, feeding the top rake tree.
inline Tree lower_bound_tree_rooted(int delta, int k, int t, int gamma_hat, int s) {
    if (k < 1 || t < 1 || delta < 1 || gamma_hat < 1 || s < 2 * t + 1)
        throw std::invalid_argument("lower_bound_tree_rooted: bad parameters");
    detail::RootedGadget g{{}, delta, gamma_hat, s, t};
    std::vector<std::pair<int, int>> cores; // (v_1, v_s) per chained gadget
    for (int i = 1; i <= k; ++i) cores.push_back(g.compress_path(i, false));
    int r = g.rake(k + 1);
    for (int i = 0; i + 1 < k; ++i) g.b.link(cores[i + 1].first, cores[i].second);
    g.b.link(r, cores[k - 1].second);
    Tree tr;
    tr.kind = TreeKind::rooted;
    tr.n = g.b.next;
    tr.edges = std::move(g.b.edges);
    tr.annotations = std::move(g.b.annot);
    tr.finalize();
    return tr;
}

} // namespace lcl
