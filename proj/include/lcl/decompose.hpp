#pragma once

// Rake-and-compress layer decompositions for rooted and unrooted trees.
//
// Each iteration performs `gamma` rake rounds and one compress. Rake removes
// leaves (rooted: indegree-0 nodes; unrooted: degree<=1 nodes, never both
// endpoints of a surviving edge in the same round). Compress removes maximal
// chains of pass-through nodes of length >= ell, then breaks chains longer
// than 2*ell by promoting an (ell,2*ell)-independent set into the next rake
// layer, so every compress component is a path of [ell, 2*ell] nodes whose
// endpoints attach to higher layers.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcl/trees.hpp"

namespace lcl {

struct Decomposition {
    int gamma = 0, ell = 0, L = 0;
    std::vector<char> layer_kind; // 'R' or 'C'
    std::vector<int> layer_index; // 1..L
    std::vector<int> component;   // id within (kind, layer)
    std::vector<int> removed_iter; // iteration of the raw process

    int rank(int v) const {
        return layer_kind[v] == 'R' ? 2 * layer_index[v] - 1 : 2 * layer_index[v];
    }
};

// Positions (0-based) of the independent set splitting a c-node path into
// pieces of [ell, 2*ell] nodes; empty when c <= 2*ell.
inline std::vector<int> path_independent_set(int c, int ell) {
    if (c <= 2 * ell) return {};
    int m = (c - 2 * ell + 2 * ell) / (2 * ell + 1); // ceil((c-2ell)/(2ell+1))
    int total = c - m, parts = m + 1;
    std::vector<int> sizes(parts, total / parts);
    for (int i = 0; i < total % parts; ++i) ++sizes[i];
    std::vector<int> pos;
    int at = 0;
    for (int i = 0; i < m; ++i) {
        at += sizes[i];
        pos.push_back(at);
        at += 1;
    }
    return pos;
}

struct ChosenParameters {
    long long gamma = 1;
    int L = 1;
};

namespace detail {

inline bool layer_inequality(long long n, long long gamma, int ell, int L) {
    long double lhs = static_cast<long double>(n);
    long double ratio = static_cast<long double>(2 * ell) / static_cast<long double>(gamma + 2 * ell);
    for (int i = 1; i < L; ++i) lhs *= ratio;
    return lhs <= static_cast<long double>(gamma);
}

} // namespace detail

// Smallest gamma completing within L = k layers.
inline ChosenParameters choose_parameters_finite(long long n, int k, int ell) {
    if (n < 1 || k < 1 || ell < 1) throw std::invalid_argument("choose_parameters_finite");
    long long lo = 1, hi = std::max<long long>(n, 1);
    while (!detail::layer_inequality(n, hi, ell, k)) hi *= 2;
    while (lo < hi) {
        long long mid = lo + (hi - lo) / 2;
        if (detail::layer_inequality(n, mid, ell, k)) hi = mid;
        else lo = mid + 1;
    }
    return {lo, k};
}

// gamma = 1; smallest L satisfying the layer inequality.
inline ChosenParameters choose_parameters_logarithmic(long long n, int ell) {
    if (n < 1 || ell < 1) throw std::invalid_argument("choose_parameters_logarithmic");
    long double x = static_cast<long double>(n);
    long double ratio = static_cast<long double>(2 * ell) / static_cast<long double>(1 + 2 * ell);
    int L = 1;
    while (x > 1.0L) {
        x *= ratio;
        ++L;
    }
    return {1, L};
}

// ---------------------------------------------------------------------------
// Rooted decomposition
// ---------------------------------------------------------------------------

inline Decomposition decompose_rooted(const Tree& t, int gamma, int ell) {
    if (t.kind != TreeKind::rooted) throw std::invalid_argument("decompose_rooted: tree not rooted");
    if (gamma < 1 || ell < 1) throw std::invalid_argument("decompose_rooted: gamma, ell >= 1");
    const int n = t.n;
    Decomposition d;
    d.gamma = gamma;
    d.ell = ell;
    d.layer_kind.assign(n, 0);
    d.layer_index.assign(n, 0);
    d.removed_iter.assign(n, 0);

    std::vector<int> indeg(n, 0);
    for (int v = 0; v < n; ++v) indeg[v] = t.indegree(v);
    std::vector<char> present(n, 1);
    int alive = n;

    std::vector<int> frontier; // candidates with indegree 0 (may be stale)
    std::vector<char> queued(n, 0);
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) {
            frontier.push_back(v);
            queued[v] = 1;
        }

    int iter = 0;
    while (alive > 0) {
        ++iter;
        for (int round = 0; round < gamma && alive > 0; ++round) {
            std::vector<int> leaves;
            leaves.swap(frontier);
            for (int v : leaves) queued[v] = 0;
            for (int v : leaves) {
                if (!present[v] || indeg[v] != 0) continue; // stale
                present[v] = 0;
                --alive;
                d.layer_kind[v] = 'R';
                d.layer_index[v] = iter;
                d.removed_iter[v] = iter;
                int p = t.parent[v];
                if (p >= 0 && present[p]) {
                    if (--indeg[p] == 0 && !queued[p]) {
                        frontier.push_back(p);
                        queued[p] = 1;
                    }
                }
            }
        }
        if (alive == 0) break;

        // compress: maximal chains of present nodes with indegree 1 and a
        // present parent, of length >= ell; chains found on a snapshot, then
        // removed together
        std::vector<char> pass(n, 0);
        for (int v = 0; v < n; ++v)
            pass[v] = present[v] && indeg[v] == 1 && t.parent[v] >= 0 && present[t.parent[v]];
        auto present_child = [&](int v) {
            for (int c : t.children[v])
                if (present[c]) return c;
            return -1;
        };
        for (int v = 0; v < n; ++v) {
            if (!pass[v] || pass[t.parent[v]]) continue; // only chain tops
            std::vector<int> chain{v};
            int cur = present_child(v);
            while (cur >= 0 && pass[cur]) {
                chain.push_back(cur);
                cur = present_child(cur);
            }
            int c = static_cast<int>(chain.size());
            if (c < ell) continue;
            auto promoted = path_independent_set(c, ell);
            size_t pi = 0;
            for (int j = 0; j < c; ++j) {
                int u = chain[j];
                present[u] = 0;
                --alive;
                d.removed_iter[u] = iter;
                if (pi < promoted.size() && promoted[pi] == j) {
                    d.layer_kind[u] = 'R';
                    d.layer_index[u] = iter + 1;
                    ++pi;
                } else {
                    d.layer_kind[u] = 'C';
                    d.layer_index[u] = iter;
                }
            }
            int top_parent = t.parent[chain.front()];
            if (top_parent >= 0 && present[top_parent]) {
                if (--indeg[top_parent] == 0 && !queued[top_parent]) {
                    frontier.push_back(top_parent);
                    queued[top_parent] = 1;
                }
            }
        }
    }
    d.L = iter;

    // component ids within each (kind, layer), by smallest node id
    d.component.assign(n, -1);
    int next_comp = 0;
    for (int v = 0; v < n; ++v) {
        if (d.component[v] >= 0) continue;
        int id = next_comp++;
        std::vector<int> stack{v};
        d.component[v] = id;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int u : t.adj[x])
                if (d.component[u] < 0 && d.layer_kind[u] == d.layer_kind[v] &&
                    d.layer_index[u] == d.layer_index[v]) {
                    d.component[u] = id;
                    stack.push_back(u);
                }
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// Unrooted decomposition
// ---------------------------------------------------------------------------

inline Decomposition decompose_unrooted(const Tree& t, int gamma, int ell) {
    if (t.kind != TreeKind::unrooted)
        throw std::invalid_argument("decompose_unrooted: tree not unrooted");
    if (gamma < 1 || ell < 1) throw std::invalid_argument("decompose_unrooted: gamma, ell >= 1");
    const int n = t.n;
    Decomposition d;
    d.gamma = gamma;
    d.ell = ell;
    d.layer_kind.assign(n, 0);
    d.layer_index.assign(n, 0);
    d.removed_iter.assign(n, 0);

    std::vector<int> deg(n, 0);
    for (int v = 0; v < n; ++v) deg[v] = t.degree(v);
    std::vector<char> present(n, 1);
    int alive = n;

    std::vector<int> frontier;
    std::vector<char> queued(n, 0);
    for (int v = 0; v < n; ++v)
        if (deg[v] <= 1) {
            frontier.push_back(v);
            queued[v] = 1;
        }

    auto present_neighbor = [&](int v) {
        for (int u : t.adj[v])
            if (present[u]) return u;
        return -1;
    };

    int iter = 0;
    std::vector<char> eligible(n, 0);
    while (alive > 0) {
        ++iter;
        for (int round = 0; round < gamma && alive > 0; ++round) {
            std::vector<int> cands;
            cands.swap(frontier);
            for (int v : cands) queued[v] = 0;
            std::vector<int> live;
            for (int v : cands)
                if (present[v] && deg[v] <= 1) {
                    live.push_back(v);
                    eligible[v] = 1;
                }
            // decide on the snapshot, then apply; keeps adjacent leaves from
            // being removed in the same round (the larger id survives)
            std::vector<std::pair<int, int>> removals; // (node, snapshot neighbor)
            std::vector<int> survivors;
            for (int v : live) {
                int u = deg[v] == 1 ? present_neighbor(v) : -1;
                if (u >= 0 && eligible[u] && v > u) {
                    survivors.push_back(v);
                    continue;
                }
                removals.push_back({v, u});
            }
            for (auto [v, u] : removals) {
                present[v] = 0;
                --alive;
                d.layer_kind[v] = 'R';
                d.layer_index[v] = iter;
                d.removed_iter[v] = iter;
            }
            for (auto [v, u] : removals) {
                if (u >= 0 && present[u]) {
                    if (--deg[u] <= 1 && !queued[u] && !eligible[u]) {
                        frontier.push_back(u);
                        queued[u] = 1;
                    }
                }
            }
            for (int v : live) eligible[v] = 0;
            for (int v : survivors)
                if (!queued[v]) {
                    frontier.push_back(v);
                    queued[v] = 1;
                }
        }
        if (alive == 0) break;

        // compress: maximal chains of present degree-2 nodes of length >= ell;
        // chains found on a snapshot, then removed together
        std::vector<char> pass(n, 0);
        for (int v = 0; v < n; ++v) pass[v] = present[v] && deg[v] == 2;
        std::vector<char> visited(n, 0);
        for (int v = 0; v < n; ++v) {
            if (!pass[v] || visited[v]) continue;
            int qn = 0;
            for (int u : t.adj[v])
                if (pass[u]) ++qn;
            if (qn >= 2) continue; // interior, reached from an endpoint
            std::vector<int> chain{v};
            visited[v] = 1;
            int prev = -1, cur = v;
            for (;;) {
                int nxt = -1;
                for (int u : t.adj[cur])
                    if (u != prev && pass[u]) {
                        nxt = u;
                        break;
                    }
                if (nxt < 0) break;
                visited[nxt] = 1;
                chain.push_back(nxt);
                prev = cur;
                cur = nxt;
            }
            int c = static_cast<int>(chain.size());
            if (c < ell) continue;
            auto promoted = path_independent_set(c, ell);
            size_t pi = 0;
            for (int j = 0; j < c; ++j) {
                int u = chain[j];
                present[u] = 0;
                --alive;
                d.removed_iter[u] = iter;
                if (pi < promoted.size() && promoted[pi] == j) {
                    d.layer_kind[u] = 'R';
                    d.layer_index[u] = iter + 1;
                    ++pi;
                } else {
                    d.layer_kind[u] = 'C';
                    d.layer_index[u] = iter;
                }
            }
            std::vector<int> ends{chain.front()};
            if (chain.size() > 1) ends.push_back(chain.back());
            for (int endpoint : ends) {
                for (int u : t.adj[endpoint])
                    if (present[u]) {
                        if (--deg[u] <= 1 && !queued[u]) {
                            frontier.push_back(u);
                            queued[u] = 1;
                        }
                    }
            }
        }
    }
    d.L = iter;

    d.component.assign(n, -1);
    int next_comp = 0;
    for (int v = 0; v < n; ++v) {
        if (d.component[v] >= 0) continue;
        int id = next_comp++;
        std::vector<int> stack{v};
        d.component[v] = id;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int u : t.adj[x])
                if (d.component[u] < 0 && d.layer_kind[u] == d.layer_kind[v] &&
                    d.layer_index[u] == d.layer_index[v]) {
                    d.component[u] = id;
                    stack.push_back(u);
                }
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// Validation against the layer requirements
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::vector<int>> group_components(const Tree& t, const Decomposition& d) {
    std::vector<std::vector<int>> comps;
    std::vector<int> comp_of(t.n, -1);
    for (int v = 0; v < t.n; ++v) {
        if (comp_of[v] >= 0) continue;
        int id = static_cast<int>(comps.size());
        comps.push_back({});
        std::vector<int> stack{v};
        comp_of[v] = id;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            comps[id].push_back(x);
            for (int u : t.adj[x])
                if (comp_of[u] < 0 && d.layer_kind[u] == d.layer_kind[v] &&
                    d.layer_index[u] == d.layer_index[v]) {
                    comp_of[u] = id;
                    stack.push_back(u);
                }
        }
        std::sort(comps[id].begin(), comps[id].end());
    }
    return comps;
}

} // namespace detail

inline std::vector<std::string> validate_decomposition(const Tree& t, const Decomposition& d) {
    std::vector<std::string> diags;
    const int n = t.n;
    auto describe = [](const std::vector<int>& comp) {
        std::ostringstream s;
        s << "component {";
        for (size_t i = 0; i < std::min<size_t>(comp.size(), 4); ++i) s << (i ? "," : "") << comp[i];
        if (comp.size() > 4) s << ",...";
        s << "}";
        return s.str();
    };
    for (int v = 0; v < n; ++v) {
        if (d.layer_kind[v] != 'R' && d.layer_kind[v] != 'C') {
            diags.push_back("node " + std::to_string(v) + " has no layer tag");
            return diags;
        }
        if (d.layer_index[v] < 1 || d.layer_index[v] > d.L)
            diags.push_back("node " + std::to_string(v) + " has layer index out of range");
        if (d.layer_kind[v] == 'C' && d.layer_index[v] >= d.L)
            diags.push_back("node " + std::to_string(v) + " is in a compress layer at index " +
                            std::to_string(d.layer_index[v]) + " >= L");
    }
    if (!diags.empty()) return diags;

    const bool rooted = t.kind == TreeKind::rooted;
    for (const auto& comp : detail::group_components(t, d)) {
        int v0 = comp[0];
        char kind = d.layer_kind[v0];
        int rank = d.rank(v0);
        std::vector<char> in_comp(n, 0);
        for (int v : comp) in_comp[v] = 1;

        if (kind == 'R') {
            if (rooted) {
                int root = -1;
                bool multiple = false;
                for (int v : comp) {
                    int p = t.parent[v];
                    if (p < 0 || !in_comp[p]) {
                        if (root >= 0) multiple = true;
                        root = v;
                    }
                    for (int c : t.children[v])
                        if (!in_comp[c] && d.rank(c) > rank)
                            diags.push_back("rake " + describe(comp) + ": node " + std::to_string(v) +
                                            " has an in-neighbor in a higher layer");
                }
                if (root < 0 || multiple) {
                    diags.push_back("rake " + describe(comp) + ": not a single rooted tree");
                    continue;
                }
                // height from the root within the component
                std::vector<std::pair<int, int>> stack{{root, 0}};
                while (!stack.empty()) {
                    auto [v, depth] = stack.back();
                    stack.pop_back();
                    if (depth > d.gamma - 1) {
                        diags.push_back("rake " + describe(comp) + ": height exceeds gamma-1");
                        break;
                    }
                    for (int c : t.children[v])
                        if (in_comp[c]) stack.push_back({c, depth + 1});
                }
            } else {
                int attach_node = -1;
                bool bad = false;
                for (int v : comp) {
                    int higher = 0;
                    for (int u : t.adj[v])
                        if (!in_comp[u] && d.rank(u) > rank) ++higher;
                    if (higher == 0) continue;
                    if (higher > 1 || attach_node >= 0) bad = true;
                    attach_node = v;
                }
                if (bad) {
                    diags.push_back("rake " + describe(comp) +
                                    ": more than one attachment to higher layers");
                    continue;
                }
                // height from the attachment node, or the best root if unattached
                int root = attach_node;
                if (root < 0) {
                    // farthest node from comp[0], then farthest from that: diameter
                    auto bfs_far = [&](int s) {
                        std::vector<int> dist(n, -1);
                        std::vector<int> queue{s};
                        dist[s] = 0;
                        int far = s;
                        for (size_t qi = 0; qi < queue.size(); ++qi) {
                            int v = queue[qi];
                            if (dist[v] > dist[far]) far = v;
                            for (int u : t.adj[v])
                                if (in_comp[u] && dist[u] < 0) {
                                    dist[u] = dist[v] + 1;
                                    queue.push_back(u);
                                }
                        }
                        return std::pair<int, int>{far, dist[far]};
                    };
                    auto [a, da] = bfs_far(comp[0]);
                    auto [b, diam] = bfs_far(a);
                    if ((diam + 1) / 2 > d.gamma - 1)
                        diags.push_back("rake " + describe(comp) + ": height exceeds gamma-1");
                    continue;
                }
                std::vector<int> dist(n, -1);
                std::vector<int> queue{root};
                dist[root] = 0;
                for (size_t qi = 0; qi < queue.size(); ++qi) {
                    int v = queue[qi];
                    if (dist[v] > d.gamma - 1) {
                        diags.push_back("rake " + describe(comp) + ": height exceeds gamma-1");
                        break;
                    }
                    for (int u : t.adj[v])
                        if (in_comp[u] && dist[u] < 0) {
                            dist[u] = dist[v] + 1;
                            queue.push_back(u);
                        }
                }
            }
        } else { // compress component
            int s = static_cast<int>(comp.size());
            bool path_ok = true;
            int endpoints = 0;
            for (int v : comp) {
                int internal = 0;
                for (int u : t.adj[v])
                    if (in_comp[u]) ++internal;
                if (internal > 2) path_ok = false;
                if (internal <= 1) ++endpoints;
            }
            if (!path_ok || (s >= 2 && endpoints != 2) || (s == 1 && endpoints != 1)) {
                diags.push_back("compress " + describe(comp) + ": not a path");
                continue;
            }
            if (s < d.ell || s > 2 * d.ell)
                diags.push_back("compress " + describe(comp) + ": size " + std::to_string(s) +
                                " outside [ell, 2*ell]");
            if (rooted) {
                int top = -1, bottom = -1;
                for (int v : comp) {
                    int p = t.parent[v];
                    if (p < 0 || !in_comp[p]) top = v;
                    bool child_in = false;
                    for (int c : t.children[v])
                        if (in_comp[c]) child_in = true;
                    if (!child_in) bottom = v;
                }
                int tp = top >= 0 ? t.parent[top] : -1;
                if (top < 0 || tp < 0 || d.rank(tp) <= rank)
                    diags.push_back("compress " + describe(comp) +
                                    ": head is not anchored to a higher layer");
                int higher_children = 0;
                for (int c : t.children[bottom])
                    if (!in_comp[c] && d.rank(c) > rank) ++higher_children;
                if (higher_children != 1)
                    diags.push_back("compress " + describe(comp) +
                                    ": tail is not anchored to exactly one higher layer node");
                for (int v : comp) {
                    for (int c : t.children[v])
                        if (!in_comp[c] && d.rank(c) > rank && v != bottom)
                            diags.push_back("compress " + describe(comp) + ": interior node " +
                                            std::to_string(v) + " touches a higher layer");
                    int p = t.parent[v];
                    if (v != top && p >= 0 && !in_comp[p])
                        diags.push_back("compress " + describe(comp) + ": broken path at node " +
                                        std::to_string(v));
                }
            } else {
                std::vector<std::pair<int, int>> incidences; // (comp node, higher neighbor)
                for (int v : comp)
                    for (int u : t.adj[v])
                        if (!in_comp[u] && d.rank(u) > rank) incidences.push_back({v, u});
                if (incidences.size() != 2) {
                    diags.push_back("compress " + describe(comp) + ": expected 2 higher-layer "
                                    "attachments, found " + std::to_string(incidences.size()));
                    continue;
                }
                if (incidences[0].second == incidences[1].second)
                    diags.push_back("compress " + describe(comp) +
                                    ": both attachments reach the same node");
                for (auto [v, u] : incidences) {
                    int internal = 0;
                    for (int w : t.adj[v])
                        if (in_comp[w]) ++internal;
                    if (internal > 1)
                        diags.push_back("compress " + describe(comp) + ": attachment at node " +
                                        std::to_string(v) + " is not a path endpoint");
                }
            }
        }
    }
    return diags;
}

inline std::string serialize_decomposition(const Decomposition& d) {
    std::ostringstream out;
    for (size_t v = 0; v < d.layer_kind.size(); ++v)
        out << v << " " << d.layer_kind[v] << " " << d.layer_index[v] << " " << d.component[v]
            << "\n";
    return out.str();
}

} // namespace lcl
