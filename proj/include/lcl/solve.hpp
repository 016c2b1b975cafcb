#pragma once

// Executes a classification certificate on a concrete tree, validates
// labelings, and provides an independent exhaustive oracle.
//
// solve_with_certificate labels layer by layer, top of the decomposition
// first. Rake components extend an already-fixed boundary label greedily
// (the trimming property guarantees a compatible configuration); compress
// paths are completed by finding a walk of the exact path length inside the
// layer's automaton (the flexibility property guarantees one).
//
// The brute-force oracle runs a feasibility sweep over the tree (bottom-up
// label sets with multiset matching at constrained nodes) followed by a
// deterministic top-down reconstruction; it shares no code with the
// classifier or the certificate executor.

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcl/automaton.hpp"
#include "lcl/classify.hpp"
#include "lcl/core.hpp"
#include "lcl/decompose.hpp"
#include "lcl/trees.hpp"

namespace lcl {

// ---------------------------------------------------------------------------
// Labeling validation
// ---------------------------------------------------------------------------

inline std::string multiset_text(const LabelMultiset& m, const std::vector<std::string>& alphabet) {
    std::string s = "{";
    for (size_t i = 0; i < m.entries.size(); ++i) s += (i ? "," : "") + alphabet[m.entries[i]];
    return s + "}";
}

inline std::vector<std::string> validate_labeling(const UnrootedProblem& p, const Tree& t,
                                                  const Labeling& l) {
    if (!l.complete(t)) throw std::invalid_argument("labeling is incomplete");
    std::vector<std::string> violations;
    for (int v = 0; v < t.n; ++v) {
        if (t.degree(v) != p.delta) continue;
        LabelMultiset cfg(l.half_edges[v]);
        if (!std::binary_search(p.node_configs.begin(), p.node_configs.end(), cfg))
            violations.push_back("node " + std::to_string(v) + " configuration " +
                                 multiset_text(cfg, p.alphabet) + " not permitted");
    }
    for (auto [a, b] : t.edges) {
        LabelMultiset cfg({l.get(t, a, b), l.get(t, b, a)});
        if (!std::binary_search(p.edge_configs.begin(), p.edge_configs.end(), cfg))
            violations.push_back("edge " + std::to_string(std::min(a, b)) + " " +
                                 std::to_string(std::max(a, b)) + " configuration " +
                                 multiset_text(cfg, p.alphabet) + " not permitted");
    }
    return violations;
}

inline std::vector<std::string> validate_labeling(const RootedProblem& p, const Tree& t,
                                                  const Labeling& l) {
    if (!l.complete(t)) throw std::invalid_argument("labeling is incomplete");
    std::vector<std::string> violations;
    for (int v = 0; v < t.n; ++v) {
        if (t.indegree(v) != p.delta) continue;
        std::vector<LabelId> kids;
        for (int c : t.children[v]) kids.push_back(l.node_labels[c]);
        RootedConfig cfg{l.node_labels[v], LabelMultiset(std::move(kids))};
        if (!std::binary_search(p.configs.begin(), p.configs.end(), cfg))
            violations.push_back("node " + std::to_string(v) + " configuration " +
                                 p.alphabet[cfg.label] + ":" +
                                 multiset_text(cfg.children, p.alphabet) + " not permitted");
    }
    return violations;
}

// ---------------------------------------------------------------------------
// Certificate execution
// ---------------------------------------------------------------------------

struct SolveInfo {
    int gamma = 0, ell = 0, L = 0;
    long long analytic_rounds = 0; // (gamma + ell) * L
    // provenance: decomposition layer rank each node was processed under
    std::vector<int> processed_rank;
};

namespace detail {

// Walk of exactly `len` steps from state `from` to state `to`; returns the
// state sequence (len+1 entries) or empty if none exists.
inline std::vector<int> exact_walk(const FlexAutomaton& m, int from, int to, int len) {
    int n = m.state_count();
    std::vector<std::vector<char>> reach(len + 1, std::vector<char>(n, 0));
    reach[0][from] = 1;
    for (int step = 1; step <= len; ++step)
        for (int v = 0; v < n; ++v)
            if (reach[step - 1][v])
                for (int u : m.out[v]) reach[step][u] = 1;
    if (!reach[len][to]) return {};
    std::vector<int> walk(len + 1);
    walk[len] = to;
    for (int step = len; step > 0; --step) {
        int cur = walk[step];
        int pick = -1;
        for (int v = 0; v < n && pick < 0; ++v) {
            if (!reach[step - 1][v]) continue;
            for (int u : m.out[v])
                if (u == cur) {
                    pick = v;
                    break;
                }
        }
        walk[step - 1] = pick;
    }
    return walk;
}

struct LayerComponents {
    // components grouped by (kind, layer); each sorted by node id
    std::vector<std::vector<std::vector<int>>> rake;     // [layer-1] -> components
    std::vector<std::vector<std::vector<int>>> compress; // [layer-1]
};

inline LayerComponents group_by_layer(const Tree& t, const Decomposition& d) {
    LayerComponents lc;
    lc.rake.resize(d.L);
    lc.compress.resize(d.L);
    std::vector<char> seen(t.n, 0);
    for (int v = 0; v < t.n; ++v) {
        if (seen[v]) continue;
        std::vector<int> comp;
        std::vector<int> stack{v};
        seen[v] = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            comp.push_back(x);
            for (int u : t.adj[x])
                if (!seen[u] && d.layer_kind[u] == d.layer_kind[v] &&
                    d.layer_index[u] == d.layer_index[v]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
        }
        std::sort(comp.begin(), comp.end());
        if (d.layer_kind[v] == 'R') lc.rake[d.layer_index[v] - 1].push_back(std::move(comp));
        else lc.compress[d.layer_index[v] - 1].push_back(std::move(comp));
    }
    return lc;
}

} // namespace detail

inline std::pair<Labeling, SolveInfo> solve_with_certificate(const RootedProblem& problem,
                                                             const Tree& tree,
                                                             const GoodSequence& seq) {
    if (tree.kind != TreeKind::rooted)
        throw std::invalid_argument("solve_with_certificate: rooted problem needs a rooted tree");
    if (tree.max_indegree() > problem.delta)
        throw std::invalid_argument("tree indegree exceeds the problem's delta");
    if (!seq.rooted || seq.r_layers.empty())
        throw std::invalid_argument("certificate does not fit the problem");

    int ell = 1;
    for (int f : seq.flexibility) ell = std::max(ell, f);

    Decomposition deco;
    int gamma;
    if (seq.stabilized) {
        gamma = 1;
        deco = decompose_rooted(tree, gamma, ell);
    } else {
        int k = seq.length();
        gamma = static_cast<int>(
            std::min<long long>(choose_parameters_finite(tree.n, k, ell).gamma, tree.n));
        deco = decompose_rooted(tree, gamma, ell);
        while (deco.L > k) {
            gamma = static_cast<int>(std::min<long long>(2LL * gamma, tree.n));
            deco = decompose_rooted(tree, gamma, ell);
        }
    }
    const int L = deco.L;

    auto r_set = [&](int layer) {
        size_t idx = std::min<size_t>(layer, seq.r_layers.size()) - 1;
        return seq.r_layers[idx];
    };
    auto c_set = [&](int layer) {
        size_t idx = std::min<size_t>(layer, seq.c_layers.size()) - 1;
        return seq.c_layers[idx];
    };

    // layer automata for compress completion, built lazily
    std::vector<std::optional<FlexAutomaton>> automata(L + 1);
    auto automaton_for = [&](int layer) -> const FlexAutomaton& {
        if (!automata[layer]) automata[layer] = build_rooted_automaton(problem, r_set(layer));
        return *automata[layer];
    };

    Labeling lab = Labeling::empty_for(tree);
    SolveInfo info;
    info.gamma = gamma;
    info.ell = ell;
    info.L = L;
    info.analytic_rounds = static_cast<long long>(gamma + ell) * L;
    info.processed_rank.assign(tree.n, 0);

    auto comps = detail::group_by_layer(tree, deco);

    // first configuration with the given head whose children all lie in `allowed`
    auto pick_config = [&](LabelId head, LabelSet allowed,
                           LabelId must_contain) -> const RootedConfig* {
        for (const auto& cfg : problem.configs) {
            if (head >= 0 && cfg.label != head) continue;
            if (head < 0 && !set_has(allowed, cfg.label)) continue;
            if ((cfg.children.label_set() & ~allowed) != 0) continue;
            if (must_contain >= 0 && !cfg.children.contains(must_contain)) continue;
            return &cfg;
        }
        return nullptr;
    };

    // fix `v`'s configuration given its already-fixed label; assigns children
    auto extend_down = [&](int v, LabelSet allowed, int rank) {
        info.processed_rank[v] = rank;
        if (tree.indegree(v) == 0) return;
        const RootedConfig* cfg = nullptr;
        if (tree.indegree(v) == problem.delta) {
            cfg = pick_config(lab.node_labels[v], allowed, -1);
            if (!cfg) throw std::runtime_error("internal completion failure at node " +
                                               std::to_string(v));
            for (size_t i = 0; i < tree.children[v].size(); ++i)
                lab.node_labels[tree.children[v][i]] = cfg->children.entries[i];
        } else {
            // unconstrained node: keep children inside the layer set
            LabelId smallest = set_to_vector(allowed).front();
            for (int c : tree.children[v]) lab.node_labels[c] = smallest;
        }
    };

    auto process_rake_layer = [&](int layer) {
        LabelSet allowed = r_set(layer);
        if (allowed == 0) throw std::runtime_error("internal completion failure: empty layer set");
        int rank = 2 * layer - 1;
        for (const auto& comp : comps.rake[layer - 1]) {
            std::vector<char> in_comp_root(comp.size(), 0);
            int z = -1;
            for (int v : comp) {
                int p = tree.parent[v];
                bool p_in = p >= 0 && deco.layer_kind[p] == 'R' && deco.layer_index[p] == layer &&
                            deco.component[p] == deco.component[v];
                if (!p_in) z = v;
            }
            if (lab.node_labels[z] < 0) {
                const RootedConfig* cfg = pick_config(-1, allowed, -1);
                LabelId head = cfg ? cfg->label : set_to_vector(allowed).front();
                lab.node_labels[z] = head;
            }
            // BFS down the component
            std::vector<int> queue{z};
            for (size_t qi = 0; qi < queue.size(); ++qi) {
                int v = queue[qi];
                extend_down(v, allowed, rank);
                for (int c : tree.children[v])
                    if (deco.layer_kind[c] == 'R' && deco.layer_index[c] == layer &&
                        deco.component[c] == deco.component[v])
                        queue.push_back(c);
            }
        }
    };

    auto process_compress_layer = [&](int layer) {
        LabelSet allowed_r = r_set(layer);
        const FlexAutomaton& m = automaton_for(layer);
        int rank = 2 * layer;
        for (const auto& comp : comps.compress[layer - 1]) {
            std::vector<char> in_comp(tree.n, 0);
            for (int v : comp) in_comp[v] = 1;
            int top = -1, bottom = -1;
            for (int v : comp) {
                int p = tree.parent[v];
                if (p < 0 || !in_comp[p]) top = v;
                bool has_child_in = false;
                for (int c : tree.children[v])
                    if (in_comp[c]) has_child_in = true;
                if (!has_child_in) bottom = v;
            }
            std::vector<int> path{top};
            while (path.back() != bottom) {
                for (int c : tree.children[path.back()])
                    if (in_comp[c]) {
                        path.push_back(c);
                        break;
                    }
            }
            int s = static_cast<int>(path.size());
            int w = -1;
            for (int c : tree.children[bottom])
                if (!in_comp[c] && deco.rank(c) > rank) w = c;
            if (w < 0 || lab.node_labels[w] < 0 || lab.node_labels[top] < 0)
                throw std::runtime_error("internal completion failure: unanchored compress path");
            LabelId alpha = lab.node_labels[top]; // fixed by the parent anchor's configuration
            LabelId beta = lab.node_labels[w];
            int from = m.index_of(beta), to = m.index_of(alpha);
            if (from < 0 || to < 0)
                throw std::runtime_error("internal completion failure: anchor outside automaton");
            auto walk = detail::exact_walk(m, from, to, s);
            if (walk.empty())
                throw std::runtime_error("internal completion failure: no walk of length " +
                                         std::to_string(s));
            // walk[j] is the state of sigma_{j+1} counting from beta; reverse it
            std::vector<LabelId> sigma(s + 1);
            for (int j = 0; j <= s; ++j) sigma[j] = m.states[walk[s - j]].first;
            for (int j = 0; j < s; ++j) {
                int v = path[j];
                if (lab.node_labels[v] < 0) lab.node_labels[v] = sigma[j];
                info.processed_rank[v] = rank;
                LabelId next_label = sigma[j + 1];
                const RootedConfig* cfg = pick_config(sigma[j], allowed_r, next_label);
                if (!cfg) throw std::runtime_error("internal completion failure on compress path");
                int chain_child = (j + 1 < s) ? path[j + 1] : w;
                LabelMultiset rest = cfg->children.minus_one(next_label);
                size_t ri = 0;
                for (int c : tree.children[v]) {
                    if (c == chain_child) lab.node_labels[c] = next_label;
                    else lab.node_labels[c] = rest.entries[ri++];
                }
            }
        }
    };

    for (int layer = L; layer >= 1; --layer) {
        process_rake_layer(layer);
        if (layer - 1 >= 1) process_compress_layer(layer - 1);
    }

    auto violations = validate_labeling(problem, tree, lab);
    if (!violations.empty())
        throw std::runtime_error("internal completion failure: " + violations.front());
    return {lab, info};
}

inline std::pair<Labeling, SolveInfo> solve_with_certificate(const UnrootedProblem& problem,
                                                             const Tree& tree,
                                                             const GoodSequence& seq) {
    if (tree.kind != TreeKind::unrooted)
        throw std::invalid_argument("solve_with_certificate: unrooted problem needs an unrooted tree");
    if (tree.max_degree() > problem.delta)
        throw std::invalid_argument("tree degree exceeds the problem's delta");
    if (seq.rooted || seq.v_layers.empty())
        throw std::invalid_argument("certificate does not fit the problem");

    int ell = 1;
    for (int f : seq.flexibility) ell = std::max(ell, f - 1);

    Decomposition deco;
    int gamma;
    if (seq.stabilized) {
        gamma = 1;
        deco = decompose_unrooted(tree, gamma, ell);
    } else {
        int k = seq.length();
        gamma = static_cast<int>(
            std::min<long long>(choose_parameters_finite(tree.n, k, ell).gamma, tree.n));
        deco = decompose_unrooted(tree, gamma, ell);
        while (deco.L > k) {
            gamma = static_cast<int>(std::min<long long>(2LL * gamma, tree.n));
            deco = decompose_unrooted(tree, gamma, ell);
        }
    }
    const int L = deco.L;

    auto v_set = [&](int layer) -> const std::vector<LabelMultiset>& {
        size_t idx = std::min<size_t>(layer, seq.v_layers.size()) - 1;
        return seq.v_layers[idx];
    };

    std::vector<std::optional<UnrootedAutomaton>> automata(L + 1);
    auto automaton_for = [&](int layer) -> const UnrootedAutomaton& {
        if (!automata[layer]) automata[layer] = build_unrooted_automaton(problem, v_set(layer));
        return *automata[layer];
    };

    Labeling lab = Labeling::empty_for(tree);
    SolveInfo info;
    info.gamma = gamma;
    info.ell = ell;
    info.L = L;
    info.analytic_rounds = static_cast<long long>(gamma + ell) * L;
    info.processed_rank.assign(tree.n, 0);

    // chosen node configuration per node, needed to seed walk endpoints
    std::vector<LabelMultiset> chosen(tree.n);

    auto comps = detail::group_by_layer(tree, deco);
    auto partners = problem.edge_partners();

    auto t_adj = [&](int v) -> const std::vector<int>& { return tree.adj[v]; };

    // assign config entries to v's half-edges: `toward` gets `sigma`, the rest
    // take the remaining entries in order (a prefix when deg(v) < delta)
    auto distribute = [&](int v, const LabelMultiset& cfg, int toward, LabelId sigma, int rank) {
        chosen[v] = cfg;
        info.processed_rank[v] = rank;
        LabelMultiset rest = toward >= 0 ? cfg.minus_one(sigma) : cfg;
        size_t ri = 0;
        for (int u : t_adj(v)) {
            if (u == toward) lab.set(tree, v, u, sigma);
            else lab.set(tree, v, u, rest.entries[ri++]);
        }
    };

    auto process_rake_layer = [&](int layer) {
        const auto& allowed = v_set(layer);
        if (allowed.empty())
            throw std::runtime_error("internal completion failure: empty layer set");
        int rank = 2 * layer - 1;
        for (const auto& comp : comps.rake[layer - 1]) {
            std::vector<char> in_comp(tree.n, 0);
            for (int v : comp) in_comp[v] = 1;
            int z = comp[0], attach = -1;
            for (int v : comp)
                for (int u : t_adj(v))
                    if (!in_comp[u] && deco.rank(u) > rank) {
                        z = v;
                        attach = u;
                    }
            // label z against the attachment (if any), then extend downward
            if (attach >= 0) {
                LabelId b = lab.get(tree, attach, z);
                bool done = false;
                for (const auto& cfg : allowed) {
                    for (LabelId sp : cfg.entries)
                        if (set_has(partners[b], sp)) {
                            distribute(z, cfg, attach, sp, rank);
                            done = true;
                            break;
                        }
                    if (done) break;
                }
                if (!done) throw std::runtime_error("internal completion failure at node " +
                                                    std::to_string(z));
            } else {
                distribute(z, allowed.front(), -1, -1, rank);
            }
            std::vector<int> queue{z};
            std::vector<char> seen(tree.n, 0);
            seen[z] = 1;
            for (size_t qi = 0; qi < queue.size(); ++qi) {
                int v = queue[qi];
                for (int u : t_adj(v)) {
                    if (!in_comp[u] || seen[u]) continue;
                    seen[u] = 1;
                    LabelId b = lab.get(tree, v, u);
                    bool done = false;
                    for (const auto& cfg : allowed) {
                        for (LabelId sp : cfg.entries)
                            if (set_has(partners[b], sp)) {
                                distribute(u, cfg, v, sp, rank);
                                done = true;
                                break;
                            }
                        if (done) break;
                    }
                    if (!done) throw std::runtime_error("internal completion failure at node " +
                                                        std::to_string(u));
                    queue.push_back(u);
                }
            }
        }
    };

    auto process_compress_layer = [&](int layer) {
        const auto& allowed = v_set(layer);
        const auto& ua = automaton_for(layer);
        int rank = 2 * layer;
        for (const auto& comp : comps.compress[layer - 1]) {
            std::vector<char> in_comp(tree.n, 0);
            for (int v : comp) in_comp[v] = 1;
            // endpoints: at most one neighbor inside the component
            std::vector<int> endpoints;
            for (int v : comp) {
                int internal = 0;
                for (int u : t_adj(v))
                    if (in_comp[u]) ++internal;
                if (internal <= 1) endpoints.push_back(v);
            }
            int v1 = endpoints.front();
            std::vector<int> path{v1};
            int prev = -1;
            while (true) {
                int nxt = -1;
                for (int u : t_adj(path.back()))
                    if (in_comp[u] && u != prev) {
                        nxt = u;
                        break;
                    }
                if (nxt < 0) break;
                prev = path.back();
                path.push_back(nxt);
            }
            int s = static_cast<int>(path.size());
            auto anchor_of = [&](int v, int other_end_anchor) {
                for (int u : t_adj(v))
                    if (!in_comp[u] && deco.rank(u) > rank && u != other_end_anchor) return u;
                return -1;
            };
            int u_anchor = anchor_of(path.front(), -1);
            int w_anchor = anchor_of(path.back(), s == 1 ? u_anchor : -1);
            if (u_anchor < 0 || w_anchor < 0)
                throw std::runtime_error("internal completion failure: unanchored compress path");
            // walk endpoints from the anchors' fixed configurations
            LabelId b1 = lab.get(tree, u_anchor, path.front());
            LabelId a1 = chosen[u_anchor].minus_one(b1).entries.front();
            LabelId ae = lab.get(tree, w_anchor, path.back());
            LabelId be = chosen[w_anchor].minus_one(ae).entries.front();
            int d_len = s + 1;
            int from = ua.automaton.index_of(a1, b1);
            int to = ua.automaton.index_of(ae, be);
            if (from < 0 || to < 0)
                throw std::runtime_error("internal completion failure: anchor outside automaton");
            auto walk = detail::exact_walk(ua.automaton, from, to, d_len);
            if (walk.empty())
                throw std::runtime_error("internal completion failure: no walk of length " +
                                         std::to_string(d_len));
            for (int j = 1; j <= s; ++j) {
                int v = path[j - 1];
                auto [av, bv] = ua.automaton.states[walk[j]];
                // configuration containing {av, bv}
                const LabelMultiset* cfg = nullptr;
                for (const auto& c : allowed) {
                    if (c.contains(av) && c.minus_one(av).contains(bv)) {
                        cfg = &c;
                        break;
                    }
                }
                if (!cfg) throw std::runtime_error("internal completion failure on compress path");
                chosen[v] = *cfg;
                info.processed_rank[v] = rank;
                int toward_prev = (j == 1) ? u_anchor : path[j - 2];
                int toward_next = (j == s) ? w_anchor : path[j];
                LabelMultiset rest = cfg->minus_one(av).minus_one(bv);
                size_t ri = 0;
                for (int u : t_adj(v)) {
                    if (u == toward_prev) lab.set(tree, v, u, av);
                    else if (u == toward_next) lab.set(tree, v, u, bv);
                    else lab.set(tree, v, u, rest.entries[ri++]);
                }
            }
        }
    };

    for (int layer = L; layer >= 1; --layer) {
        process_rake_layer(layer);
        if (layer - 1 >= 1) process_compress_layer(layer - 1);
    }

    auto violations = validate_labeling(problem, tree, lab);
    if (!violations.empty())
        throw std::runtime_error("internal completion failure: " + violations.front());
    return {lab, info};
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

enum class BruteForceStatus { sat, unsat, budget_exceeded };

struct BruteForceOptions {
    long node_budget = 200000;
    // rooted restrictions
    std::optional<LabelSet> allowed_labels;
    std::optional<LabelId> pin_root_label;
    // unrooted restrictions
    std::optional<std::vector<LabelMultiset>> allowed_node_configs;
    std::optional<LabelMultiset> pin_root_config;
};

struct BruteForceResult {
    BruteForceStatus status = BruteForceStatus::unsat;
    Labeling labeling;
};

namespace detail {

// Can the multiset entries be matched one-to-one to the slots, where entry e
// may fill slot i iff ok(i, e)? Bitmask DP over slot subsets.
template <typename OkFn>
bool multiset_matching(const std::vector<LabelId>& entries, int slots, OkFn ok) {
    if (static_cast<int>(entries.size()) != slots) return false;
    if (slots == 0) return true;
    std::vector<char> dp(1u << slots, 0);
    dp[0] = 1;
    for (int j = 0; j < slots; ++j) { // entry j fills one more slot
        std::vector<char> next(1u << slots, 0);
        for (unsigned mask = 0; mask < (1u << slots); ++mask) {
            if (!dp[mask] || std::popcount(mask) != j) continue;
            for (int i = 0; i < slots; ++i)
                if (!(mask & (1u << i)) && ok(i, entries[j])) next[mask | (1u << i)] = 1;
        }
        dp.swap(next);
    }
    return dp[(1u << slots) - 1];
}

// Lexicographically-first assignment of entries to slots (slot order), empty
// if none. ok(i, e) as above.
template <typename OkFn>
std::vector<LabelId> multiset_assignment(std::vector<LabelId> entries, int slots, OkFn ok) {
    std::vector<LabelId> result;
    std::vector<char> used(entries.size(), 0);
    // entries sorted; assign each slot the smallest unused feasible entry that
    // keeps the remainder matchable
    auto rest_matchable = [&](int next_slot) {
        std::vector<LabelId> rest;
        for (size_t j = 0; j < entries.size(); ++j)
            if (!used[j]) rest.push_back(entries[j]);
        return multiset_matching(rest, slots - next_slot,
                                 [&](int i, LabelId e) { return ok(next_slot + i, e); });
    };
    for (int i = 0; i < slots; ++i) {
        bool placed = false;
        for (size_t j = 0; j < entries.size() && !placed; ++j) {
            if (used[j] || !ok(i, entries[j])) continue;
            if (j > 0 && entries[j] == entries[j - 1] && !used[j - 1]) continue; // skip dup
            used[j] = 1;
            if (rest_matchable(i + 1)) {
                result.push_back(entries[j]);
                placed = true;
            } else {
                used[j] = 0;
            }
        }
        if (!placed) return {};
    }
    return result;
}

} // namespace detail

inline BruteForceResult brute_force_solve(const RootedProblem& p, const Tree& t,
                                          const BruteForceOptions& opt = {}) {
    BruteForceResult res;
    if (t.kind != TreeKind::rooted) throw std::invalid_argument("brute_force_solve: kind mismatch");
    if (t.n > opt.node_budget) {
        res.status = BruteForceStatus::budget_exceeded;
        return res;
    }
    LabelSet allowed = opt.allowed_labels.value_or(p.all_labels());

    // bottom-up feasible label sets, iterative post-order
    std::vector<LabelSet> feasible(t.n, 0);
    std::vector<int> order;
    order.reserve(t.n);
    {
        std::vector<int> stack{t.root};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int c : t.children[v]) stack.push_back(c);
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        int d = t.indegree(v);
        if (d == 0) {
            feasible[v] = allowed;
        } else if (d < p.delta) {
            bool kids_ok = true;
            for (int c : t.children[v])
                if (feasible[c] == 0) kids_ok = false;
            feasible[v] = kids_ok ? allowed : 0;
        } else {
            LabelSet f = 0;
            for (const auto& cfg : p.configs) {
                if (!set_has(allowed, cfg.label) || set_has(f, cfg.label)) continue;
                if ((cfg.children.label_set() & ~allowed) != 0) continue;
                bool ok = detail::multiset_matching(
                    cfg.children.entries, d,
                    [&](int i, LabelId e) { return set_has(feasible[t.children[v][i]], e); });
                if (ok) f = set_with(f, cfg.label);
            }
            feasible[v] = f;
        }
    }
    LabelSet root_feasible = feasible[t.root];
    if (opt.pin_root_label) root_feasible &= set_with(LabelSet{0}, *opt.pin_root_label);
    if (root_feasible == 0) {
        res.status = BruteForceStatus::unsat;
        return res;
    }

    // top-down reconstruction, lexicographically smallest
    res.labeling = Labeling::empty_for(t);
    auto& nl = res.labeling.node_labels;
    nl[t.root] = set_to_vector(root_feasible).front();
    std::vector<int> stack{t.root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        int d = t.indegree(v);
        if (d == 0) continue;
        if (d < p.delta) {
            for (int c : t.children[v]) {
                nl[c] = set_to_vector(feasible[c]).front();
                stack.push_back(c);
            }
        } else {
            bool assigned = false;
            for (const auto& cfg : p.configs) {
                if (cfg.label != nl[v]) continue;
                if ((cfg.children.label_set() & ~allowed) != 0) continue;
                auto assign = detail::multiset_assignment(
                    cfg.children.entries, d,
                    [&](int i, LabelId e) { return set_has(feasible[t.children[v][i]], e); });
                if (!assign.empty()) {
                    for (int i = 0; i < d; ++i) nl[t.children[v][i]] = assign[i];
                    assigned = true;
                    break;
                }
            }
            if (!assigned) throw std::logic_error("reconstruction failed after feasible sweep");
            for (int c : t.children[v]) stack.push_back(c);
        }
    }
    res.status = BruteForceStatus::sat;
    return res;
}

inline BruteForceResult brute_force_solve(const UnrootedProblem& p, const Tree& t,
                                          const BruteForceOptions& opt = {}) {
    BruteForceResult res;
    if (t.kind != TreeKind::unrooted)
        throw std::invalid_argument("brute_force_solve: kind mismatch");
    if (t.n > opt.node_budget) {
        res.status = BruteForceStatus::budget_exceeded;
        return res;
    }
    const auto& configs = opt.allowed_node_configs.value_or(p.node_configs);
    auto partners = p.edge_partners();
    LabelSet all = p.all_labels();

    const int root = 0;
    // orientation away from the root
    std::vector<int> order, par(t.n, -1);
    {
        std::vector<int> stack{root};
        std::vector<char> seen(t.n, 0);
        seen[root] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int u : t.adj[v])
                if (!seen[u]) {
                    seen[u] = 1;
                    par[u] = v;
                    stack.push_back(u);
                }
        }
    }
    std::vector<std::vector<int>> kids(t.n);
    for (int v = 0; v < t.n; ++v)
        if (par[v] >= 0) kids[par[v]].push_back(v);

    if (t.n == 1) { // no half-edges, trivially satisfiable
        res.status = BruteForceStatus::sat;
        res.labeling = Labeling::empty_for(t);
        return res;
    }

    // F[v] = labels usable on the half-edge (v, parent edge)
    std::vector<LabelSet> feasible(t.n, 0);
    // compat(alpha, u): parent-side label alpha works against child u
    auto compat = [&](LabelId alpha, int u) { return (partners[alpha] & feasible[u]) != 0; };
    auto compat_any = [&](int u) {
        for (LabelId a = 0; a < p.alphabet_size(); ++a)
            if (compat(a, u)) return true;
        return false;
    };

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        if (v == root) continue;
        int deg = t.degree(v);
        const auto& ch = kids[v];
        if (deg < p.delta) {
            bool ok = true;
            for (int u : ch)
                if (!compat_any(u)) ok = false;
            feasible[v] = ok ? all : 0;
        } else {
            LabelSet f = 0;
            for (const auto& cfg : configs) {
                for (LabelId sigma : set_to_vector(cfg.label_set())) {
                    if (set_has(f, sigma)) continue;
                    auto rest = cfg.minus_one(sigma);
                    bool ok = detail::multiset_matching(
                        rest.entries, static_cast<int>(ch.size()),
                        [&](int i, LabelId e) { return compat(e, ch[i]); });
                    if (ok) f = set_with(f, sigma);
                }
            }
            feasible[v] = f;
        }
    }

    // root feasibility
    bool root_ok;
    const LabelMultiset* root_cfg = nullptr;
    std::vector<LabelId> root_assign;
    if (t.degree(root) == p.delta || opt.pin_root_config) {
        root_ok = false;
        for (const auto& cfg : configs) {
            if (opt.pin_root_config && !(cfg == *opt.pin_root_config)) continue;
            if (cfg.arity() != t.degree(root)) continue;
            auto assign = detail::multiset_assignment(
                cfg.entries, static_cast<int>(kids[root].size()),
                [&](int i, LabelId e) { return compat(e, kids[root][i]); });
            if (!assign.empty()) {
                root_ok = true;
                root_cfg = &cfg;
                root_assign = assign;
                break;
            }
        }
    } else {
        root_ok = true;
        for (int u : kids[root])
            if (!compat_any(u)) root_ok = false;
    }
    if (!root_ok) {
        res.status = BruteForceStatus::unsat;
        return res;
    }

    // reconstruction
    res.labeling = Labeling::empty_for(t);
    auto& lab = res.labeling;
    if (root_cfg) {
        for (size_t i = 0; i < kids[root].size(); ++i)
            lab.set(t, root, kids[root][i], root_assign[i]);
    } else {
        for (int u : kids[root]) {
            for (LabelId a = 0; a < p.alphabet_size(); ++a)
                if (compat(a, u)) {
                    lab.set(t, root, u, a);
                    break;
                }
        }
    }
    std::vector<int> stack = kids[root];
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        LabelId alpha = lab.get(t, par[v], v);
        LabelId beta = -1;
        for (LabelId b : set_to_vector(feasible[v] & partners[alpha])) {
            beta = b;
            break;
        }
        if (beta < 0) throw std::logic_error("reconstruction failed after feasible sweep");
        lab.set(t, v, par[v], beta);
        const auto& ch = kids[v];
        if (t.degree(v) == p.delta) {
            bool assigned = false;
            for (const auto& cfg : configs) {
                if (!cfg.contains(beta)) continue;
                auto rest = cfg.minus_one(beta);
                auto assign = detail::multiset_assignment(
                    rest.entries, static_cast<int>(ch.size()),
                    [&](int i, LabelId e) { return compat(e, ch[i]); });
                if (!assign.empty()) {
                    for (size_t i = 0; i < ch.size(); ++i) lab.set(t, v, ch[i], assign[i]);
                    assigned = true;
                    break;
                }
            }
            if (!assigned) throw std::logic_error("reconstruction failed after feasible sweep");
        } else {
            for (int u : ch) {
                for (LabelId a = 0; a < p.alphabet_size(); ++a)
                    if (compat(a, u)) {
                        lab.set(t, v, u, a);
                        break;
                    }
            }
        }
        for (int u : ch) stack.push_back(u);
    }
    res.status = BruteForceStatus::sat;
    return res;
}

} // namespace lcl
