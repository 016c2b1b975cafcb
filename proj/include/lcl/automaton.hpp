#pragma once

// Path-form automata for both formalisms, strongly connected components
// under the appropriate relations, and path-flexibility.
//
// Unrooted: states are ordered label pairs (a,b) with {a,b} in D; there is
// an edge (a,b) -> (c,d) iff {b,c} is a permitted edge configuration. Two
// multisets are equivalent iff walks exist between all four orientation
// combinations; equivalence classes over the self-related multisets are the
// components.
//
// Rooted: states are labels of the restricted problem; each configuration
// (sigma : a1..ad) contributes edges a_j -> sigma. Components are ordinary
// strongly connected components restricted to states on a cycle.
//
// A component is flexible iff the gcd of the closed-walk lengths through a
// representative state, truncated at 2*|states|-1, equals one. For flexible
// components the flexibility index is the smallest K such that walks of
// every length in [K, K + |states|^2] exist between all required state
// pairs; existence of the window extends to all lengths >= K.

#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcl/core.hpp"

namespace lcl {

struct FlexAutomaton {
    bool rooted = false;
    // unrooted: (a,b) ordered pairs; rooted: (label, -1)
    std::vector<std::pair<LabelId, LabelId>> states;
    std::vector<std::vector<int>> out; // adjacency by state index

    int state_count() const { return static_cast<int>(states.size()); }

    int index_of(LabelId a, LabelId b) const {
        for (int i = 0; i < state_count(); ++i)
            if (states[i].first == a && states[i].second == b) return i;
        return -1;
    }

    int index_of(LabelId a) const { return index_of(a, -1); }

    std::string state_name(int i, const std::vector<std::string>& alphabet) const {
        const auto& [a, b] = states[i];
        if (rooted) return alphabet[a];
        return alphabet[a] + "|" + alphabet[b];
    }
};

struct SccComponent {
    // unrooted components list their size-2 multisets; rooted ones their labels
    std::vector<LabelMultiset> members_unrooted;
    std::vector<LabelId> members_rooted;
    std::vector<int> state_ids; // all orientation states in the automaton
    bool flexible = false;
    int flexibility_index = 0; // 0 when not flexible
};

struct SccReport {
    std::vector<SccComponent> components;

    std::vector<const SccComponent*> flexible_components() const {
        std::vector<const SccComponent*> out;
        for (const auto& c : components)
            if (c.flexible) out.push_back(&c);
        return out;
    }
};

// D_S plus the automaton M_D for the path-form of (Delta, Sigma, S, E).
struct UnrootedAutomaton {
    std::vector<LabelMultiset> d_set; // sorted
    FlexAutomaton automaton;
};

inline UnrootedAutomaton build_unrooted_automaton(const UnrootedProblem& problem,
                                                  const std::vector<LabelMultiset>& configs) {
    UnrootedAutomaton res;
    for (const auto& c : configs) {
        auto subs = sub_multisets_of_size_2(c);
        res.d_set.insert(res.d_set.end(), subs.begin(), subs.end());
    }
    sort_unique(res.d_set);
    auto& m = res.automaton;
    m.rooted = false;
    for (const auto& d : res.d_set) {
        LabelId a = d.entries[0], b = d.entries[1];
        m.states.push_back({a, b});
        if (a != b) m.states.push_back({b, a});
    }
    m.out.assign(m.states.size(), {});
    for (int i = 0; i < m.state_count(); ++i)
        for (int j = 0; j < m.state_count(); ++j)
            if (problem.has_edge_config(m.states[i].second, m.states[j].first))
                m.out[i].push_back(j);
    return res;
}

// Path-form digraph of the problem restricted to `labels`: only
// configurations whose label and children all lie in `labels` contribute.
inline FlexAutomaton build_rooted_automaton(const RootedProblem& problem, LabelSet labels) {
    FlexAutomaton m;
    m.rooted = true;
    for (LabelId id : set_to_vector(labels)) m.states.push_back({id, -1});
    m.out.assign(m.states.size(), {});
    std::vector<int> state_of(problem.alphabet_size(), -1);
    for (int i = 0; i < m.state_count(); ++i) state_of[m.states[i].first] = i;
    std::vector<std::vector<char>> seen(m.states.size(),
                                        std::vector<char>(m.states.size(), 0));
    for (const auto& cfg : problem.configs) {
        if (!set_has(labels, cfg.label)) continue;
        if ((cfg.children.label_set() & ~labels) != 0) continue;
        int to = state_of[cfg.label];
        for (LabelId a : cfg.children.entries) {
            int from = state_of[a];
            if (!seen[from][to]) {
                seen[from][to] = 1;
                m.out[from].push_back(to);
            }
        }
    }
    for (auto& v : m.out) std::sort(v.begin(), v.end());
    return m;
}

namespace detail {

inline std::vector<std::vector<char>> reachability(const FlexAutomaton& m) {
    int n = m.state_count();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int s = 0; s < n; ++s) {
        std::vector<int> stack{s};
        std::vector<char> vis(n, 0);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u : m.out[v])
                if (!vis[u]) {
                    vis[u] = 1;
                    stack.push_back(u);
                }
        }
        // reach = by a walk of length >= 1
        for (int t = 0; t < n; ++t) reach[s][t] = vis[t];
    }
    return reach;
}

} // namespace detail

// Equivalence classes over the multisets of D whose orientation states
// interconnect in all four ways; classes ordered by smallest member.
inline std::vector<std::vector<LabelMultiset>> scc_unrooted(
    const std::vector<LabelMultiset>& d_set, const FlexAutomaton& m) {
    auto reach = detail::reachability(m);
    auto sim = [&](const LabelMultiset& x, const LabelMultiset& y) {
        int xf = m.index_of(x.entries[0], x.entries[1]);
        int xr = m.index_of(x.entries[1], x.entries[0]);
        int yf = m.index_of(y.entries[0], y.entries[1]);
        int yr = m.index_of(y.entries[1], y.entries[0]);
        return reach[xf][yf] && reach[xf][yr] && reach[xr][yf] && reach[xr][yr];
    };
    std::vector<std::vector<LabelMultiset>> classes;
    std::vector<char> assigned(d_set.size(), 0);
    for (size_t i = 0; i < d_set.size(); ++i) {
        if (assigned[i] || !sim(d_set[i], d_set[i])) continue;
        std::vector<LabelMultiset> cls{d_set[i]};
        assigned[i] = 1;
        for (size_t j = i + 1; j < d_set.size(); ++j) {
            if (assigned[j] || !sim(d_set[j], d_set[j])) continue;
            if (sim(d_set[i], d_set[j])) {
                cls.push_back(d_set[j]);
                assigned[j] = 1;
            }
        }
        classes.push_back(std::move(cls));
    }
    return classes;
}

// Ordinary strongly connected components restricted to states on a cycle;
// ordered by smallest member label.
inline std::vector<std::vector<LabelId>> scc_rooted(const FlexAutomaton& m) {
    auto reach = detail::reachability(m);
    int n = m.state_count();
    std::vector<std::vector<LabelId>> comps;
    std::vector<char> assigned(n, 0);
    for (int i = 0; i < n; ++i) {
        if (assigned[i] || !reach[i][i]) continue;
        std::vector<LabelId> comp{m.states[i].first};
        assigned[i] = 1;
        for (int j = i + 1; j < n; ++j) {
            if (assigned[j] || !reach[j][j]) continue;
            if (reach[i][j] && reach[j][i]) {
                comp.push_back(m.states[j].first);
                assigned[j] = 1;
            }
        }
        comps.push_back(std::move(comp));
    }
    return comps;
}

namespace detail {

// Closed-walk lengths through `rep` up to `limit`, folded into a gcd.
inline long long closed_walk_gcd(const FlexAutomaton& m, int rep, int limit) {
    int n = m.state_count();
    std::vector<char> cur(n, 0), next(n, 0);
    cur[rep] = 1;
    long long g = 0;
    for (int len = 1; len <= limit; ++len) {
        std::fill(next.begin(), next.end(), 0);
        for (int v = 0; v < n; ++v)
            if (cur[v])
                for (int u : m.out[v]) next[u] = 1;
        std::swap(cur, next);
        if (cur[rep]) g = std::gcd(g, static_cast<long long>(len));
        if (g == 1) break;
    }
    return g;
}

inline std::vector<int> component_states(const FlexAutomaton& m,
                                         const std::vector<LabelMultiset>& members) {
    std::vector<int> ids;
    for (const auto& d : members) {
        ids.push_back(m.index_of(d.entries[0], d.entries[1]));
        if (d.entries[0] != d.entries[1]) ids.push_back(m.index_of(d.entries[1], d.entries[0]));
    }
    return ids;
}

inline std::vector<int> component_states(const FlexAutomaton& m,
                                         const std::vector<LabelId>& members) {
    std::vector<int> ids;
    for (LabelId a : members) ids.push_back(m.index_of(a));
    return ids;
}

} // namespace detail

// Flexibility test: gcd of closed-walk lengths <= 2|V|-1 from a
// representative equals one. Orientation does not matter for unrooted
// components, so the first state works as the representative.
inline bool is_flexible(const FlexAutomaton& m, const std::vector<int>& component_state_ids) {
    if (component_state_ids.empty()) return false;
    int limit = 2 * m.state_count() - 1;
    return detail::closed_walk_gcd(m, component_state_ids.front(), limit) == 1;
}

inline bool is_flexible(const FlexAutomaton& m, const std::vector<LabelMultiset>& members) {
    return is_flexible(m, detail::component_states(m, members));
}
inline bool is_flexible(const FlexAutomaton& m, const std::vector<LabelId>& members) {
    return is_flexible(m, detail::component_states(m, members));
}

// Smallest K >= 1 such that every length in [K, K + |V|^2] admits a walk
// between every ordered pair of the component's states. Walks may pass
// through the whole automaton. Throws if no K <= 2|V|^2 + 2|V| exists.
inline int flexibility_index(const FlexAutomaton& m, const std::vector<int>& component_state_ids) {
    if (component_state_ids.empty())
        throw std::invalid_argument("flexibility_index: empty component");
    const int n = m.state_count();
    const int window = n * n;
    const int b_max = 2 * n * n + 2 * n;
    const int horizon = b_max + window;

    std::vector<char> allgood(horizon + 1, 1);
    allgood[0] = 0; // K >= 1
    std::vector<char> cur(n), next(n);
    for (int src : component_state_ids) {
        std::fill(cur.begin(), cur.end(), 0);
        cur[src] = 1;
        for (int len = 1; len <= horizon; ++len) {
            std::fill(next.begin(), next.end(), 0);
            for (int v = 0; v < n; ++v)
                if (cur[v])
                    for (int u : m.out[v]) next[u] = 1;
            std::swap(cur, next);
            if (allgood[len])
                for (int dst : component_state_ids)
                    if (!cur[dst]) {
                        allgood[len] = 0;
                        break;
                    }
        }
    }
    int run = 0;
    for (int len = 1; len <= horizon; ++len) {
        run = allgood[len] ? run + 1 : 0;
        if (run == window + 1) {
            int k = len - window;
            if (k <= b_max) return k;
            break;
        }
    }
    throw std::runtime_error("flexibility_index: stabilization not reached; "
                             "component is not flexible");
}

inline int flexibility_index(const FlexAutomaton& m, const std::vector<LabelMultiset>& members) {
    return flexibility_index(m, detail::component_states(m, members));
}
inline int flexibility_index(const FlexAutomaton& m, const std::vector<LabelId>& members) {
    return flexibility_index(m, detail::component_states(m, members));
}

// Full component analysis: SCCs under the appropriate relation plus
// flexibility verdicts and indices.
inline SccReport analyze_unrooted(const std::vector<LabelMultiset>& d_set,
                                  const FlexAutomaton& m) {
    SccReport report;
    for (auto& cls : scc_unrooted(d_set, m)) {
        SccComponent c;
        c.members_unrooted = std::move(cls);
        c.state_ids = detail::component_states(m, c.members_unrooted);
        c.flexible = is_flexible(m, c.state_ids);
        if (c.flexible) c.flexibility_index = flexibility_index(m, c.state_ids);
        report.components.push_back(std::move(c));
    }
    return report;
}

inline SccReport analyze_rooted(const FlexAutomaton& m) {
    SccReport report;
    for (auto& comp : scc_rooted(m)) {
        SccComponent c;
        c.members_rooted = std::move(comp);
        c.state_ids = detail::component_states(m, c.members_rooted);
        c.flexible = is_flexible(m, c.state_ids);
        if (c.flexible) c.flexibility_index = flexibility_index(m, c.state_ids);
        report.components.push_back(std::move(c));
    }
    return report;
}

// DOT export: one node per state, flexible components clustered and
// annotated with their flexibility index.
inline std::string to_dot(const FlexAutomaton& m, const SccReport& report,
                          const std::vector<std::string>& alphabet) {
    std::ostringstream out;
    out << "digraph automaton {\n";
    std::vector<int> cluster_of(m.state_count(), -1);
    for (size_t ci = 0; ci < report.components.size(); ++ci)
        if (report.components[ci].flexible)
            for (int s : report.components[ci].state_ids) cluster_of[s] = static_cast<int>(ci);
    for (size_t ci = 0; ci < report.components.size(); ++ci) {
        const auto& c = report.components[ci];
        if (!c.flexible) continue;
        out << "  subgraph cluster_" << ci << " {\n";
        out << "    label=\"flexible, K=" << c.flexibility_index << "\";\n";
        for (int s : c.state_ids)
            out << "    s" << s << " [label=\"" << m.state_name(s, alphabet) << "\"];\n";
        out << "  }\n";
    }
    for (int s = 0; s < m.state_count(); ++s)
        if (cluster_of[s] < 0)
            out << "  s" << s << " [label=\"" << m.state_name(s, alphabet) << "\"];\n";
    for (int s = 0; s < m.state_count(); ++s)
        for (int u : m.out[s]) out << "  s" << s << " -> s" << u << ";\n";
    out << "}\n";
    return out.str();
}

} // namespace lcl
