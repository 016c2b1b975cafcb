#pragma once

// Good-sequence enumeration and the depth of an LCL problem.
//
// A good sequence alternates trimmed sets with flexible components:
//   unrooted: V_1 = trim(V); D_i a flexible component of D_{V_i};
//             V_{i+1} = trim(V_i restricted to D_i); last V nonempty.
//   rooted:   R_1 = trim(Sigma); C_i a flexible component of the path-form
//             of the restriction to R_i; R_{i+1} = trim(C_i); last R nonempty.
//
// The enumeration branches over every flexible-component choice. A branch
// stabilizes when the next trimmed set equals the previous one (the sequence
// then extends to every length), and ends when it would become empty. Depth
// 0 means no good sequence, a finite k the longest one, infinity that some
// branch stabilizes; the verdicts are unsolvable, Theta(n^{1/k}), and
// O(log n) respectively.

#include <optional>
#include <string>
#include <vector>

#include "lcl/automaton.hpp"
#include "lcl/core.hpp"
#include "lcl/trim.hpp"

namespace lcl {

// S restricted to D: configurations all of whose size-2 sub-multisets are in D.
inline std::vector<LabelMultiset> restrict_unrooted(const std::vector<LabelMultiset>& s,
                                                    const std::vector<LabelMultiset>& d) {
    std::vector<LabelMultiset> out;
    for (const auto& c : s) {
        bool ok = true;
        for (const auto& sub : sub_multisets_of_size_2(c))
            if (!std::binary_search(d.begin(), d.end(), sub)) {
                ok = false;
                break;
            }
        if (ok) out.push_back(c);
    }
    return out;
}

struct GoodSequence {
    bool rooted = false;
    // unrooted layers
    std::vector<std::vector<LabelMultiset>> v_layers; // V_1..V_k
    std::vector<std::vector<LabelMultiset>> d_layers; // D_1..D_{k-1} (D_k when stabilized)
    // rooted layers
    std::vector<LabelSet> r_layers; // R_1..R_k
    std::vector<LabelSet> c_layers; // C_1..C_{k-1} (C_k when stabilized)
    std::vector<int> flexibility;   // per d/c layer
    bool stabilized = false;

    int length() const {
        return rooted ? static_cast<int>(r_layers.size()) : static_cast<int>(v_layers.size());
    }

    friend bool operator==(const GoodSequence& a, const GoodSequence& b) {
        return a.rooted == b.rooted && a.v_layers == b.v_layers && a.d_layers == b.d_layers &&
               a.r_layers == b.r_layers && a.c_layers == b.c_layers &&
               a.stabilized == b.stabilized;
    }
};

enum class DepthKind { unsolvable, finite, infinite };

struct DepthResult {
    DepthKind kind = DepthKind::unsolvable;
    int k = 0; // meaningful for finite depth
    std::string verdict;
    std::optional<GoodSequence> witness;
    std::vector<GoodSequence> all_maximal_sequences;
    bool sequences_truncated = false;
};

inline std::string verdict_string(DepthKind kind, int k) {
    switch (kind) {
        case DepthKind::unsolvable: return "unsolvable";
        case DepthKind::finite:
            return k == 1 ? std::string("Θ(n)") : "Θ(n^{1/" + std::to_string(k) + "})";
        case DepthKind::infinite: return "O(log n)";
    }
    return "";
}

struct EnumerationResult {
    std::vector<GoodSequence> sequences; // maximal branches, deduplicated, capped
    bool truncated = false;
    // depth bookkeeping, exact regardless of the cap
    int max_length = 0;
    bool any_stabilized = false;
    std::optional<GoodSequence> best; // first stabilized, else first longest
};

namespace detail {

inline void emit_sequence(EnumerationResult& res, GoodSequence seq, size_t cap) {
    for (const auto& s : res.sequences)
        if (s == seq) return;
    if (seq.stabilized && !res.any_stabilized) {
        res.any_stabilized = true;
        res.best = seq;
    } else if (!res.any_stabilized && seq.length() > res.max_length) {
        res.best = seq;
    }
    res.max_length = std::max(res.max_length, seq.length());
    if (res.sequences.size() >= cap) {
        res.truncated = true;
        return;
    }
    res.sequences.push_back(std::move(seq));
}

inline void enumerate_unrooted(const UnrootedProblem& problem, GoodSequence& cur,
                               EnumerationResult& res, size_t cap) {
    const auto& v_last = cur.v_layers.back();
    auto ua = build_unrooted_automaton(problem, v_last);
    auto report = analyze_unrooted(ua.d_set, ua.automaton);
    auto flex = report.flexible_components();
    if (flex.empty()) {
        emit_sequence(res, cur, cap);
        return;
    }
    bool emitted_dead_end = false;
    for (const auto* comp : flex) {
        auto restricted = restrict_unrooted(v_last, comp->members_unrooted);
        auto [trimmed, trace] = trim_unrooted(problem, restricted);
        if (trimmed == v_last) {
            GoodSequence seq = cur;
            seq.d_layers.push_back(comp->members_unrooted);
            seq.flexibility.push_back(comp->flexibility_index);
            seq.stabilized = true;
            emit_sequence(res, std::move(seq), cap);
        } else if (trimmed.empty()) {
            if (!emitted_dead_end) {
                emit_sequence(res, cur, cap);
                emitted_dead_end = true;
            }
        } else {
            cur.d_layers.push_back(comp->members_unrooted);
            cur.flexibility.push_back(comp->flexibility_index);
            cur.v_layers.push_back(trimmed);
            enumerate_unrooted(problem, cur, res, cap);
            cur.v_layers.pop_back();
            cur.flexibility.pop_back();
            cur.d_layers.pop_back();
        }
    }
}

inline void enumerate_rooted(const RootedProblem& problem, GoodSequence& cur,
                             EnumerationResult& res, size_t cap) {
    LabelSet r_last = cur.r_layers.back();
    auto m = build_rooted_automaton(problem, r_last);
    auto report = analyze_rooted(m);
    auto flex = report.flexible_components();
    if (flex.empty()) {
        emit_sequence(res, cur, cap);
        return;
    }
    bool emitted_dead_end = false;
    for (const auto* comp : flex) {
        LabelSet u = 0;
        for (LabelId a : comp->members_rooted) u = set_with(u, a);
        if (u == r_last) {
            GoodSequence seq = cur;
            seq.c_layers.push_back(u);
            seq.flexibility.push_back(comp->flexibility_index);
            seq.stabilized = true;
            emit_sequence(res, std::move(seq), cap);
            continue;
        }
        auto [trimmed, trace] = trim_rooted(problem, u);
        if (trimmed == 0) {
            if (!emitted_dead_end) {
                emit_sequence(res, cur, cap);
                emitted_dead_end = true;
            }
        } else {
            cur.c_layers.push_back(u);
            cur.flexibility.push_back(comp->flexibility_index);
            cur.r_layers.push_back(trimmed);
            enumerate_rooted(problem, cur, res, cap);
            cur.r_layers.pop_back();
            cur.flexibility.pop_back();
            cur.c_layers.pop_back();
        }
    }
}

} // namespace detail

inline EnumerationResult enumerate_good_sequences(const UnrootedProblem& problem,
                                                  size_t cap = 64) {
    EnumerationResult res;
    auto [v1, trace] = trim_unrooted(problem, problem.node_configs);
    if (v1.empty()) return res;
    GoodSequence cur;
    cur.rooted = false;
    cur.v_layers.push_back(v1);
    detail::enumerate_unrooted(problem, cur, res, cap);
    return res;
}

inline EnumerationResult enumerate_good_sequences(const RootedProblem& problem, size_t cap = 64) {
    EnumerationResult res;
    auto [r1, trace] = trim_rooted(problem, problem.all_labels());
    if (r1 == 0) return res;
    GoodSequence cur;
    cur.rooted = true;
    cur.r_layers.push_back(r1);
    detail::enumerate_rooted(problem, cur, res, cap);
    return res;
}

namespace detail {

template <typename ProblemT>
DepthResult compute_depth_impl(const ProblemT& problem, size_t cap) {
    DepthResult res;
    auto en = enumerate_good_sequences(problem, cap);
    res.all_maximal_sequences = en.sequences;
    res.sequences_truncated = en.truncated;
    if (!en.best) {
        res.kind = DepthKind::unsolvable;
        res.k = 0;
    } else {
        if (en.any_stabilized) {
            res.kind = DepthKind::infinite;
        } else {
            res.kind = DepthKind::finite;
            res.k = en.max_length;
        }
        res.witness = *en.best;
    }
    res.verdict = verdict_string(res.kind, res.k);
    return res;
}

} // namespace detail

inline DepthResult compute_depth(const UnrootedProblem& problem, size_t cap = 64) {
    return detail::compute_depth_impl(problem, cap);
}
inline DepthResult compute_depth(const RootedProblem& problem, size_t cap = 64) {
    return detail::compute_depth_impl(problem, cap);
}

} // namespace lcl
