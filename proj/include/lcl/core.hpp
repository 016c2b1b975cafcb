#pragma once

// Core domain types for locally checkable labeling (LCL) problems on
// regular trees, in both formalisms:
//   - unrooted: half-edge labels constrained by node/edge configurations
//   - rooted:   node labels constrained by (label : child-multiset) pairs
//
// Labels are interned to dense integer ids at construction time; label-set
// operations use 64-bit masks, so an alphabet holds at most 64 labels.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcl {

using LabelId = int;

// Bit mask over label ids. Alphabets are capped at 64 labels.
using LabelSet = std::uint64_t;

inline constexpr int kMaxAlphabet = 64;

inline bool set_has(LabelSet s, LabelId id) { return (s >> id) & 1u; }
inline LabelSet set_with(LabelSet s, LabelId id) { return s | (LabelSet{1} << id); }
inline int set_size(LabelSet s) { return std::popcount(s); }

inline std::vector<LabelId> set_to_vector(LabelSet s) {
    std::vector<LabelId> out;
    for (LabelId id = 0; s >> id; ++id)
        if (set_has(s, id)) out.push_back(id);
    return out;
}

inline LabelSet set_from_vector(const std::vector<LabelId>& ids) {
    LabelSet s = 0;
    for (LabelId id : ids) s = set_with(s, id);
    return s;
}

// A multiset of label ids in canonical (sorted non-decreasing) form.
// Equality is canonical-form equality.
struct LabelMultiset {
    std::vector<LabelId> entries;

    LabelMultiset() = default;
    explicit LabelMultiset(std::vector<LabelId> e) : entries(std::move(e)) {
        std::sort(entries.begin(), entries.end());
    }

    int arity() const { return static_cast<int>(entries.size()); }

    bool contains(LabelId id) const {
        return std::binary_search(entries.begin(), entries.end(), id);
    }

    // Multiset with one occurrence of `id` removed. Pre: contains(id).
    LabelMultiset minus_one(LabelId id) const {
        LabelMultiset out = *this;
        auto it = std::find(out.entries.begin(), out.entries.end(), id);
        out.entries.erase(it);
        return out;
    }

    LabelSet label_set() const { return set_from_vector(entries); }

    friend bool operator==(const LabelMultiset& a, const LabelMultiset& b) {
        return a.entries == b.entries;
    }
    friend bool operator<(const LabelMultiset& a, const LabelMultiset& b) {
        return a.entries < b.entries;
    }
};

inline LabelMultiset canonicalize(const LabelMultiset& m) { return LabelMultiset(m.entries); }
inline std::vector<LabelId> canonicalize(std::vector<LabelId> entries) {
    std::sort(entries.begin(), entries.end());
    return entries;
}

// All size-2 sub-multisets of `config`, deduplicated, sorted.
inline std::vector<LabelMultiset> sub_multisets_of_size_2(const LabelMultiset& config) {
    if (config.arity() < 2)
        throw std::invalid_argument("sub_multisets_of_size_2: arity < 2");
    std::vector<LabelMultiset> out;
    const auto& e = config.entries;
    for (size_t i = 0; i < e.size(); ++i)
        for (size_t j = i + 1; j < e.size(); ++j)
            out.push_back(LabelMultiset({e[i], e[j]}));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline void sort_unique(std::vector<LabelMultiset>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// LCL problem on Delta-regular unrooted trees: half-edge labels, with
// permitted node configurations (size-Delta multisets) and edge
// configurations (size-2 multisets).
struct UnrootedProblem {
    int delta = 0;
    std::vector<std::string> alphabet;       // index == label id
    std::vector<LabelMultiset> node_configs; // sorted, deduplicated
    std::vector<LabelMultiset> edge_configs; // arity 2, sorted, deduplicated

    int alphabet_size() const { return static_cast<int>(alphabet.size()); }
    LabelSet all_labels() const {
        return alphabet.empty() ? 0 : (alphabet.size() == 64 ? ~LabelSet{0} : (LabelSet{1} << alphabet.size()) - 1);
    }

    void normalize() {
        sort_unique(node_configs);
        sort_unique(edge_configs);
    }

    bool has_edge_config(LabelId a, LabelId b) const {
        LabelMultiset m({a, b});
        return std::binary_search(edge_configs.begin(), edge_configs.end(), m);
    }

    // edge_partners()[a] = set of b with {a,b} a permitted edge configuration
    std::vector<LabelSet> edge_partners() const {
        std::vector<LabelSet> t(alphabet.size(), 0);
        for (const auto& e : edge_configs) {
            t[e.entries[0]] = set_with(t[e.entries[0]], e.entries[1]);
            t[e.entries[1]] = set_with(t[e.entries[1]], e.entries[0]);
        }
        return t;
    }
};

// One rooted configuration (label : children multiset).
struct RootedConfig {
    LabelId label = 0;
    LabelMultiset children;

    friend bool operator==(const RootedConfig& a, const RootedConfig& b) {
        return a.label == b.label && a.children == b.children;
    }
    friend bool operator<(const RootedConfig& a, const RootedConfig& b) {
        if (a.label != b.label) return a.label < b.label;
        return a.children < b.children;
    }
};

// LCL problem on delta-regular rooted trees: node labels, with permitted
// (label : child-multiset) configurations.
struct RootedProblem {
    int delta = 0; // maximum indegree, >= 1
    std::vector<std::string> alphabet;
    std::vector<RootedConfig> configs; // sorted, deduplicated

    int alphabet_size() const { return static_cast<int>(alphabet.size()); }
    LabelSet all_labels() const {
        return alphabet.empty() ? 0 : (alphabet.size() == 64 ? ~LabelSet{0} : (LabelSet{1} << alphabet.size()) - 1);
    }

    void normalize() {
        std::sort(configs.begin(), configs.end());
        configs.erase(std::unique(configs.begin(), configs.end()), configs.end());
    }
};

inline std::vector<std::string> validate_problem(const UnrootedProblem& p) {
    std::vector<std::string> diags;
    if (p.delta < 2)
        diags.push_back("delta must be >= 2 for unrooted problems, got " + std::to_string(p.delta));
    if (p.alphabet_size() > kMaxAlphabet)
        diags.push_back("alphabet exceeds " + std::to_string(kMaxAlphabet) + " labels");
    for (size_t i = 0; i + 1 < p.alphabet.size(); ++i)
        for (size_t j = i + 1; j < p.alphabet.size(); ++j)
            if (p.alphabet[i] == p.alphabet[j])
                diags.push_back("duplicate label name '" + p.alphabet[i] + "'");
    auto check = [&](const LabelMultiset& m, int arity, const char* what) {
        if (m.arity() != arity)
            diags.push_back(std::string(what) + " has arity " + std::to_string(m.arity()) +
                            ", expected " + std::to_string(arity));
        for (LabelId id : m.entries)
            if (id < 0 || id >= p.alphabet_size())
                diags.push_back(std::string(what) + " references label id " + std::to_string(id) +
                                " outside the alphabet");
    };
    for (const auto& c : p.node_configs) check(c, p.delta, "node configuration");
    for (const auto& c : p.edge_configs) check(c, 2, "edge configuration");
    return diags;
}

inline std::vector<std::string> validate_problem(const RootedProblem& p) {
    std::vector<std::string> diags;
    if (p.delta < 1)
        diags.push_back("delta must be >= 1 for rooted problems, got " + std::to_string(p.delta));
    if (p.alphabet_size() > kMaxAlphabet)
        diags.push_back("alphabet exceeds " + std::to_string(kMaxAlphabet) + " labels");
    for (size_t i = 0; i + 1 < p.alphabet.size(); ++i)
        for (size_t j = i + 1; j < p.alphabet.size(); ++j)
            if (p.alphabet[i] == p.alphabet[j])
                diags.push_back("duplicate label name '" + p.alphabet[i] + "'");
    for (const auto& c : p.configs) {
        if (c.label < 0 || c.label >= p.alphabet_size())
            diags.push_back("configuration references label id " + std::to_string(c.label) +
                            " outside the alphabet");
        if (c.children.arity() != p.delta)
            diags.push_back("configuration for label id " + std::to_string(c.label) + " has " +
                            std::to_string(c.children.arity()) + " children, expected " +
                            std::to_string(p.delta));
        for (LabelId id : c.children.entries)
            if (id < 0 || id >= p.alphabet_size())
                diags.push_back("configuration references label id " + std::to_string(id) +
                                " outside the alphabet");
    }
    return diags;
}

} // namespace lcl
