#pragma once

// The trim operator for both formalisms, computed as a label-set fixpoint.
//
// Unrooted: Sigma_1 = labels appearing in S; a label sigma survives an
// iteration iff some C in S contains sigma and every other label of C has
// an edge partner in the previous label set. A configuration survives the
// trim iff each of its labels has an edge partner in the fixpoint.
//
// Rooted: Sigma_0 = the given labels; a label survives iff it heads a
// configuration whose children all lie in the previous set.

#include <vector>

#include "lcl/core.hpp"

namespace lcl {

struct TrimTrace {
    std::vector<LabelSet> sigma_sequence; // last two entries equal
    LabelSet fixpoint = 0;
    // survivors; exactly one of these is meaningful per formalism
    std::vector<LabelMultiset> surviving_configs;
    LabelSet surviving_labels = 0;
};

inline std::pair<std::vector<LabelMultiset>, TrimTrace> trim_unrooted(
    const UnrootedProblem& problem, const std::vector<LabelMultiset>& configs) {
    TrimTrace trace;
    auto partners = problem.edge_partners();
    LabelSet sigma = 0;
    for (const auto& c : configs) sigma |= c.label_set();
    trace.sigma_sequence.push_back(sigma);
    for (;;) {
        LabelSet next = 0;
        for (const auto& c : configs) {
            for (LabelId sigma_id : set_to_vector(c.label_set() & sigma)) {
                if (set_has(next, sigma_id)) continue;
                bool ok = true;
                for (LabelId alpha : c.minus_one(sigma_id).entries)
                    if ((partners[alpha] & sigma) == 0) {
                        ok = false;
                        break;
                    }
                if (ok) next = set_with(next, sigma_id);
            }
        }
        trace.sigma_sequence.push_back(next);
        if (next == sigma) break;
        sigma = next;
    }
    trace.fixpoint = sigma;
    std::vector<LabelMultiset> result;
    for (const auto& c : configs) {
        bool ok = true;
        for (LabelId alpha : c.entries)
            if ((partners[alpha] & sigma) == 0) {
                ok = false;
                break;
            }
        if (ok) result.push_back(c);
    }
    trace.surviving_configs = result;
    return {result, trace};
}

inline std::pair<LabelSet, TrimTrace> trim_rooted(const RootedProblem& problem, LabelSet labels) {
    TrimTrace trace;
    LabelSet sigma = labels;
    trace.sigma_sequence.push_back(sigma);
    for (;;) {
        LabelSet next = 0;
        for (const auto& cfg : problem.configs) {
            if (!set_has(sigma, cfg.label)) continue;
            if ((cfg.children.label_set() & ~sigma) == 0) next = set_with(next, cfg.label);
        }
        trace.sigma_sequence.push_back(next);
        if (next == sigma) break;
        sigma = next;
    }
    trace.fixpoint = sigma;
    trace.surviving_labels = sigma;
    return {sigma, trace};
}

} // namespace lcl
