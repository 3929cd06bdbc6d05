#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "odflow/flow.hpp"
#include "odflow/network.hpp"

namespace odflow {

enum class StepModel { single, multi };

// Equation/unknown bookkeeping for the uniqueness condition. n4 counts the
// zero-forced tensor entries: for the multi-step model these are the cells
// outside the rigid per-step support, for the single-step model the cells
// outside the union of the steps (links unused by any trip from the origin).
struct CountSummary {
    int n_links = 0;
    int n_origins = 0;
    int tau_max = 0;
    long long n4_single = 0;
    long long n4_multi = 0;

    double links_per_origin() const { return static_cast<double>(n_links) / n_origins; }
};

inline CountSummary count_constraints(const Network& net, const PathSet& paths) {
    CountSummary s;
    s.n_links = net.link_count();
    s.n_origins = paths.origin_count();
    s.tau_max = paths.tau_max;
    const SupportMask mask = rigid_support(net, paths);
    long long multi_cells = 0, single_cells = 0;
    for (int li = 0; li < net.link_count(); ++li) {
        for (int oi = 0; oi < paths.origin_count(); ++oi) {
            bool any = false;
            for (int tau = 0; tau < paths.tau_max; ++tau) {
                if (mask[tau](li, oi)) {
                    ++multi_cells;
                    any = true;
                }
            }
            if (any) ++single_cells;
        }
    }
    s.n4_multi = static_cast<long long>(s.tau_max) * s.n_links * s.n_origins - multi_cells;
    s.n4_single = static_cast<long long>(s.n_links) * s.n_origins - single_cells;
    return s;
}

// Equation count vs unknown count. A unique solution needs margin >= 0;
// when the network has no more links than origins the margin no longer
// grows with n_T, so lengthening the horizon cannot help.
struct ConditionResult {
    bool holds = false;
    long long margin = 0;
    bool growth_helps = false;
};

inline ConditionResult necessary_condition(const CountSummary& s, long long n_T,
                                           StepModel model) {
    const long long nl = s.n_links, no = s.n_origins;
    long long equations = nl * n_T + no;
    long long unknowns = no * n_T;
    if (model == StepModel::single) {
        equations += s.n4_single;
        unknowns += nl * no;
    } else {
        equations += s.n4_multi;
        unknowns += static_cast<long long>(s.tau_max) * nl * no;
    }
    ConditionResult r;
    r.margin = equations - unknowns;
    r.holds = r.margin >= 0;
    r.growth_helps = nl > no;
    return r;
}

// Horizon estimate n_T >~ tau_max * c/(c-1) * n_O (tau_max = 1 for the
// single-step model); undefined when c <= 1.
struct ThumbResult {
    bool bounded = false;
    long long n_T = 0;
};

inline ThumbResult rule_of_thumb_nT(const CountSummary& s, StepModel model) {
    ThumbResult r;
    if (s.n_links <= s.n_origins) return r;  // c <= 1, no finite horizon works
    r.bounded = true;
    const long long tau = model == StepModel::single ? 1 : s.tau_max;
    // tau * c/(c-1) * n_O = tau * n_links * n_origins / (n_links - n_origins)
    const long long num = tau * static_cast<long long>(s.n_links) * s.n_origins;
    const long long den = s.n_links - s.n_origins;
    r.n_T = (num + den - 1) / den;
    return r;
}

// Node triples a->b->c whose reverse links are both absent: any network
// containing one inherits the chain's non-uniqueness.
inline std::vector<std::array<int, 3>> flag_chain_subgraph(const Network& net) {
    std::vector<std::array<int, 3>> triples;
    for (const Link& ab : net.links()) {
        if (net.has_link(ab.head, ab.tail)) continue;
        for (int li : net.out_links(ab.head)) {
            const Link& bc = net.link(li);
            if (net.has_link(bc.head, bc.tail)) continue;
            triples.push_back({ab.tail, ab.head, bc.head});
        }
    }
    return triples;
}

}  // namespace odflow
