#pragma once

#include <stdexcept>

#include "commsig/graph.hpp"

namespace commsig {

/// Group-wise modularity component: din/m - p_edge^2.
inline double modularity_groupwise(const GroupStats& stats, Count m) {
    if (m <= 0) throw std::invalid_argument("modularity_groupwise: graph has no edges");
    return static_cast<double>(stats.din) / static_cast<double>(m) - stats.p_edge * stats.p_edge;
}

inline double modularity_groupwise(const Graph& graph, const Group& group) {
    return modularity_groupwise(group_stats(graph, group), graph.edge_count());
}

/// Cut fraction of group volume, denominator min(vol(g), vol(complement));
/// lower is better. An isolated group (no outgoing edges) scores 0.
inline double conductance(const GroupStats& stats, Count m) {
    const Count cut = stats.deg - stats.din;
    const Count vol = stats.deg + stats.din;
    const Count vol_complement = 2 * m - vol;
    if (vol == 0 && vol_complement == 0)
        throw std::invalid_argument("conductance: both volumes are zero");
    if (cut == 0) return 0.0;
    return static_cast<double>(cut) / static_cast<double>(std::min(vol, vol_complement));
}

inline double conductance(const Graph& graph, const Group& group) {
    return conductance(group_stats(graph, group), graph.edge_count());
}

/// Triangle participation ratio: fraction of members that belong to at least
/// one triangle whose three vertices all lie in the group. Edge multiplicity
/// is ignored; only existence matters.
inline double tpr(const Graph& graph, const Group& group, GroupScratch& scratch) {
    if (group.members.empty()) throw std::invalid_argument("tpr: empty group");
    scratch.mark(group, graph.node_count());

    std::unordered_map<NodeId, std::vector<NodeId>> induced;
    induced.reserve(group.members.size());
    for (NodeId u : group.members) {
        auto& row = induced[u];
        for (const Neighbor& nb : graph.neighbors(u))
            if (nb.node != u && scratch.contains(nb.node)) row.push_back(nb.node);
        // adjacency is sorted, so the restriction stays sorted
    }

    std::unordered_map<NodeId, bool> in_triangle;
    for (NodeId u : group.members) in_triangle[u] = false;
    for (NodeId u : group.members) {
        const auto& nu = induced[u];
        for (NodeId v : nu) {
            if (v <= u) continue;
            const auto& nv = induced[v];
            // sorted-list intersection of the two member-restricted rows
            std::size_t i = 0, j = 0;
            while (i < nu.size() && j < nv.size()) {
                if (nu[i] < nv[j]) {
                    ++i;
                } else if (nu[i] > nv[j]) {
                    ++j;
                } else {
                    NodeId w = nu[i];
                    if (w != u && w != v) {
                        in_triangle[u] = true;
                        in_triangle[v] = true;
                        in_triangle[w] = true;
                    }
                    ++i;
                    ++j;
                }
            }
        }
    }
    Count hits = 0;
    for (NodeId u : group.members)
        if (in_triangle[u]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(group.size());
}

inline double tpr(const Graph& graph, const Group& group) {
    GroupScratch scratch;
    return tpr(graph, group, scratch);
}

/// Ranking by size uses descending order.
inline Count size_score(const Group& group) { return group.size(); }

struct BaselineVector {
    double modularity_q = 0.0;
    double conductance = 0.0;
    double tpr = 0.0;
    Count size = 0;
};

inline BaselineVector baseline_scores(const Graph& graph, const Group& group,
                                      GroupScratch& scratch) {
    GroupStats stats = group_stats(graph, group, scratch);
    BaselineVector v;
    v.modularity_q = modularity_groupwise(stats, graph.edge_count());
    v.conductance = conductance(stats, graph.edge_count());
    v.tpr = tpr(graph, group, scratch);
    v.size = group.size();
    return v;
}

}  // namespace commsig
