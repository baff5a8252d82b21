#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "commsig/binomial.hpp"
#include "commsig/graph.hpp"

namespace commsig {

/// Community-induced graph: groups become nodes, cross-group node-pair edges
/// accumulate (with multiplicity) into symmetric weights, internal edges into
/// per-group self weights. Nodes outside the partition fall into a residual
/// bucket so that the weights always account for every edge of the graph.
struct GroupGraph {
    std::vector<Group> groups;               // residual appended last when present
    bool has_residual = false;
    Count node_count = 0;                    // of the underlying graph
    std::vector<Count> self_weights;         // internal edge count per group
    std::map<std::pair<int, int>, Count> weights;  // key (i, j) with i < j

    Count weight(int a, int b) const {
        if (a == b) throw std::invalid_argument("GroupGraph::weight: use self_weights");
        auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        auto it = weights.find(key);
        return it == weights.end() ? 0 : it->second;
    }

    /// Total weight of edges leaving group i (row sum).
    Count out_weight(int i) const {
        Count total = 0;
        for (const auto& [key, w] : weights)
            if (key.first == i || key.second == i) total += w;
        return total;
    }

    int group_count() const { return static_cast<int>(groups.size()); }
};

inline GroupGraph build_group_graph(const Graph& graph, std::vector<Group> partition) {
    std::vector<int> owner(static_cast<std::size_t>(graph.node_count()), -1);
    for (std::size_t gi = 0; gi < partition.size(); ++gi) {
        for (NodeId v : partition[gi].members) {
            if (v < 0 || v >= graph.node_count())
                throw std::out_of_range("build_group_graph: member out of range");
            if (owner[static_cast<std::size_t>(v)] != -1)
                throw std::invalid_argument("build_group_graph: overlapping groups");
            owner[static_cast<std::size_t>(v)] = static_cast<int>(gi);
        }
    }

    GroupGraph gg;
    gg.node_count = graph.node_count();
    std::vector<NodeId> unassigned;
    for (NodeId v = 0; v < graph.node_count(); ++v)
        if (owner[static_cast<std::size_t>(v)] == -1) unassigned.push_back(v);
    gg.groups = std::move(partition);
    if (!unassigned.empty()) {
        int residual = static_cast<int>(gg.groups.size());
        for (NodeId v : unassigned) owner[static_cast<std::size_t>(v)] = residual;
        gg.groups.push_back(Group{"_unassigned", std::move(unassigned)});
        gg.has_residual = true;
    }

    gg.self_weights.assign(gg.groups.size(), 0);
    for (NodeId u = 0; u < graph.node_count(); ++u) {
        int gu = owner[static_cast<std::size_t>(u)];
        for (const Neighbor& nb : graph.neighbors(u)) {
            if (nb.node < u) continue;  // each undirected edge once
            int gv = owner[static_cast<std::size_t>(nb.node)];
            if (gu == gv)
                gg.self_weights[static_cast<std::size_t>(gu)] += nb.multiplicity;
            else
                gg.weights[{std::min(gu, gv), std::max(gu, gv)}] += nb.multiplicity;
        }
    }
    return gg;
}

enum class TrialsMode { outgoing, total };

struct EdgeSignificance {
    int source = -1;  // the conditioned side
    int target = -1;
    Count weight = 0;   // cross edges from source to target
    Count trials = 0;
    double p = 0.0;     // |target| / (n - |source|)
    double score = 0.0;
    bool zero_trials = false;
};

/// Tail significance of the (source -> target) interaction: out of the
/// source's trials, how surprising is routing `weight` of them into target
/// when targets are picked uniformly among non-source nodes. Scores are
/// directional; score(a, b) and score(b, a) generally differ.
inline EdgeSignificance edge_significance(const GroupGraph& gg, int source, int target,
                                          TrialsMode mode = TrialsMode::outgoing,
                                          const ScoreOptions& options = {}) {
    if (source == target) throw std::invalid_argument("edge_significance: source == target");
    if (source < 0 || source >= gg.group_count() || target < 0 || target >= gg.group_count())
        throw std::out_of_range("edge_significance: group index out of range");

    EdgeSignificance result;
    result.source = source;
    result.target = target;
    result.weight = gg.weight(source, target);
    result.trials = gg.out_weight(source);
    if (mode == TrialsMode::total)
        result.trials += gg.self_weights[static_cast<std::size_t>(source)];
    const Count others = gg.node_count - gg.groups[static_cast<std::size_t>(source)].size();
    result.p = others > 0 ? static_cast<double>(gg.groups[static_cast<std::size_t>(target)].size()) /
                                static_cast<double>(others)
                          : 0.0;
    if (result.trials == 0) {
        result.zero_trials = true;
        return result;
    }
    result.score = binomial_score(result.trials, result.weight, result.p, options).score;
    return result;
}

}  // namespace commsig
