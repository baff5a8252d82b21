#pragma once

#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "commsig/graph.hpp"
#include "commsig/util.hpp"

namespace commsig {

enum class Objective { edge_modularity, node_modularity };

/// Exhaustive, exclusive assignment of the original nodes, one per Louvain
/// pass. Level 0 is the first pass; the last level is the final output,
/// where the objective is highest.
struct Partition {
    std::vector<std::vector<NodeId>> levels;  // levels[k][node] -> community id

    std::size_t level_count() const { return levels.size(); }
    const std::vector<NodeId>& assignment(std::size_t level) const { return levels.at(level); }
    const std::vector<NodeId>& final_assignment() const { return levels.back(); }
};

/// Total modularity of an assignment under the chosen null model. The edge
/// objective is standard Newman modularity; the node objective replaces the
/// expected internal proportion with deg(g)|g|/(m n).
inline double modularity_total(const Graph& graph, const std::vector<NodeId>& assignment,
                               Objective objective) {
    if (assignment.size() != static_cast<std::size_t>(graph.node_count()))
        throw std::invalid_argument("modularity_total: assignment size mismatch");
    const Count m = graph.edge_count();
    if (m <= 0) throw std::invalid_argument("modularity_total: graph has no edges");

    NodeId max_comm = 0;
    for (NodeId c : assignment) max_comm = std::max(max_comm, c);
    std::vector<Count> din(static_cast<std::size_t>(max_comm) + 1, 0);
    std::vector<Count> vol(static_cast<std::size_t>(max_comm) + 1, 0);
    std::vector<Count> size(static_cast<std::size_t>(max_comm) + 1, 0);
    for (NodeId u = 0; u < graph.node_count(); ++u) {
        const auto c = static_cast<std::size_t>(assignment[static_cast<std::size_t>(u)]);
        vol[c] += graph.weighted_degree(u);
        size[c] += 1;
        for (const Neighbor& nb : graph.neighbors(u)) {
            if (nb.node < u) continue;
            if (assignment[static_cast<std::size_t>(nb.node)] ==
                assignment[static_cast<std::size_t>(u)])
                din[c] += nb.multiplicity;
        }
    }

    const double dm = static_cast<double>(m);
    double total = 0.0;
    if (objective == Objective::edge_modularity) {
        for (std::size_t c = 0; c < din.size(); ++c) {
            if (size[c] == 0) continue;
            const double pe = static_cast<double>(vol[c]) / (2.0 * dm);
            total += static_cast<double>(din[c]) / dm - pe * pe;
        }
    } else {
        const double n = static_cast<double>(graph.node_count());
        for (std::size_t c = 0; c < din.size(); ++c) {
            if (size[c] == 0) continue;
            const double deg = static_cast<double>(vol[c] - din[c]);
            total += (static_cast<double>(din[c]) -
                      deg * static_cast<double>(size[c]) / n) /
                     dm;
        }
    }
    return total;
}

namespace detail {

// Working graph of super-nodes during aggregation passes.
struct WorkGraph {
    std::vector<std::vector<std::pair<int, Count>>> adj;  // inter-node weights
    std::vector<Count> self_weight;   // internal edges inside each super-node
    std::vector<Count> node_size;     // original node count
    std::vector<Count> volume;        // 2*self + sum of incident weights
    Count m = 0;
    Count n_original = 0;

    int size() const { return static_cast<int>(adj.size()); }
};

inline WorkGraph work_graph_from(const Graph& graph) {
    WorkGraph wg;
    wg.m = graph.edge_count();
    wg.n_original = graph.node_count();
    wg.adj.resize(static_cast<std::size_t>(graph.node_count()));
    wg.self_weight.assign(wg.adj.size(), 0);
    wg.node_size.assign(wg.adj.size(), 1);
    wg.volume.assign(wg.adj.size(), 0);
    for (NodeId u = 0; u < graph.node_count(); ++u) {
        const auto ui = static_cast<std::size_t>(u);
        for (const Neighbor& nb : graph.neighbors(u)) {
            if (nb.node == u)
                wg.self_weight[ui] += nb.multiplicity;
            else
                wg.adj[ui].push_back({nb.node, nb.multiplicity});
        }
        wg.volume[ui] = graph.weighted_degree(u);
    }
    return wg;
}

struct CommunityState {
    std::vector<int> comm;
    std::vector<Count> vol;    // sum of member volumes
    std::vector<Count> din;    // internal edge weight
    std::vector<Count> size;   // original node count

    explicit CommunityState(const WorkGraph& wg)
        : comm(static_cast<std::size_t>(wg.size())),
          vol(wg.volume),
          din(wg.self_weight),
          size(wg.node_size) {
        std::iota(comm.begin(), comm.end(), 0);
    }
};

// One pass of local moves; returns true if any node changed community.
inline bool local_move_phase(const WorkGraph& wg, CommunityState& state, Objective objective,
                             Rng& rng) {
    const double m = static_cast<double>(wg.m);
    const double n = static_cast<double>(wg.n_original);
    std::vector<int> order(static_cast<std::size_t>(wg.size()));
    std::iota(order.begin(), order.end(), 0);

    std::vector<Count> neighbor_weight(static_cast<std::size_t>(wg.size()), 0);
    std::vector<int> touched;
    bool any_move = false;
    bool moved_in_sweep = true;
    constexpr double kGainEps = 1e-12;

    while (moved_in_sweep) {
        moved_in_sweep = false;
        rng.shuffle(order);
        for (int u : order) {
            const auto ui = static_cast<std::size_t>(u);
            const int old_comm = state.comm[ui];
            const Count vol_u = wg.volume[ui];
            const Count self_u = wg.self_weight[ui];
            const Count size_u = wg.node_size[ui];
            const Count deg_u = vol_u - self_u;

            touched.clear();
            for (const auto& [v, w] : wg.adj[ui]) {
                const int c = state.comm[static_cast<std::size_t>(v)];
                if (neighbor_weight[static_cast<std::size_t>(c)] == 0) touched.push_back(c);
                neighbor_weight[static_cast<std::size_t>(c)] += w;
            }

            // Remove u from its community, then evaluate candidates against
            // the same baseline so that staying put has a comparable gain.
            state.vol[static_cast<std::size_t>(old_comm)] -= vol_u;
            state.din[static_cast<std::size_t>(old_comm)] -=
                self_u + neighbor_weight[static_cast<std::size_t>(old_comm)];
            state.size[static_cast<std::size_t>(old_comm)] -= size_u;

            auto gain = [&](int c) {
                const double k_uc =
                    static_cast<double>(neighbor_weight[static_cast<std::size_t>(c)]);
                if (objective == Objective::edge_modularity) {
                    return k_uc / m - static_cast<double>(state.vol[static_cast<std::size_t>(c)]) *
                                          static_cast<double>(vol_u) / (2.0 * m * m);
                }
                const double deg_c =
                    static_cast<double>(state.vol[static_cast<std::size_t>(c)] -
                                        state.din[static_cast<std::size_t>(c)]);
                const double size_c = static_cast<double>(state.size[static_cast<std::size_t>(c)]);
                return (k_uc - (deg_c * static_cast<double>(size_u) +
                                static_cast<double>(deg_u) * size_c -
                                k_uc * (size_c + static_cast<double>(size_u))) /
                                   n) /
                       m;
            };

            int best = old_comm;
            double best_gain = gain(old_comm);
            for (int c : touched) {
                if (c == old_comm) continue;
                const double g = gain(c);
                if (g > best_gain + kGainEps) {
                    best = c;
                    best_gain = g;
                }
            }

            state.vol[static_cast<std::size_t>(best)] += vol_u;
            state.din[static_cast<std::size_t>(best)] +=
                self_u + neighbor_weight[static_cast<std::size_t>(best)];
            state.size[static_cast<std::size_t>(best)] += size_u;
            state.comm[ui] = best;
            if (best != old_comm) {
                any_move = true;
                moved_in_sweep = true;
            }

            for (int c : touched) neighbor_weight[static_cast<std::size_t>(c)] = 0;
        }
    }
    return any_move;
}

// Renumbers communities densely in order of first appearance by node index.
inline std::vector<int> renumber(const std::vector<int>& comm, int& community_count) {
    std::vector<int> remap(comm.size(), -1);
    std::vector<int> dense(comm.size());
    int next = 0;
    for (std::size_t i = 0; i < comm.size(); ++i) {
        int c = comm[i];
        if (remap[static_cast<std::size_t>(c)] == -1) remap[static_cast<std::size_t>(c)] = next++;
        dense[i] = remap[static_cast<std::size_t>(c)];
    }
    community_count = next;
    return dense;
}

inline WorkGraph aggregate(const WorkGraph& wg, const std::vector<int>& dense_comm,
                           int community_count) {
    WorkGraph out;
    out.m = wg.m;
    out.n_original = wg.n_original;
    out.adj.resize(static_cast<std::size_t>(community_count));
    out.self_weight.assign(static_cast<std::size_t>(community_count), 0);
    out.node_size.assign(static_cast<std::size_t>(community_count), 0);
    out.volume.assign(static_cast<std::size_t>(community_count), 0);

    std::vector<std::unordered_map<int, Count>> acc(static_cast<std::size_t>(community_count));
    for (int u = 0; u < wg.size(); ++u) {
        const auto ui = static_cast<std::size_t>(u);
        const auto cu = static_cast<std::size_t>(dense_comm[ui]);
        out.self_weight[cu] += wg.self_weight[ui];
        out.node_size[cu] += wg.node_size[ui];
        for (const auto& [v, w] : wg.adj[ui]) {
            const int cv = dense_comm[static_cast<std::size_t>(v)];
            if (static_cast<std::size_t>(cv) == cu) {
                if (v > u) out.self_weight[cu] += w;
            } else {
                acc[cu][cv] += w;
            }
        }
    }
    for (int c = 0; c < community_count; ++c) {
        const auto ci = static_cast<std::size_t>(c);
        out.adj[ci].reserve(acc[ci].size());
        for (const auto& [v, w] : acc[ci]) out.adj[ci].push_back({v, w});
        std::sort(out.adj[ci].begin(), out.adj[ci].end());
        Count vol = 2 * out.self_weight[ci];
        for (const auto& [v, w] : out.adj[ci]) vol += w;
        out.volume[ci] = vol;
    }
    return out;
}

}  // namespace detail

/// Two-phase Louvain over the chosen objective: local moves to the
/// neighboring community of highest positive gain in seeded random order,
/// then graph aggregation, repeated until a pass makes no move. Every pass
/// records the induced partition of the original nodes.
inline Partition louvain(const Graph& graph, Objective objective, std::uint64_t seed) {
    if (graph.edge_count() <= 0) throw std::invalid_argument("louvain: graph has no edges");

    detail::WorkGraph wg = detail::work_graph_from(graph);
    std::vector<int> node_to_super(static_cast<std::size_t>(graph.node_count()));
    std::iota(node_to_super.begin(), node_to_super.end(), 0);

    Partition partition;
    Rng rng(derive_seed(seed, 0x10u));
    while (true) {
        detail::CommunityState state(wg);
        const bool moved = detail::local_move_phase(wg, state, objective, rng);
        if (!moved && !partition.levels.empty()) break;

        int community_count = 0;
        std::vector<int> dense = detail::renumber(state.comm, community_count);

        std::vector<NodeId> level(static_cast<std::size_t>(graph.node_count()));
        for (NodeId v = 0; v < graph.node_count(); ++v)
            level[static_cast<std::size_t>(v)] = static_cast<NodeId>(
                dense[static_cast<std::size_t>(node_to_super[static_cast<std::size_t>(v)])]);
        partition.levels.push_back(std::move(level));

        if (community_count == wg.size()) break;
        wg = detail::aggregate(wg, dense, community_count);
        for (auto& s : node_to_super)
            s = dense[static_cast<std::size_t>(s)];
    }
    return partition;
}

struct SizeRange {
    Count min_size = 3;
    Count max_size = std::numeric_limits<Count>::max();
};

/// Groups at one Louvain level, filtered by size (minimum 3 by default).
/// Group ids follow community order: "c0", "c1", ...
inline std::vector<Group> extract_level(const Partition& partition, std::size_t level,
                                        const SizeRange& range = {}) {
    if (level >= partition.level_count())
        throw std::out_of_range("extract_level: level out of range");
    const auto& assignment = partition.assignment(level);
    NodeId max_comm = 0;
    for (NodeId c : assignment) max_comm = std::max(max_comm, c);
    std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(max_comm) + 1);
    for (NodeId v = 0; v < static_cast<NodeId>(assignment.size()); ++v)
        members[static_cast<std::size_t>(assignment[static_cast<std::size_t>(v)])].push_back(v);

    std::vector<Group> groups;
    for (std::size_t c = 0; c < members.size(); ++c) {
        const auto count = static_cast<Count>(members[c].size());
        if (count < range.min_size || count > range.max_size) continue;
        groups.push_back(Group{"c" + std::to_string(c), std::move(members[c])});
    }
    return groups;
}

inline std::vector<Group> extract_final(const Partition& partition, const SizeRange& range = {}) {
    return extract_level(partition, partition.level_count() - 1, range);
}

}  // namespace commsig
