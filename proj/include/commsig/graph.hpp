#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace commsig {

using NodeId = std::int32_t;
using Count = std::int64_t;

struct Neighbor {
    NodeId node;
    Count multiplicity;
};

/// Immutable undirected multigraph with dense node ids and a label table.
/// Adjacency is stored symmetrically and sorted by neighbor id; parallel
/// edges are collapsed into integer multiplicities. Self-loops are rejected
/// unless the graph was built with allow_self_loops; when present, a
/// self-loop counts once in edge_count() and contributes twice to the
/// owner's weighted degree.
class Graph {
  public:
    Graph() = default;

    Graph(std::vector<std::string> labels,
          const std::vector<std::tuple<NodeId, NodeId, Count>>& edges,
          bool allow_self_loops = false)
        : labels_(std::move(labels)), allow_self_loops_(allow_self_loops) {
        const auto n = static_cast<NodeId>(labels_.size());
        index_.reserve(labels_.size());
        for (NodeId v = 0; v < n; ++v) {
            if (!index_.emplace(labels_[v], v).second)
                throw std::invalid_argument("duplicate node label: " + labels_[v]);
        }
        adjacency_.resize(labels_.size());
        std::vector<std::unordered_map<NodeId, Count>> acc(labels_.size());
        for (const auto& [u, v, w] : edges) {
            if (u < 0 || u >= n || v < 0 || v >= n)
                throw std::out_of_range("edge endpoint out of range");
            if (w <= 0) throw std::invalid_argument("edge multiplicity must be positive");
            if (u == v) {
                if (!allow_self_loops_) throw std::invalid_argument("self-loop rejected");
                acc[u][u] += w;
                continue;
            }
            acc[u][v] += w;
            acc[v][u] += w;
        }
        degree_.assign(labels_.size(), 0);
        edge_count_ = 0;
        for (NodeId v = 0; v < n; ++v) {
            auto& row = adjacency_[v];
            row.reserve(acc[v].size());
            for (const auto& [nb, w] : acc[v]) row.push_back({nb, w});
            std::sort(row.begin(), row.end(),
                      [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
            for (const auto& nb : row) {
                degree_[v] += (nb.node == v) ? 2 * nb.multiplicity : nb.multiplicity;
                if (nb.node >= v) edge_count_ += nb.multiplicity;
            }
        }
    }

    NodeId node_count() const { return static_cast<NodeId>(labels_.size()); }

    /// Number of edges counted with multiplicity; each undirected edge once.
    Count edge_count() const { return edge_count_; }

    const std::vector<Neighbor>& neighbors(NodeId v) const { return adjacency_[v]; }

    /// Weighted degree of a node (self-loops count twice).
    Count weighted_degree(NodeId v) const { return degree_[v]; }

    const std::string& label(NodeId v) const { return labels_[v]; }

    std::optional<NodeId> find(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool allows_self_loops() const { return allow_self_loops_; }

    Count multiplicity(NodeId u, NodeId v) const {
        const auto& row = adjacency_[u];
        auto it = std::lower_bound(row.begin(), row.end(), v,
                                   [](const Neighbor& a, NodeId b) { return a.node < b; });
        return (it != row.end() && it->node == v) ? it->multiplicity : 0;
    }

  private:
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<Count> degree_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    Count edge_count_ = 0;
    bool allow_self_loops_ = false;
};

struct Group {
    std::string id;
    std::vector<NodeId> members;  // sorted, unique

    Count size() const { return static_cast<Count>(members.size()); }
};

/// Validates and normalizes a member list: sorted, unique, nonempty, in range.
inline Group make_group(std::string id, std::vector<NodeId> members, NodeId node_count) {
    if (members.empty()) throw std::invalid_argument("group '" + id + "' is empty");
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.front() < 0 || members.back() >= node_count)
        throw std::out_of_range("group '" + id + "' has a member out of range");
    return Group{std::move(id), std::move(members)};
}

enum class NullModel { node, edge };

struct GroupStats {
    Count size = 0;
    Count deg = 0;     // edges with at least one endpoint in the group
    Count din = 0;     // edges with both endpoints in the group
    double p_node = 0; // |g| / n
    double p_edge = 0; // (deg + din) / (2m)
    double q = 0;      // din / deg, 0 when deg == 0

    double p(NullModel model) const { return model == NullModel::node ? p_node : p_edge; }

    /// Ratio of observed to expected proportion under the chosen null model.
    double intensity(NullModel model) const {
        double pp = p(model);
        return pp > 0 ? q / pp : 0.0;
    }
};

/// Reusable membership marker so repeated group_stats calls cost O(|g|)
/// rather than O(n) to reset. A stamp value identifies the current group.
class GroupScratch {
  public:
    void mark(const Group& group, NodeId node_count) {
        if (static_cast<std::size_t>(node_count) != stamp_.size()) {
            stamp_.assign(static_cast<std::size_t>(node_count), 0);
            token_ = 0;
        }
        ++token_;
        for (NodeId v : group.members) stamp_[static_cast<std::size_t>(v)] = token_;
    }

    bool contains(NodeId v) const { return stamp_[static_cast<std::size_t>(v)] == token_; }

  private:
    std::vector<std::uint32_t> stamp_;
    std::uint32_t token_ = 0;
};

inline GroupStats group_stats(const Graph& graph, const Group& group, GroupScratch& scratch) {
    if (group.members.empty()) throw std::invalid_argument("group is empty");
    if (group.members.front() < 0 || group.members.back() >= graph.node_count())
        throw std::out_of_range("group member out of range");
    scratch.mark(group, graph.node_count());

    GroupStats s;
    s.size = group.size();
    for (NodeId u : group.members) {
        for (const Neighbor& nb : graph.neighbors(u)) {
            if (nb.node == u) {
                s.din += nb.multiplicity;  // self-loop, internal by definition
            } else if (scratch.contains(nb.node)) {
                if (u < nb.node) s.din += nb.multiplicity;  // internal edge, count once
            } else {
                s.deg += nb.multiplicity;  // outgoing edge, seen once from inside
            }
        }
    }
    s.deg += s.din;
    const double n = static_cast<double>(graph.node_count());
    const Count m = graph.edge_count();
    s.p_node = n > 0 ? static_cast<double>(s.size) / n : 0.0;
    s.p_edge = m > 0 ? static_cast<double>(s.deg + s.din) / static_cast<double>(2 * m) : 0.0;
    s.q = s.deg > 0 ? static_cast<double>(s.din) / static_cast<double>(s.deg) : 0.0;
    return s;
}

inline GroupStats group_stats(const Graph& graph, const Group& group) {
    GroupScratch scratch;
    return group_stats(graph, group, scratch);
}

}  // namespace commsig
