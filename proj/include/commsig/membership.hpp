#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "commsig/binomial.hpp"
#include "commsig/graph.hpp"

namespace commsig {

struct MembershipScore {
    NodeId node = -1;
    Count deg_node = 0;   // weighted node degree
    Count din_node = 0;   // weighted edges into group \ {node}
    double p = 0.0;
    double score = 0.0;   // -log10 tail, 0 when insignificant
};

struct MembershipOptions {
    Count exact_threshold = 50;
    bool self_excluded_p = true;  // p = (|g|-1)/(n-1), reproducing footnote 2
};

/// Binomial membership evidence of a node within its group: the group-level
/// score with node degree as trials and the node's internal edges as
/// successes.
inline MembershipScore membership_score(const Graph& graph, const Group& group, NodeId node,
                                        const MembershipOptions& options, GroupScratch& scratch) {
    if (!std::binary_search(group.members.begin(), group.members.end(), node))
        throw std::invalid_argument("membership_score: node not in group");
    scratch.mark(group, graph.node_count());

    MembershipScore result;
    result.node = node;
    result.deg_node = graph.weighted_degree(node);
    for (const Neighbor& nb : graph.neighbors(node))
        if (nb.node != node && scratch.contains(nb.node)) result.din_node += nb.multiplicity;
    result.p = options.self_excluded_p
                   ? node_model_p(group.size(), graph.node_count(), true)
                   : node_model_p(group.size(), graph.node_count(), false);
    result.score =
        binomial_score(result.deg_node, result.din_node, result.p, {options.exact_threshold})
            .score;
    return result;
}

inline MembershipScore membership_score(const Graph& graph, const Group& group, NodeId node,
                                        const MembershipOptions& options = {}) {
    GroupScratch scratch;
    return membership_score(graph, group, node, options, scratch);
}

enum class Aggregator { median, mean, quantile };

/// Quantile with linear interpolation between order statistics; the median
/// is quantile(0.5).
inline double interpolated_quantile(std::vector<double> values, double alpha) {
    if (values.empty()) throw std::invalid_argument("quantile of empty set");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("quantile alpha out of range");
    std::sort(values.begin(), values.end());
    const double pos = alpha * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

inline std::vector<MembershipScore> membership_scores(const Graph& graph, const Group& group,
                                                      const MembershipOptions& options = {}) {
    GroupScratch scratch;
    std::vector<MembershipScore> scores;
    scores.reserve(group.members.size());
    for (NodeId node : group.members)
        scores.push_back(membership_score(graph, group, node, options, scratch));
    return scores;
}

/// Group score aggregated from per-member membership scores; the median
/// avoids the resolution-limit preference for sparsely bridged unions.
inline double group_membership_score(const Graph& graph, const Group& group,
                                     Aggregator aggregator = Aggregator::median,
                                     double alpha = 0.5,
                                     const MembershipOptions& options = {}) {
    auto scores = membership_scores(graph, group, options);
    std::vector<double> values;
    values.reserve(scores.size());
    for (const auto& s : scores) values.push_back(s.score);
    switch (aggregator) {
        case Aggregator::mean: {
            double sum = 0.0;
            for (double v : values) sum += v;
            return sum / static_cast<double>(values.size());
        }
        case Aggregator::median:
            return interpolated_quantile(std::move(values), 0.5);
        case Aggregator::quantile:
            return interpolated_quantile(std::move(values), alpha);
    }
    throw std::logic_error("unreachable");
}

struct ResolutionReport {
    Count clique_size = 0;
    Count bridge_edges = 0;
    Count ambient_nodes = 0;
    BinomialScore group1;
    BinomialScore group2;
    BinomialScore combined;
    double median_membership1 = 0.0;
    double median_membership2 = 0.0;
    double median_membership_combined = 0.0;
};

/// Builds the two-clique dumbbell inside an otherwise empty ambient graph and
/// scores the cliques and their union under the group binomial score and the
/// median membership score. With few bridge edges and a large ambient set,
/// the union wins on the former and loses on the latter.
inline ResolutionReport resolution_demo(Count clique_size, Count bridge_edges,
                                        Count ambient_nodes,
                                        const NodeModelOptions& group_options = {},
                                        const MembershipOptions& member_options = {}) {
    if (clique_size < 2) throw std::invalid_argument("resolution_demo: clique_size must be >= 2");
    if (bridge_edges > clique_size)
        throw std::invalid_argument("resolution_demo: more bridge edges than clique nodes");
    if (ambient_nodes < 2 * clique_size)
        throw std::invalid_argument("resolution_demo: ambient graph too small");

    std::vector<std::string> labels(static_cast<std::size_t>(ambient_nodes));
    for (Count v = 0; v < ambient_nodes; ++v) labels[static_cast<std::size_t>(v)] = std::to_string(v);
    std::vector<std::tuple<NodeId, NodeId, Count>> edges;
    auto add_clique = [&](NodeId base) {
        for (Count i = 0; i < clique_size; ++i)
            for (Count j = i + 1; j < clique_size; ++j)
                edges.emplace_back(base + static_cast<NodeId>(i), base + static_cast<NodeId>(j), 1);
    };
    add_clique(0);
    add_clique(static_cast<NodeId>(clique_size));
    for (Count b = 0; b < bridge_edges; ++b)
        edges.emplace_back(static_cast<NodeId>(b), static_cast<NodeId>(clique_size + b), 1);
    Graph graph(std::move(labels), edges);

    std::vector<NodeId> members1, members2, all;
    for (Count i = 0; i < clique_size; ++i) {
        members1.push_back(static_cast<NodeId>(i));
        members2.push_back(static_cast<NodeId>(clique_size + i));
    }
    all = members1;
    all.insert(all.end(), members2.begin(), members2.end());
    Group g1 = make_group("g1", members1, graph.node_count());
    Group g2 = make_group("g2", members2, graph.node_count());
    Group both = make_group("union", all, graph.node_count());

    ResolutionReport report;
    report.clique_size = clique_size;
    report.bridge_edges = bridge_edges;
    report.ambient_nodes = ambient_nodes;
    report.group1 = score_node_based(graph, g1, group_options);
    report.group2 = score_node_based(graph, g2, group_options);
    report.combined = score_node_based(graph, both, group_options);
    report.median_membership1 =
        group_membership_score(graph, g1, Aggregator::median, 0.5, member_options);
    report.median_membership2 =
        group_membership_score(graph, g2, Aggregator::median, 0.5, member_options);
    report.median_membership_combined =
        group_membership_score(graph, both, Aggregator::median, 0.5, member_options);
    return report;
}

}  // namespace commsig
