#include "commsig/group_graph.hpp"

#include <sstream>

#include <gtest/gtest.h>

#include "commsig/io.hpp"

namespace {

using namespace commsig;

TEST(GroupGraph, TwoDisconnectedTriangles) {
    std::istringstream in("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n");
    Graph g = load_graph(in);
    auto gg = build_group_graph(
        g, {make_group("a", {0, 1, 2}, 6), make_group("b", {3, 4, 5}, 6)});
    EXPECT_TRUE(gg.weights.empty());
    EXPECT_EQ(gg.self_weights[0], 3);
    EXPECT_EQ(gg.self_weights[1], 3);
    EXPECT_FALSE(gg.has_residual);
}

TEST(GroupGraph, DumbbellHasSingleCrossEdge) {
    std::ostringstream edges;
    for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) edges << u << ' ' << v << '\n';
    for (int u = 4; u < 8; ++u)
        for (int v = u + 1; v < 8; ++v) edges << u << ' ' << v << '\n';
    edges << "0 4\n";
    std::istringstream in(edges.str());
    Graph g = load_graph(in);
    auto gg = build_group_graph(
        g, {make_group("g1", {0, 1, 2, 3}, 8), make_group("g2", {4, 5, 6, 7}, 8)});
    EXPECT_EQ(gg.weight(0, 1), 1);
    EXPECT_EQ(gg.weight(1, 0), 1);
    EXPECT_EQ(gg.self_weights[0], 6);
}

TEST(GroupGraph, SingleGroupIsWholeGraph) {
    std::istringstream in("0 1\n1 2\n2 0\n");
    Graph g = load_graph(in);
    auto gg = build_group_graph(g, {make_group("all", {0, 1, 2}, 3)});
    EXPECT_EQ(gg.group_count(), 1);
    EXPECT_EQ(gg.self_weights[0], g.edge_count());
}

TEST(GroupGraph, ResidualBucketBalancesEdgeCount) {
    std::istringstream in("0 1\n1 2\n2 3\n3 4\n4 0\n");
    Graph g = load_graph(in);
    auto gg = build_group_graph(g, {make_group("a", {0, 1}, 5)});
    ASSERT_TRUE(gg.has_residual);
    ASSERT_EQ(gg.group_count(), 2);
    EXPECT_EQ(gg.groups[1].id, "_unassigned");
    Count total = 0;
    for (const auto& [key, w] : gg.weights) total += w;
    for (Count w : gg.self_weights) total += w;
    EXPECT_EQ(total, g.edge_count());
}

TEST(GroupGraph, OverlappingGroupsRejected) {
    std::istringstream in("0 1\n1 2\n");
    Graph g = load_graph(in);
    EXPECT_THROW(
        build_group_graph(g, {make_group("a", {0, 1}, 3), make_group("b", {1, 2}, 3)}),
        std::invalid_argument);
}

// Row sums of the weight matrix reproduce each group's outgoing degree.
TEST(GroupGraph, RowSumsMatchGroupStats) {
    std::istringstream in(
        "0 1\n0 2\n1 2\n"
        "3 4\n4 5\n"
        "0 3\n1 4\n2 5\n0 4\n");
    Graph g = load_graph(in);
    Group a = make_group("a", {0, 1, 2}, 6);
    Group b = make_group("b", {3, 4, 5}, 6);
    auto gg = build_group_graph(g, {a, b});
    GroupStats sa = group_stats(g, a);
    GroupStats sb = group_stats(g, b);
    EXPECT_EQ(gg.out_weight(0), sa.deg - sa.din);
    EXPECT_EQ(gg.out_weight(1), sb.deg - sb.din);
}

TEST(EdgeSignificance, ClosedFormAllSuccesses) {
    // Ten equal groups of 4; group 0 sends all 10 outgoing edges to group 1.
    std::ostringstream edges;
    for (int grp = 0; grp < 10; ++grp) {
        int base = 4 * grp;
        edges << base << ' ' << base + 1 << '\n';
        edges << base + 2 << ' ' << base + 3 << '\n';
    }
    int pair = 0;
    for (int e = 0; e < 10; ++e) {
        edges << (e % 4) << ' ' << 4 + (pair % 4) << '\n';
        ++pair;
    }
    std::istringstream in(edges.str());
    Graph g = load_graph(in, {WeightMode::unweighted, false});
    std::vector<Group> partition;
    for (int grp = 0; grp < 10; ++grp) {
        std::vector<NodeId> members;
        for (int i = 0; i < 4; ++i) members.push_back(static_cast<NodeId>(4 * grp + i));
        partition.push_back(make_group("g" + std::to_string(grp), members, 40));
    }
    auto gg = build_group_graph(g, partition);
    auto sig = edge_significance(gg, 0, 1);
    EXPECT_EQ(sig.trials, 10);
    EXPECT_EQ(sig.weight, 10);
    EXPECT_NEAR(sig.p, 1.0 / 9.0, 1e-15);
    EXPECT_NEAR(sig.score, 9.542, 1e-3);
}

TEST(EdgeSignificance, ZeroWeightAndForcedSuccess) {
    std::istringstream in("0 1\n2 3\n0 2\n");
    Graph g = load_graph(in);
    Group a = make_group("a", {0, 1}, 4);
    Group b = make_group("b", {2, 3}, 4);
    auto gg = build_group_graph(g, {a, b});

    // Two groups partitioning V: p = |b| / (n - |a|) = 1, forced success.
    auto sig = edge_significance(gg, 0, 1);
    EXPECT_DOUBLE_EQ(sig.p, 1.0);
    EXPECT_DOUBLE_EQ(sig.score, 0.0);

    EXPECT_THROW(edge_significance(gg, 0, 0), std::invalid_argument);
}

TEST(EdgeSignificance, ZeroTrialsFlagged) {
    std::istringstream in("0 1\n2 3\n4 5\n");
    Graph g = load_graph(in);
    auto gg = build_group_graph(g, {make_group("a", {0, 1}, 6), make_group("b", {2, 3}, 6),
                                    make_group("c", {4, 5}, 6)});
    auto sig = edge_significance(gg, 0, 1);
    EXPECT_TRUE(sig.zero_trials);
    EXPECT_DOUBLE_EQ(sig.score, 0.0);
}

// Conditioning matters: the two directions of the same edge score
// differently on asymmetric fixtures.
TEST(EdgeSignificance, DirectionalAsymmetry) {
    // group a: 2 nodes with 6 outgoing edges, all to b; group b: 12 nodes
    // with extra outgoing edges to c.
    std::vector<std::string> labels;
    for (int v = 0; v < 20; ++v) labels.push_back(std::to_string(v));
    std::vector<std::tuple<NodeId, NodeId, Count>> edges = {{0, 1, 1}};
    for (NodeId e = 0; e < 6; ++e) edges.emplace_back(e % 2, 2 + e, 1);
    for (NodeId e = 0; e < 4; ++e) edges.emplace_back(2 + e, 14 + e, 1);
    for (NodeId v = 14; v < 20; v += 2) edges.emplace_back(v, v + 1, 1);
    Graph g(labels, edges);

    std::vector<NodeId> bm, cm;
    for (int v = 2; v < 14; ++v) bm.push_back(v);
    for (int v = 14; v < 20; ++v) cm.push_back(v);
    auto gg = build_group_graph(
        g, {make_group("a", {0, 1}, 20), make_group("b", bm, 20), make_group("c", cm, 20)});

    auto ab = edge_significance(gg, 0, 1);
    auto ba = edge_significance(gg, 1, 0);
    EXPECT_NE(ab.score, ba.score);
    EXPECT_GT(ab.score, 0.0);

    // No a->c edges: weight 0, tail 1, score 0 despite nonzero trials.
    auto ac = edge_significance(gg, 0, 2);
    EXPECT_EQ(ac.weight, 0);
    EXPECT_FALSE(ac.zero_trials);
    EXPECT_DOUBLE_EQ(ac.score, 0.0);

    // Total mode adds internal edges to the trial count.
    auto ab_total = edge_significance(gg, 0, 1, TrialsMode::total);
    EXPECT_EQ(ab_total.trials, ab.trials + gg.self_weights[0]);
}

}  // namespace
