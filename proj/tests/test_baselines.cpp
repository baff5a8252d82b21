#include "commsig/baselines.hpp"

#include <sstream>

#include <gtest/gtest.h>

#include "commsig/io.hpp"
#include "commsig/louvain.hpp"
#include "commsig/util.hpp"

namespace {

using namespace commsig;

Graph figure_one() {
    std::istringstream in(
        "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"
        "4 5\n4 6\n4 7\n");
    return load_graph(in);
}

TEST(Modularity, FigureOneTie) {
    Graph g = figure_one();
    double q1 = modularity_groupwise(g, make_group("g1", {0, 1, 2, 3}, 8));
    double q2 = modularity_groupwise(g, make_group("g2", {4, 5, 6, 7}, 8));
    EXPECT_NEAR(q1, 2.0 / 9.0, 1e-12);
    EXPECT_NEAR(q2, 2.0 / 9.0, 1e-12);  // notable tie between the two groups

    std::istringstream tri("0 1\n1 2\n2 0\n");
    Graph triangle = load_graph(tri);
    EXPECT_NEAR(modularity_groupwise(triangle, make_group("all", {0, 1, 2}, 3)), 0.0, 1e-12);
}

// Summed over an exhaustive partition, the group-wise values equal the
// partition's Newman modularity.
TEST(Modularity, GroupwiseSumsToNewman) {
    Rng rng(5);
    for (int it = 0; it < 30; ++it) {
        NodeId n = 6 + static_cast<NodeId>(rng.below(30));
        std::vector<std::string> labels;
        for (NodeId v = 0; v < n; ++v) labels.push_back(std::to_string(v));
        std::vector<std::tuple<NodeId, NodeId, Count>> edges;
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v)
                if (rng.bernoulli(0.2)) edges.emplace_back(u, v, 1);
        if (edges.empty()) continue;
        Graph g(labels, edges);

        int parts = 2 + static_cast<int>(rng.below(4));
        std::vector<NodeId> assignment(static_cast<std::size_t>(n));
        std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(parts));
        for (NodeId v = 0; v < n; ++v) {
            int c = static_cast<int>(rng.below(static_cast<std::uint64_t>(parts)));
            assignment[static_cast<std::size_t>(v)] = c;
            members[static_cast<std::size_t>(c)].push_back(v);
        }
        double sum = 0.0;
        for (int c = 0; c < parts; ++c) {
            if (members[static_cast<std::size_t>(c)].empty()) continue;
            sum += modularity_groupwise(
                g, make_group("c" + std::to_string(c), members[static_cast<std::size_t>(c)], n));
        }
        EXPECT_NEAR(sum, modularity_total(g, assignment, Objective::edge_modularity), 1e-9);
    }
}

TEST(Conductance, KnownValues) {
    Graph g = figure_one();
    EXPECT_DOUBLE_EQ(conductance(g, make_group("g1", {0, 1, 2, 3}, 8)), 0.0);  // isolated

    // deg=20, din=15 against a large complement: 5/35.
    GroupStats s;
    s.deg = 20;
    s.din = 15;
    EXPECT_NEAR(conductance(s, 1000), 5.0 / 35.0, 1e-12);

    // Single node with 3 edges, no internal edges: cut equals volume.
    std::istringstream star("c a\nc b\nc d\na b\na d\nb d\n");
    Graph sg = load_graph(star);
    Group center = make_group("c", {*sg.find("c")}, sg.node_count());
    EXPECT_DOUBLE_EQ(conductance(sg, center), 1.0);
}

TEST(Conductance, ErrorsOnEmptyGraph) {
    std::vector<std::string> labels = {"a", "b"};
    Graph g(labels, {});
    EXPECT_THROW(conductance(g, make_group("g", {0}, 2)), std::invalid_argument);
}

TEST(Tpr, SmallFixtures) {
    std::istringstream tri("0 1\n1 2\n2 0\n");
    Graph triangle = load_graph(tri);
    EXPECT_DOUBLE_EQ(tpr(triangle, make_group("all", {0, 1, 2}, 3)), 1.0);

    std::istringstream path("0 1\n1 2\n");
    Graph pg = load_graph(path);
    EXPECT_DOUBLE_EQ(tpr(pg, make_group("all", {0, 1, 2}, 3)), 0.0);

    // 5-cycle has no triangles; 5-clique has all members in one.
    std::istringstream cyc("0 1\n1 2\n2 3\n3 4\n4 0\n");
    Graph cg = load_graph(cyc);
    EXPECT_DOUBLE_EQ(tpr(cg, make_group("c", {0, 1, 2, 3, 4}, 5)), 0.0);

    std::ostringstream clique_edges;
    for (int u = 0; u < 5; ++u)
        for (int v = u + 1; v < 5; ++v) clique_edges << u << ' ' << v << '\n';
    std::istringstream kin(clique_edges.str());
    Graph kg = load_graph(kin);
    EXPECT_DOUBLE_EQ(tpr(kg, make_group("k", {0, 1, 2, 3, 4}, 5)), 1.0);

    // Triangles must lie fully inside the group: drop one K3 vertex.
    EXPECT_DOUBLE_EQ(tpr(triangle, make_group("pair", {0, 1}, 3)), 0.0);
}

// Oracle: all-triples membership check on groups up to 30 nodes.
TEST(Tpr, MatchesBruteForceTripleScan) {
    Rng rng(123);
    for (int it = 0; it < 40; ++it) {
        NodeId n = 5 + static_cast<NodeId>(rng.below(26));
        std::vector<std::string> labels;
        for (NodeId v = 0; v < n; ++v) labels.push_back(std::to_string(v));
        std::vector<std::tuple<NodeId, NodeId, Count>> edges;
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v)
                if (rng.bernoulli(0.25)) edges.emplace_back(u, v, 1 + static_cast<Count>(rng.below(2)));
        if (edges.empty()) continue;
        Graph g(labels, edges);

        std::vector<NodeId> members;
        for (NodeId v = 0; v < n; ++v)
            if (rng.bernoulli(0.6)) members.push_back(v);
        if (members.empty()) members.push_back(0);
        Group grp = make_group("g", members, n);

        std::vector<bool> hit(grp.members.size(), false);
        for (std::size_t i = 0; i < grp.members.size(); ++i)
            for (std::size_t j = i + 1; j < grp.members.size(); ++j)
                for (std::size_t k = j + 1; k < grp.members.size(); ++k) {
                    NodeId a = grp.members[i], b = grp.members[j], c = grp.members[k];
                    if (g.multiplicity(a, b) > 0 && g.multiplicity(b, c) > 0 &&
                        g.multiplicity(a, c) > 0)
                        hit[i] = hit[j] = hit[k] = true;
                }
        double expected = 0;
        for (bool h : hit) expected += h ? 1 : 0;
        expected /= static_cast<double>(grp.members.size());
        EXPECT_DOUBLE_EQ(tpr(g, grp), expected);
    }
}

// Adding nodes and edges disjoint from the group leaves conductance and TPR
// unchanged.
TEST(Baselines, InvariantUnderDisjointGrowth) {
    std::string base =
        "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"
        "4 5\n4 6\n4 7\n";
    std::istringstream in1(base);
    Graph small = load_graph(in1);
    std::istringstream in2(base + "8 9\n9 10\n10 8\n11 12\n");
    Graph big = load_graph(in2);

    Group g1s = make_group("g1", {0, 1, 2, 3}, small.node_count());
    Group g1b = make_group("g1", {0, 1, 2, 3}, big.node_count());
    EXPECT_DOUBLE_EQ(conductance(small, g1s), conductance(big, g1b));
    EXPECT_DOUBLE_EQ(tpr(small, g1s), tpr(big, g1b));
}

TEST(SizeScore, ReturnsMemberCount) {
    EXPECT_EQ(size_score(Group{"g", {1, 2, 3}}), 3);
}

}  // namespace
