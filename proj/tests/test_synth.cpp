#include "commsig/synth.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "commsig/graph.hpp"
#include "commsig/io.hpp"

namespace {

using namespace commsig;

TEST(Synth, PresetsMatchRegimes) {
    auto s1 = syn1_preset(0.05, 1);
    ASSERT_EQ(s1.group_sizes.size(), 10u);
    for (Count size : s1.group_sizes) EXPECT_EQ(size, 30);
    for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(s1.internal_probs[i], 0.6);
    for (int i = 5; i < 10; ++i) EXPECT_DOUBLE_EQ(s1.internal_probs[i], 0.2);

    auto s2 = syn2_preset(0.05, 1);
    for (double p : s2.internal_probs) EXPECT_DOUBLE_EQ(p, 0.4);

    auto s3 = syn3_preset(0.05, 1);
    EXPECT_EQ(s3.group_sizes,
              (std::vector<Count>{160, 60, 50, 40, 40, 30, 30, 30, 30, 20}));

    auto sweep = default_noise_sweep();
    ASSERT_EQ(sweep.size(), 9u);
    EXPECT_DOUBLE_EQ(sweep.front(), 0.025);
    EXPECT_NEAR(sweep.back(), 0.225, 1e-12);
}

TEST(Synth, CliquesWhenProbabilityOne) {
    SyntheticSpec spec;
    spec.group_sizes = {4, 3};
    spec.internal_probs = {1.0, 1.0};
    spec.noise_prob = 0.0;
    spec.seed = 9;
    auto result = generate(spec);
    EXPECT_EQ(result.graph.node_count(), 7);
    EXPECT_EQ(result.graph.edge_count(), 6 + 3);  // K4 + K3, no cross edges
    ASSERT_EQ(result.reference.size(), 2u);
    EXPECT_EQ(result.reference[0].size(), 4);
    EXPECT_EQ(result.reference[1].size(), 3);
}

TEST(Synth, SameSeedSameBytes) {
    auto a = generate(syn1_preset(0.1, 42));
    auto b = generate(syn1_preset(0.1, 42));
    std::ostringstream sa, sb;
    write_graph(sa, a.graph);
    write_graph(sb, b.graph);
    EXPECT_EQ(sa.str(), sb.str());

    auto c = generate(syn1_preset(0.1, 43));
    std::ostringstream sc;
    write_graph(sc, c.graph);
    EXPECT_NE(sa.str(), sc.str());
}

// Internal edge counts concentrate around p * C(s, 2); 4 standard deviations
// over a handful of seeds.
TEST(Synth, InternalEdgeConcentration) {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        auto result = generate(syn1_preset(0.05, seed));
        GroupScratch scratch;
        for (std::size_t gi = 0; gi < result.reference.size(); ++gi) {
            const double p = gi < 5 ? 0.6 : 0.2;
            const double pairs = 30.0 * 29.0 / 2.0;
            GroupStats stats = group_stats(result.graph, result.reference[gi], scratch);
            const double mean = p * pairs;
            const double sd = std::sqrt(pairs * p * (1 - p));
            EXPECT_NEAR(static_cast<double>(stats.din), mean, 4.0 * sd)
                << "seed " << seed << " group " << gi;
        }
    }
}

TEST(Synth, ExpectedSparseGroupEdges) {
    // A 0.2-density group of 30 nodes carries ~87 internal edges on average,
    // which keeps every group on the approximate scoring path.
    double total = 0;
    GroupScratch scratch;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto result = generate(syn1_preset(0.025, seed));
        GroupStats stats = group_stats(result.graph, result.reference[7], scratch);
        total += static_cast<double>(stats.din);
    }
    EXPECT_NEAR(total / 10.0, 0.2 * 435.0, 12.0);
    EXPECT_GT(total / 10.0, 80.0);
}

TEST(Synth, RejectsBadSpecs) {
    SyntheticSpec spec;
    spec.group_sizes = {10, 10};
    spec.internal_probs = {0.5};
    EXPECT_THROW(generate(spec), std::invalid_argument);
    spec.internal_probs = {0.5, 1.5};
    EXPECT_THROW(generate(spec), std::invalid_argument);
    spec.internal_probs = {0.5, 0.5};
    spec.noise_prob = -0.1;
    EXPECT_THROW(generate(spec), std::invalid_argument);
}

}  // namespace
