#include "commsig/eval.hpp"

#include <gtest/gtest.h>

#include "commsig/util.hpp"

namespace {

using namespace commsig;

// The worked evaluation fixture: references of sizes 10 and 15, candidates
// of sizes 6, 14, 5 with intersections 5/1, 14, 5.
struct EvalFixture {
    std::vector<Group> references;
    std::vector<Group> candidates;
};

EvalFixture worked_example() {
    EvalFixture f;
    std::vector<NodeId> r1, r2;
    for (NodeId v = 0; v < 10; ++v) r1.push_back(v);         // reference 1
    for (NodeId v = 10; v < 25; ++v) r2.push_back(v);        // reference 2
    f.references = {Group{"r1", r1}, Group{"r2", r2}};

    std::vector<NodeId> c1 = {0, 1, 2, 3, 4, 10};            // 5 in r1, 1 in r2
    std::vector<NodeId> c2;
    for (NodeId v = 11; v < 25; ++v) c2.push_back(v);        // 14 in r2
    std::vector<NodeId> c3 = {5, 6, 7, 8, 9};                // 5 in r1
    f.candidates = {Group{"c1", c1}, Group{"c2", c2}, Group{"c3", c3}};
    return f;
}

TEST(OverlapScores, WorkedExample) {
    auto f = worked_example();
    auto overlaps = overlap_scores(f.candidates, f.references);
    ASSERT_EQ(overlaps.size(), 3u);
    EXPECT_EQ(overlaps[0].best_reference_id, "r1");
    EXPECT_NEAR(overlaps[0].score, 0.65, 0.005);
    EXPECT_NEAR(overlaps[1].score, 0.97, 0.005);
    EXPECT_NEAR(overlaps[2].score, 0.71, 0.005);
    EXPECT_EQ(overlaps[2].best_reference_id, "r1");  // r1 matches two candidates

    double avg = (overlaps[0].score + overlaps[1].score + overlaps[2].score) / 3.0;
    EXPECT_NEAR(avg, 0.78, 0.01);
}

TEST(OverlapScores, SubsetAndIdentity) {
    std::vector<Group> refs = {Group{"r", {0, 1, 2, 3, 4, 5}}};
    std::vector<Group> cands = {Group{"sub", {0, 1, 2}}, Group{"same", {0, 1, 2, 3, 4, 5}},
                                Group{"off", {10, 11, 12}}};
    auto overlaps = overlap_scores(cands, refs);
    EXPECT_DOUBLE_EQ(overlaps[0].precision, 1.0);
    EXPECT_DOUBLE_EQ(overlaps[0].recall, 0.5);
    EXPECT_DOUBLE_EQ(overlaps[1].score, 1.0);
    EXPECT_DOUBLE_EQ(overlaps[2].score, 0.0);
    EXPECT_TRUE(overlaps[2].best_reference_id.empty());

    EXPECT_THROW(overlap_scores(cands, {}), std::invalid_argument);
}

TEST(Spearman, WorkedExampleValues) {
    std::vector<double> overlaps = {0.65, 0.97, 0.71};
    EXPECT_NEAR(*spearman(overlaps, {1, 3, 2}), 1.0, 1e-12);
    EXPECT_NEAR(*spearman(overlaps, {-1, 10.3, 5}), 1.0, 1e-12);
    EXPECT_NEAR(*spearman(overlaps, {2, 4, 5}), 0.5, 1e-12);
    EXPECT_NEAR(*spearman(overlaps, {3, 5, 3}), 0.866, 5e-4);
    EXPECT_NEAR(*spearman(overlaps, {3, 0, 1}), -1.0, 1e-12);
}

TEST(Spearman, UndefinedAndErrors) {
    EXPECT_FALSE(spearman({1, 2, 3}, {5, 5, 5}).has_value());
    EXPECT_FALSE(spearman({2, 2, 2}, {1, 2, 3}).has_value());
    EXPECT_THROW(spearman({1, 2}, {1, 2, 3}), std::invalid_argument);
    EXPECT_THROW(spearman({1}, {1}), std::invalid_argument);
}

TEST(Spearman, SelfAndReverseProperty) {
    Rng rng(77);
    for (int it = 0; it < 50; ++it) {
        std::vector<double> x;
        for (int i = 0; i < 10; ++i) x.push_back(static_cast<double>(rng.below(1000)));
        bool constant = std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end();
        if (constant) continue;
        EXPECT_NEAR(*spearman(x, x), 1.0, 1e-12);
        std::vector<double> neg;
        for (double v : x) neg.push_back(-v);
        EXPECT_NEAR(*spearman(x, neg), -1.0, 1e-12);
    }
}

TEST(RankMetrics, TopAndTies) {
    std::vector<double> overlaps = {0.65, 0.97, 0.71};
    std::vector<Count> sizes = {6, 14, 5};

    auto m = rank_metrics(overlaps, {2, 4, 5}, RankDirection::descending, &sizes);
    EXPECT_NEAR(m.top_pr, 0.71, 1e-12);
    EXPECT_DOUBLE_EQ(m.top_size, 5.0);

    // All tied: topPR equals the average overlap.
    auto tied = rank_metrics(overlaps, {1, 1, 1}, RankDirection::descending);
    EXPECT_NEAR(tied.top_pr, (0.65 + 0.97 + 0.71) / 3.0, 1e-12);

    // Perfect method: the top pick has the maximum overlap.
    auto perfect = rank_metrics(overlaps, overlaps, RankDirection::descending);
    EXPECT_DOUBLE_EQ(perfect.top_pr, 0.97);

    // Ascending direction flips the pick.
    auto asc = rank_metrics(overlaps, {2, 4, 5}, RankDirection::ascending);
    EXPECT_DOUBLE_EQ(asc.top_pr, 0.65);

    EXPECT_THROW(rank_metrics({}, {}, RankDirection::descending), std::invalid_argument);
}

TEST(RankMetrics, TopFiveProportionalTieAtCut) {
    // Seven candidates; scores tie positions 4..6, so two remaining slots
    // take the tied trio's mean overlap.
    std::vector<double> overlaps = {0.9, 0.8, 0.7, 0.3, 0.6, 0.2, 0.1};
    std::vector<double> scores = {70, 60, 50, 40, 40, 40, 10};
    auto m = rank_metrics(overlaps, scores, RankDirection::descending);
    const double tied_mean = (0.3 + 0.6 + 0.2) / 3.0;
    EXPECT_NEAR(m.top5_pr, (0.9 + 0.8 + 0.7 + 2.0 * tied_mean) / 5.0, 1e-12);

    // Fewer than five candidates: use them all.
    auto few = rank_metrics({0.5, 0.7}, {1.0, 2.0}, RankDirection::descending);
    EXPECT_NEAR(few.top5_pr, 0.6, 1e-12);
}

TEST(EvaluateTrial, MethodAndReferenceTies) {
    auto f = worked_example();
    // Build a graph over the 25 fixture nodes so methods can score: make
    // each candidate a clique and sprinkle a few cross edges.
    std::vector<std::string> labels;
    for (int v = 0; v < 25; ++v) labels.push_back(std::to_string(v));
    std::vector<std::tuple<NodeId, NodeId, Count>> edges;
    for (const Group& c : f.candidates)
        for (std::size_t i = 0; i < c.members.size(); ++i)
            for (std::size_t j = i + 1; j < c.members.size(); ++j)
                edges.emplace_back(c.members[i], c.members[j], 1);
    edges.emplace_back(0, 24, 1);
    Graph g(labels, edges);

    auto trial = evaluate_trial(g, f.candidates, f.references,
                                {Method::binomial, Method::size, Method::conductance});
    ASSERT_EQ(trial.methods.size(), 3u);
    EXPECT_EQ(trial.groups_generated, 3);
    EXPECT_NEAR(trial.avg_pr, 0.773, 0.005);
    for (const auto& m : trial.methods) EXPECT_EQ(m.outcome, SprOutcome::defined);

    // Identical candidates and references: overlaps all tie at 1.0.
    auto tied = evaluate_trial(g, f.references, f.references, {Method::size});
    EXPECT_EQ(tied.methods[0].outcome, SprOutcome::reference_tied);
}

TEST(RunExperiment, DeterministicAcrossThreadCounts) {
    ExperimentConfig config;
    config.base = syn1_preset(0.0, 0);
    config.noises = {0.05};
    config.trials = 8;
    config.seed = 99;
    config.methods = {Method::binomial, Method::conductance};
    config.threads = 1;
    auto serial = run_point(config, 0);
    config.threads = 4;
    auto parallel = run_point(config, 0);
    EXPECT_DOUBLE_EQ(serial.groups_mean, parallel.groups_mean);
    ASSERT_EQ(serial.methods.size(), parallel.methods.size());
    for (std::size_t i = 0; i < serial.methods.size(); ++i) {
        EXPECT_DOUBLE_EQ(serial.methods[i].spr_mean, parallel.methods[i].spr_mean);
        EXPECT_DOUBLE_EQ(serial.methods[i].top_pr_mean, parallel.methods[i].top_pr_mean);
    }
}

// Perfect planted recovery ties every overlap at 1.0: no reference ranking
// exists and SPR is undefined for every method.
TEST(RunExperiment, PerfectRecoveryLeavesSprUndefined) {
    ExperimentConfig config;
    config.base.group_sizes.assign(10, 30);
    config.base.internal_probs.assign(10, 1.0);
    config.noises = {0.0};
    config.trials = 1;
    config.seed = 2;
    config.methods = {Method::binomial, Method::conductance, Method::tpr};
    auto report = run_point(config, 0);
    for (const auto& m : report.methods) {
        EXPECT_EQ(m.spr_count, 0);
        EXPECT_DOUBLE_EQ(m.noranking_rate, 0.0);  // distinct from a method tie
    }
}

// On small noisy planted graphs the union bound saturates: every group's
// global score collapses to zero while the plain binomial still ranks.
TEST(RunExperiment, GlobalScoreSaturatesOnNoisySyn3) {
    auto syn = generate(syn3_preset(0.2, derive_seed(20260810, 0, 1)));
    auto part = louvain(syn.graph, Objective::edge_modularity,
                        derive_seed(derive_seed(20260810, 0, 1), 0x4c));
    auto candidates = extract_final(part);
    ASSERT_GE(candidates.size(), 2u);
    auto global_scores = score_groups(syn.graph, candidates, Method::binomial_global);
    for (double s : global_scores) EXPECT_DOUBLE_EQ(s, 0.0);
}

TEST(RunExperiment, ReportShape) {
    ExperimentConfig config;
    config.base = syn2_preset(0.0, 0);
    config.noises = {0.05, 0.1};
    config.trials = 5;
    config.seed = 3;
    config.methods = {Method::binomial, Method::tpr};
    config.threads = 2;
    auto reports = run_experiment(config);
    ASSERT_EQ(reports.size(), 2u);
    for (const auto& r : reports) {
        EXPECT_EQ(r.trials, 5);
        EXPECT_GT(r.groups_mean, 0.0);
        EXPECT_GE(r.avg_pr, 0.0);
        EXPECT_LE(r.avg_pr, 1.0);
        ASSERT_EQ(r.methods.size(), 2u);
        for (const auto& m : r.methods) {
            EXPECT_GE(m.noranking_rate, 0.0);
            EXPECT_LE(m.noranking_rate, 1.0);
            EXPECT_LE(m.spr_count, 5);
        }
    }
}

}  // namespace
