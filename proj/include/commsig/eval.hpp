#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "commsig/baselines.hpp"
#include "commsig/binomial.hpp"
#include "commsig/graph.hpp"
#include "commsig/louvain.hpp"
#include "commsig/synth.hpp"
#include "commsig/util.hpp"

namespace commsig {

struct OverlapScore {
    std::string candidate_id;
    std::string best_reference_id;  // empty when no reference intersects
    double recall = 0.0;
    double precision = 0.0;
    double score = 0.0;  // sqrt(recall * precision) of the best match
};

/// Best-match overlap score of each candidate against the reference set:
/// max over references of sqrt(recall * precision). Matching is not
/// exclusive; one reference may be the best match of several candidates.
inline std::vector<OverlapScore> overlap_scores(const std::vector<Group>& candidates,
                                                const std::vector<Group>& references) {
    if (references.empty()) throw std::invalid_argument("overlap_scores: no reference groups");

    std::unordered_map<NodeId, std::vector<int>> node_to_refs;
    for (int r = 0; r < static_cast<int>(references.size()); ++r)
        for (NodeId v : references[static_cast<std::size_t>(r)].members)
            node_to_refs[v].push_back(r);

    std::vector<OverlapScore> out;
    out.reserve(candidates.size());
    std::unordered_map<int, Count> hits;
    for (const Group& c : candidates) {
        hits.clear();
        for (NodeId v : c.members) {
            auto it = node_to_refs.find(v);
            if (it == node_to_refs.end()) continue;
            for (int r : it->second) ++hits[r];
        }
        OverlapScore best;
        best.candidate_id = c.id;
        for (const auto& [r, h] : hits) {
            const Group& ref = references[static_cast<std::size_t>(r)];
            const double recall = static_cast<double>(h) / static_cast<double>(ref.size());
            const double precision = static_cast<double>(h) / static_cast<double>(c.size());
            const double score = std::sqrt(recall * precision);
            if (score > best.score ||
                (score == best.score && !best.best_reference_id.empty() &&
                 ref.id < best.best_reference_id)) {
                best.best_reference_id = ref.id;
                best.recall = recall;
                best.precision = precision;
                best.score = score;
            }
        }
        out.push_back(std::move(best));
    }
    return out;
}

namespace detail {

inline std::vector<double> fractional_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;  // average of tied ranks
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

}  // namespace detail

/// Spearman rank correlation with fractional-rank tie handling (Pearson on
/// average ranks). Returns nullopt when either list is constant, for which
/// no ranking exists.
inline std::optional<double> spearman(const std::vector<double>& a,
                                      const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("spearman: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("spearman: need at least two values");

    auto ra = detail::fractional_ranks(a);
    auto rb = detail::fractional_ranks(b);
    const double n = static_cast<double>(a.size());
    const double mean_a = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mean_b = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = ra[i] - mean_a;
        const double db = rb[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) return std::nullopt;
    return cov / std::sqrt(var_a * var_b);
}

enum class RankDirection { descending, ascending };

struct RankMetrics {
    double top_pr = 0.0;    // overlap of the top-ranked candidate, ties averaged
    double top5_pr = 0.0;   // mean overlap of the top 5, ties at the cut averaged
    double top_size = 0.0;  // size of the top-ranked candidate, ties averaged
};

/// Ranks candidates by a method's scores and reports the overlap quality at
/// the top of the ranking. Candidates tied at the top contribute their mean
/// overlap; a tie straddling the top-5 cut contributes proportionally.
inline RankMetrics rank_metrics(const std::vector<double>& overlaps,
                                const std::vector<double>& scores, RankDirection direction,
                                const std::vector<Count>* sizes = nullptr) {
    if (overlaps.empty() || overlaps.size() != scores.size())
        throw std::invalid_argument("rank_metrics: empty or mismatched inputs");
    if (sizes && sizes->size() != overlaps.size())
        throw std::invalid_argument("rank_metrics: sizes length mismatch");

    const std::size_t n = overlaps.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b])
            return direction == RankDirection::descending ? scores[a] > scores[b]
                                                          : scores[a] < scores[b];
        return a < b;
    });

    RankMetrics metrics;
    const std::size_t slots = std::min<std::size_t>(5, n);
    double top5_sum = 0.0;
    std::size_t used = 0;
    std::size_t i = 0;
    bool first_block = true;
    while (i < n && used < slots) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const std::size_t block = j - i + 1;
        double block_overlap = 0.0, block_size = 0.0;
        for (std::size_t k = i; k <= j; ++k) {
            block_overlap += overlaps[order[k]];
            if (sizes) block_size += static_cast<double>((*sizes)[order[k]]);
        }
        block_overlap /= static_cast<double>(block);
        block_size /= static_cast<double>(block);
        if (first_block) {
            metrics.top_pr = block_overlap;
            metrics.top_size = block_size;
            first_block = false;
        }
        const std::size_t take = std::min(block, slots - used);
        top5_sum += static_cast<double>(take) * block_overlap;
        used += take;
        i = j + 1;
    }
    metrics.top5_pr = top5_sum / static_cast<double>(slots);
    return metrics;
}

enum class Method {
    binomial,         // node-based binomial score (default family member)
    binomial_lower,   // lower score only
    binomial_edge,    // edge-based null model
    binomial_global,  // union-bound score
    binomial_exact,   // exact tail, no insignificance zeroing
    pvalue,           // configuration-model p-value bound, clamped at 0
    modularity,
    conductance,
    tpr,
    size
};

inline const char* to_string(Method method) {
    switch (method) {
        case Method::binomial: return "binomial";
        case Method::binomial_lower: return "binomial-lower";
        case Method::binomial_edge: return "binomial-edge";
        case Method::binomial_global: return "binomial-global";
        case Method::binomial_exact: return "binomial-exact";
        case Method::pvalue: return "pvalue";
        case Method::modularity: return "modularity";
        case Method::conductance: return "conductance";
        case Method::tpr: return "tpr";
        case Method::size: return "size";
    }
    return "?";
}

inline RankDirection direction_of(Method method) {
    return method == Method::conductance ? RankDirection::ascending : RankDirection::descending;
}

/// Scores every group under one method. Stats are recomputed per group with
/// a shared scratch, so the cost is O(sum of member degrees) per group.
inline std::vector<double> score_groups(const Graph& graph, const std::vector<Group>& groups,
                                        Method method, Count exact_threshold = 50) {
    GroupScratch scratch;
    std::vector<double> scores;
    scores.reserve(groups.size());
    const Count m = graph.edge_count();
    for (const Group& g : groups) {
        const GroupStats stats = group_stats(graph, g, scratch);
        switch (method) {
            case Method::binomial:
                scores.push_back(
                    score_node_based(stats, graph.node_count(), {exact_threshold}).score);
                break;
            case Method::binomial_lower: {
                auto s = score_node_based(stats, graph.node_count(), {exact_threshold});
                scores.push_back(s.significant ? s.lscore : 0.0);
                break;
            }
            case Method::binomial_edge:
                scores.push_back(score_edge_based(stats, {exact_threshold}).score);
                break;
            case Method::binomial_global:
                scores.push_back(
                    score_global(stats, graph.node_count(), {exact_threshold}).score);
                break;
            case Method::binomial_exact:
                scores.push_back(
                    exact_tail_score(stats.deg, stats.din, stats.p_node));
                break;
            case Method::pvalue:
                scores.push_back(std::max(0.0, pvalue_bound_he(stats.deg, stats.din, m)));
                break;
            case Method::modularity:
                scores.push_back(modularity_groupwise(stats, m));
                break;
            case Method::conductance:
                scores.push_back(conductance(stats, m));
                break;
            case Method::tpr:
                scores.push_back(tpr(graph, g, scratch));
                break;
            case Method::size:
                scores.push_back(static_cast<double>(g.size()));
                break;
        }
    }
    return scores;
}

enum class SprOutcome { defined, reference_tied, method_tied };

struct TrialMethodResult {
    SprOutcome outcome = SprOutcome::reference_tied;
    double spr = 0.0;
    RankMetrics rank;
};

struct TrialResult {
    Count groups_generated = 0;
    double avg_pr = 0.0;
    std::vector<TrialMethodResult> methods;
};

struct ExperimentConfig {
    SyntheticSpec base;                 // noise_prob is overridden per point
    std::vector<double> noises;
    int trials = 1;
    std::uint64_t seed = 0;
    std::vector<Method> methods;
    Objective objective = Objective::edge_modularity;
    Count min_group_size = 3;
    Count max_group_size = std::numeric_limits<Count>::max();
    std::size_t level = std::numeric_limits<std::size_t>::max();  // max = final
    Count exact_threshold = 50;
    bool spr_zero_substitution = false;  // score method-tied trials as SPR 0
    unsigned threads = 1;
};

struct MethodAggregate {
    Method method = Method::binomial;
    double spr_mean = 0.0;
    double spr_std = 0.0;
    int spr_count = 0;          // trials entering the SPR mean
    double top_pr_mean = 0.0;
    double top_pr_std = 0.0;
    double top5_pr_mean = 0.0;
    double noranking_rate = 0.0;  // fraction of trials with all scores tied
};

struct EvalReport {
    double noise = 0.0;
    int trials = 0;
    int trials_with_groups = 0;
    double groups_mean = 0.0;
    double avg_pr = 0.0;
    std::vector<MethodAggregate> methods;
};

/// Evaluates one detected candidate list against references for each method:
/// SPR between the method's score list and the overlap-score list, plus
/// top-of-ranking overlap metrics. Tied reference overlaps make SPR
/// undefined for every method; a method tying all its own scores yields no
/// ranking (tracked separately).
inline TrialResult evaluate_trial(const Graph& graph, const std::vector<Group>& candidates,
                                  const std::vector<Group>& references,
                                  const std::vector<Method>& methods,
                                  Count exact_threshold = 50) {
    TrialResult trial;
    trial.groups_generated = static_cast<Count>(candidates.size());
    trial.methods.resize(methods.size());
    if (candidates.empty()) return trial;

    const auto overlaps = overlap_scores(candidates, references);
    std::vector<double> overlap_values;
    std::vector<Count> sizes;
    overlap_values.reserve(overlaps.size());
    for (const auto& o : overlaps) overlap_values.push_back(o.score);
    for (const auto& c : candidates) sizes.push_back(c.size());
    trial.avg_pr = std::accumulate(overlap_values.begin(), overlap_values.end(), 0.0) /
                   static_cast<double>(overlap_values.size());

    const bool reference_tied =
        overlap_values.size() < 2 ||
        std::adjacent_find(overlap_values.begin(), overlap_values.end(),
                           std::not_equal_to<>()) == overlap_values.end();

    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        auto scores = score_groups(graph, candidates, methods[mi], exact_threshold);
        auto& out = trial.methods[mi];
        out.rank = rank_metrics(overlap_values, scores, direction_of(methods[mi]), &sizes);

        const bool method_tied =
            std::adjacent_find(scores.begin(), scores.end(), std::not_equal_to<>()) ==
            scores.end();
        if (reference_tied) {
            out.outcome = SprOutcome::reference_tied;
        } else if (method_tied) {
            out.outcome = SprOutcome::method_tied;
        } else {
            // SPR is computed between the score lists; for ascending methods
            // the scores are negated so that better means larger.
            std::vector<double> oriented = scores;
            if (direction_of(methods[mi]) == RankDirection::ascending)
                for (double& s : oriented) s = -s;
            auto rho = spearman(overlap_values, oriented);
            out.outcome = SprOutcome::defined;
            out.spr = *rho;  // constant lists were handled above
        }
    }
    return trial;
}

namespace detail {

struct Welford {
    int count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }
    double stddev() const { return count > 1 ? std::sqrt(m2 / (count - 1)) : 0.0; }
};

}  // namespace detail

namespace detail {

inline EvalReport aggregate_trials(const std::vector<TrialResult>& trials,
                                   const std::vector<Method>& methods,
                                   bool spr_zero_substitution) {
    EvalReport report;
    report.trials = static_cast<int>(trials.size());

    Welford groups_acc, avg_pr_acc;
    std::vector<Welford> spr(methods.size());
    std::vector<Welford> top_pr(methods.size());
    std::vector<Welford> top5(methods.size());
    std::vector<int> tied(methods.size(), 0);
    for (const auto& trial : trials) {
        groups_acc.add(static_cast<double>(trial.groups_generated));
        if (trial.groups_generated == 0) continue;
        ++report.trials_with_groups;
        avg_pr_acc.add(trial.avg_pr);
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            const auto& r = trial.methods[mi];
            top_pr[mi].add(r.rank.top_pr);
            top5[mi].add(r.rank.top5_pr);
            switch (r.outcome) {
                case SprOutcome::defined:
                    spr[mi].add(r.spr);
                    break;
                case SprOutcome::method_tied:
                    ++tied[mi];
                    if (spr_zero_substitution) spr[mi].add(0.0);
                    break;
                case SprOutcome::reference_tied:
                    break;  // excluded: no reference ranking exists
            }
        }
    }
    report.groups_mean = groups_acc.mean;
    report.avg_pr = avg_pr_acc.mean;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        MethodAggregate agg;
        agg.method = methods[mi];
        agg.spr_mean = spr[mi].mean;
        agg.spr_std = spr[mi].stddev();
        agg.spr_count = spr[mi].count;
        agg.top_pr_mean = top_pr[mi].mean;
        agg.top_pr_std = top_pr[mi].stddev();
        agg.top5_pr_mean = top5[mi].mean;
        agg.noranking_rate = trials.empty()
                                 ? 0.0
                                 : static_cast<double>(tied[mi]) / static_cast<double>(trials.size());
        report.methods.push_back(agg);
    }
    return report;
}

}  // namespace detail

/// Runs one noise point: per trial generate -> Louvain -> filter -> score by
/// every method -> overlap metrics, then aggregate means and deviations.
/// Trials run in parallel when configured; each owns a stream derived from
/// (seed, point, trial), so aggregates do not depend on the thread count.
inline EvalReport run_point(const ExperimentConfig& config, std::size_t point_index) {
    const double noise = config.noises.at(point_index);
    std::vector<TrialResult> trials(static_cast<std::size_t>(config.trials));
    parallel_for(trials.size(), config.threads, [&](std::size_t t) {
        SyntheticSpec spec = config.base;
        spec.noise_prob = noise;
        spec.seed = derive_seed(config.seed, point_index, t);
        auto synthetic = generate(spec);
        auto partition =
            louvain(synthetic.graph, config.objective, derive_seed(spec.seed, 0x4c));
        const std::size_t level = std::min(config.level, partition.level_count() - 1);
        auto candidates = extract_level(partition, level,
                                        {config.min_group_size, config.max_group_size});
        std::vector<Group> references;
        for (const auto& r : synthetic.reference)
            if (r.size() >= config.min_group_size && r.size() <= config.max_group_size)
                references.push_back(r);
        trials[t] = evaluate_trial(synthetic.graph, candidates, references, config.methods,
                                   config.exact_threshold);
    });
    EvalReport report =
        detail::aggregate_trials(trials, config.methods, config.spr_zero_substitution);
    report.noise = noise;
    return report;
}

inline std::vector<EvalReport> run_experiment(const ExperimentConfig& config) {
    std::vector<EvalReport> reports;
    reports.reserve(config.noises.size());
    for (std::size_t i = 0; i < config.noises.size(); ++i)
        reports.push_back(run_point(config, i));
    return reports;
}

/// Experiment over a fixed graph with provided references: the randomized
/// Louvain is the only per-trial variation, mirroring evaluation on loaded
/// rather than generated data.
inline EvalReport run_loaded_experiment(const Graph& graph,
                                        const std::vector<Group>& references,
                                        const ExperimentConfig& config) {
    std::vector<Group> kept_references;
    for (const auto& r : references)
        if (r.size() >= config.min_group_size && r.size() <= config.max_group_size)
            kept_references.push_back(r);

    std::vector<TrialResult> trials(static_cast<std::size_t>(config.trials));
    parallel_for(trials.size(), config.threads, [&](std::size_t t) {
        auto partition = louvain(graph, config.objective, derive_seed(config.seed, 0x4c, t));
        const std::size_t level = std::min(config.level, partition.level_count() - 1);
        auto candidates = extract_level(partition, level,
                                        {config.min_group_size, config.max_group_size});
        trials[t] = evaluate_trial(graph, candidates, kept_references, config.methods,
                                   config.exact_threshold);
    });
    return detail::aggregate_trials(trials, config.methods, config.spr_zero_substitution);
}

}  // namespace commsig
