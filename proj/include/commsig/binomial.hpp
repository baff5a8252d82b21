#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "commsig/graph.hpp"

namespace commsig {

/// Natural-log KL divergence between Bernoulli(q) and Bernoulli(p), with the
/// 0*ln(0) = 0 convention at the q = 0 and q = 1 boundaries.
inline double kl_divergence(double q, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("kl_divergence: p must be in (0,1)");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("kl_divergence: q must be in [0,1]");
    double result = 0.0;
    if (q > 0.0) result += q * std::log(q / p);
    if (q < 1.0) result += (1.0 - q) * std::log((1.0 - q) / (1.0 - p));
    return result;
}

inline double log_choose(Count n, Count k) {
    if (k < 0 || k > n) throw std::invalid_argument("log_choose: k out of range");
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

inline double log10_choose(Count n, Count k) { return log_choose(n, k) / std::numbers::ln10; }

/// Natural log of the exact upper tail P(X >= successes), X ~ Bin(trials, p).
///
/// Naive evaluation of the sum overflows/underflows quickly, so a single
/// term is anchored in log space via log-gamma and the rest accumulated
/// through the term-ratio recurrence with compensated summation. The sum
/// runs over the upper tail when successes is above the mean (terms strictly
/// decreasing there) and over the lower complement otherwise, so neither
/// side loses precision to cancellation.
inline double log_binomial_tail(Count trials, Count successes, double p) {
    if (trials < 0) throw std::invalid_argument("log_binomial_tail: negative trials");
    if (successes > trials) throw std::invalid_argument("log_binomial_tail: successes > trials");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("log_binomial_tail: p must be in (0,1)");
    if (successes <= 0) return 0.0;

    const double n = static_cast<double>(trials);
    const double log_p = std::log(p);
    const double log_1p = std::log1p(-p);
    auto log_pmf = [&](Count k) {
        return log_choose(trials, k) + static_cast<double>(k) * log_p +
               static_cast<double>(trials - k) * log_1p;
    };
    auto accumulate = [](double& sum, double& comp, double term) {
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };

    if (static_cast<double>(successes) > n * p) {
        // Upper tail directly; term ratios are < 1 and decreasing.
        double sum = 1.0, comp = 0.0, rel = 1.0;
        for (Count k = successes + 1; k <= trials; ++k) {
            rel *= static_cast<double>(trials - k + 1) * p /
                   (static_cast<double>(k) * (1.0 - p));
            if (!(rel > sum * 1e-18)) break;
            accumulate(sum, comp, rel);
        }
        return log_pmf(successes) + std::log(sum);
    }
    // successes <= mean: the tail is >= ~1/2, so 1 - P(X <= successes-1)
    // is safe to form. The complement is summed downward from its largest term.
    double sum = 1.0, comp = 0.0, rel = 1.0;
    for (Count k = successes - 2; k >= 0; --k) {
        rel *= static_cast<double>(k + 1) * (1.0 - p) /
               (static_cast<double>(trials - k) * p);
        if (!(rel > sum * 1e-18)) break;
        accumulate(sum, comp, rel);
    }
    double log_complement = log_pmf(successes - 1) + std::log(sum);
    if (log_complement >= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log1p(-std::exp(log_complement));
}

/// Exact upper tail probability P(X >= successes). Prefer log_binomial_tail
/// where tiny tails matter; this form underflows below ~1e-308.
inline double binomial_tail_exact(Count trials, Count successes, double p) {
    return std::exp(log_binomial_tail(trials, successes, p));
}

struct ApproxScores {
    double lscore;  // from the KL upper bound on the tail
    double uscore;  // lscore + 0.5*log10(2*deg)
};

inline ApproxScores approx_scores(Count deg, Count din, double p) {
    if (deg < 1) throw std::invalid_argument("approx_scores: deg must be >= 1");
    const double q = static_cast<double>(din) / static_cast<double>(deg);
    const double lscore =
        static_cast<double>(deg) * kl_divergence(q, p) / std::numbers::ln10;
    return {lscore, lscore + 0.5 * std::log10(2.0 * static_cast<double>(deg))};
}

struct ScoreOptions {
    Count exact_threshold = 50;  // exact tail when deg <= threshold
};

struct BinomialScore {
    double score = 0.0;   // -log10 of the tail, 0 when insignificant
    double lscore = 0.0;
    double uscore = 0.0;
    bool used_exact = false;
    bool significant = false;
    std::optional<double> rel_error_bound;  // r~, set on the approximate path
};

/// Binomial significance score for (deg trials, din successes, expected p).
/// Returns 0 (insignificant) when the observed ratio does not exceed the
/// expected one; otherwise -log10 of the exact tail for deg <= threshold and
/// the midpoint of the score bounds above it.
inline BinomialScore binomial_score(Count deg, Count din, double p,
                                    const ScoreOptions& options = {}) {
    BinomialScore result;
    if (deg <= 0) return result;
    const double q = static_cast<double>(din) / static_cast<double>(deg);
    if (p <= 0.0 || p >= 1.0 || q <= p) return result;

    auto [lscore, uscore] = approx_scores(deg, din, p);
    result.lscore = lscore;
    result.uscore = uscore;
    if (deg <= options.exact_threshold) {
        result.used_exact = true;
        result.score = -log_binomial_tail(deg, din, p) / std::numbers::ln10;
    } else {
        result.score = 0.5 * (lscore + uscore);
        result.rel_error_bound = (uscore - lscore) / lscore;
    }
    result.significant = result.score > 0.0;
    return result;
}

/// -log10 of the exact tail with no insignificance zeroing or threshold
/// switch; ranks groups even when q <= p (scores stay >= 0 but tiny).
inline double exact_tail_score(Count deg, Count din, double p) {
    if (deg <= 0 || din <= 0) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 0.0;
    return -log_binomial_tail(deg, din, p) / std::numbers::ln10;
}

struct NodeModelOptions {
    Count exact_threshold = 50;
    bool self_excluded_p = false;  // p = (|g|-1)/(n-1) instead of |g|/n
};

struct EdgeModelOptions {
    Count exact_threshold = 50;
    bool half_volume_trials = false;  // trials = (deg+din)/2 instead of deg
};

inline double node_model_p(Count group_size, Count node_count, bool self_excluded) {
    if (self_excluded)
        return node_count > 1
                   ? static_cast<double>(group_size - 1) / static_cast<double>(node_count - 1)
                   : 0.0;
    return node_count > 0 ? static_cast<double>(group_size) / static_cast<double>(node_count)
                          : 0.0;
}

inline BinomialScore score_node_based(const GroupStats& stats, Count node_count,
                                      const NodeModelOptions& options = {}) {
    double p = node_model_p(stats.size, node_count, options.self_excluded_p);
    return binomial_score(stats.deg, stats.din, p, {options.exact_threshold});
}

inline BinomialScore score_edge_based(const GroupStats& stats,
                                      const EdgeModelOptions& options = {}) {
    Count trials = stats.deg;
    if (options.half_volume_trials)
        trials = static_cast<Count>(std::llround(static_cast<double>(stats.deg + stats.din) / 2.0));
    Count successes = std::min(stats.din, trials);
    return binomial_score(trials, successes, stats.p_edge, {options.exact_threshold});
}

/// Union-bound ("global") score: -log10( C(n,k) * tail ), clamped at 0.
inline BinomialScore score_global(const GroupStats& stats, Count node_count,
                                  const NodeModelOptions& options = {}) {
    BinomialScore base = score_node_based(stats, node_count, options);
    if (!base.significant) return base;
    base.score = std::max(0.0, base.score - log10_choose(node_count, stats.size));
    base.significant = base.score > 0.0;
    return base;
}

inline BinomialScore score_node_based(const Graph& graph, const Group& group,
                                      const NodeModelOptions& options = {}) {
    return score_node_based(group_stats(graph, group), graph.node_count(), options);
}

inline BinomialScore score_edge_based(const Graph& graph, const Group& group,
                                      const EdgeModelOptions& options = {}) {
    if (graph.edge_count() <= 0) throw std::invalid_argument("score_edge_based: empty graph");
    return score_edge_based(group_stats(graph, group), options);
}

inline BinomialScore score_global(const Graph& graph, const Group& group,
                                  const NodeModelOptions& options = {}) {
    return score_global(group_stats(graph, group), graph.node_count(), options);
}

/// Analytic p-value upper bound from the configuration model,
/// -log10( C(din+deg, 2din) C(m, din) / C(2m, 2din) ). The sign is retained:
/// a weak bound (>= 1) yields a score <= 0; clamping is left to ranking code.
inline double pvalue_bound_he(Count deg, Count din, Count m) {
    if (din < 0 || din > deg) throw std::invalid_argument("pvalue_bound_he: din out of range");
    if (din + deg > 2 * m) throw std::invalid_argument("pvalue_bound_he: din + deg > 2m");
    if (din > m) throw std::invalid_argument("pvalue_bound_he: din > m");
    double log_bound = log_choose(din + deg, 2 * din) + log_choose(m, din) -
                       log_choose(2 * m, 2 * din);
    return -log_bound / std::numbers::ln10;
}

enum class SignificanceLabel { none, weak, moderate, high, very_high };

/// Band edges sit at integer scores: a score of k means a tail of 10^-k.
inline SignificanceLabel significance_label(double score) {
    if (!(score >= 0.0)) throw std::invalid_argument("significance_label: score must be >= 0");
    if (score == 0.0) return SignificanceLabel::none;
    if (score < 1.0) return SignificanceLabel::weak;
    if (score < 2.0) return SignificanceLabel::moderate;
    if (score < 3.0) return SignificanceLabel::high;
    return SignificanceLabel::very_high;
}

inline const char* to_string(SignificanceLabel label) {
    switch (label) {
        case SignificanceLabel::none: return "none";
        case SignificanceLabel::weak: return "weak";
        case SignificanceLabel::moderate: return "moderate";
        case SignificanceLabel::high: return "high";
        case SignificanceLabel::very_high: return "very high";
    }
    return "none";
}

}  // namespace commsig
