#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "commsig/graph.hpp"
#include "commsig/util.hpp"

namespace commsig {

/// Planted-partition recipe: parallel lists of group sizes and internal edge
/// probabilities, one noise probability for inter-group pairs, and a seed.
struct SyntheticSpec {
    std::vector<Count> group_sizes;
    std::vector<double> internal_probs;
    double noise_prob = 0.0;
    std::uint64_t seed = 0;
};

inline SyntheticSpec syn1_preset(double noise, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.group_sizes.assign(10, 30);
    spec.internal_probs.assign(5, 0.6);
    spec.internal_probs.resize(10, 0.2);
    spec.noise_prob = noise;
    spec.seed = seed;
    return spec;
}

inline SyntheticSpec syn2_preset(double noise, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.group_sizes.assign(10, 30);
    spec.internal_probs.assign(10, 0.4);
    spec.noise_prob = noise;
    spec.seed = seed;
    return spec;
}

inline SyntheticSpec syn3_preset(double noise, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.group_sizes = {160, 60, 50, 40, 40, 30, 30, 30, 30, 20};
    spec.internal_probs.assign(10, 0.4);
    spec.noise_prob = noise;
    spec.seed = seed;
    return spec;
}

inline std::vector<double> default_noise_sweep() {
    std::vector<double> sweep;
    for (int i = 1; i <= 9; ++i) sweep.push_back(0.025 * i);
    return sweep;
}

struct SyntheticResult {
    Graph graph;
    std::vector<Group> reference;
};

/// Samples each intra-group pair with that group's internal probability and
/// each inter-group pair with the noise probability. Every (group, group)
/// block draws from its own stream derived from (seed, block), so output is
/// deterministic for a seed independent of traversal or parallelism.
inline SyntheticResult generate(const SyntheticSpec& spec) {
    if (spec.group_sizes.size() != spec.internal_probs.size())
        throw std::invalid_argument("generate: sizes and probabilities differ in length");
    for (double p : spec.internal_probs)
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("generate: bad internal prob");
    if (!(spec.noise_prob >= 0.0 && spec.noise_prob <= 1.0))
        throw std::invalid_argument("generate: bad noise prob");

    const std::size_t k = spec.group_sizes.size();
    std::vector<Count> offsets(k + 1, 0);
    for (std::size_t i = 0; i < k; ++i) {
        if (spec.group_sizes[i] <= 0) throw std::invalid_argument("generate: bad group size");
        offsets[i + 1] = offsets[i] + spec.group_sizes[i];
    }
    const Count n = offsets[k];

    std::vector<std::string> labels(static_cast<std::size_t>(n));
    for (Count v = 0; v < n; ++v) labels[static_cast<std::size_t>(v)] = std::to_string(v);

    std::vector<std::tuple<NodeId, NodeId, Count>> edges;
    for (std::size_t gi = 0; gi < k; ++gi) {
        for (std::size_t gj = gi; gj < k; ++gj) {
            const double p = (gi == gj) ? spec.internal_probs[gi] : spec.noise_prob;
            if (p <= 0.0) continue;
            Rng rng(derive_seed(spec.seed, gi, gj));
            if (gi == gj) {
                for (Count a = offsets[gi]; a < offsets[gi + 1]; ++a)
                    for (Count b = a + 1; b < offsets[gi + 1]; ++b)
                        if (rng.bernoulli(p))
                            edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b), 1);
            } else {
                for (Count a = offsets[gi]; a < offsets[gi + 1]; ++a)
                    for (Count b = offsets[gj]; b < offsets[gj + 1]; ++b)
                        if (rng.bernoulli(p))
                            edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b), 1);
            }
        }
    }

    SyntheticResult result{Graph(std::move(labels), edges), {}};
    result.reference.reserve(k);
    for (std::size_t gi = 0; gi < k; ++gi) {
        std::vector<NodeId> members;
        members.reserve(static_cast<std::size_t>(spec.group_sizes[gi]));
        for (Count v = offsets[gi]; v < offsets[gi + 1]; ++v)
            members.push_back(static_cast<NodeId>(v));
        result.reference.push_back(Group{"g" + std::to_string(gi), std::move(members)});
    }
    return result;
}

}  // namespace commsig
