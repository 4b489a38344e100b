#include "koop/enrichment.hpp"

#include "koop/errors.hpp"
#include "koop/random.hpp"

namespace koop {

int SnapshotPairs::state_dim() const {
    return inputs.empty() ? 0 : static_cast<int>(inputs.front().size());
}

void SnapshotPairs::validate() const {
    if (inputs.size() != outputs.size() || inputs.size() != origin.size() ||
        inputs.size() != source_pair.size())
        throw DimensionError("snapshot pairs: field lengths disagree");
    if (inputs.empty()) throw InsufficientDataError("snapshot pairs: need at least one pair");
    const int n = state_dim();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i].size() != n || outputs[i].size() != n)
            throw DimensionError("snapshot pairs: pair " + std::to_string(i) +
                                 " has inconsistent dimension");
    }
}

void SnapshotPairs::append(RVector x, RVector y, PairOrigin o, int source) {
    inputs.push_back(std::move(x));
    outputs.push_back(std::move(y));
    origin.push_back(o);
    source_pair.push_back(source);
}

SnapshotPairs SnapshotPairs::from_trajectory(const std::vector<RVector>& states) {
    if (states.size() < 2)
        throw InsufficientDataError("trajectory: need at least 2 states to form pairs, got " +
                                    std::to_string(states.size()));
    SnapshotPairs pairs;
    pairs.inputs.reserve(states.size() - 1);
    for (std::size_t i = 0; i + 1 < states.size(); ++i)
        pairs.append(states[i], states[i + 1], PairOrigin::Observed);
    return pairs;
}

std::string to_string(EnrichmentMode mode) {
    return mode == EnrichmentMode::Trajectory ? "trajectory" : "pairs";
}

EnrichmentMode enrichment_mode_from_string(const std::string& s) {
    if (s == "trajectory") return EnrichmentMode::Trajectory;
    if (s == "pairs") return EnrichmentMode::Pairs;
    throw ConfigError("unknown enrichment mode: '" + s + "'");
}

double EnrichmentConfig::effective_output_radius() const {
    return output_radius.value_or(radius);
}

void EnrichmentConfig::validate() const {
    if (radius <= 0.0) throw ConfigError("enrichment: radius must be > 0");
    if (multiplier < 0) throw ConfigError("enrichment: multiplier must be >= 0");
    if (mode == EnrichmentMode::Pairs && effective_output_radius() < 0.0)
        throw ConfigError("enrichment: output_radius must be >= 0");
}

SnapshotPairs enrich_trajectory(const std::vector<RVector>& trajectory,
                                const EnrichmentConfig& cfg) {
    cfg.validate();
    if (cfg.mode != EnrichmentMode::Trajectory)
        throw ConfigError("enrich_trajectory: config mode must be 'trajectory'");
    if (trajectory.size() < 2)
        throw InsufficientDataError("enrich_trajectory: trajectory must have >= 2 points, got " +
                                    std::to_string(trajectory.size()));

    const int dim = static_cast<int>(trajectory.front().size());
    for (const auto& s : trajectory) {
        if (s.size() != dim) throw DimensionError("enrich_trajectory: inconsistent state dimension");
        require_finite(s, "enrich_trajectory");
    }

    const std::size_t m = trajectory.size();
    SnapshotPairs pairs;
    pairs.inputs.reserve((static_cast<std::size_t>(cfg.multiplier) + 1) * (m - 1));
    for (std::size_t i = 0; i + 1 < m; ++i)
        pairs.append(trajectory[i], trajectory[i + 1], PairOrigin::Observed);

    Rng rng(cfg.seed);
    std::vector<RVector> perturbed(m);
    for (int rep = 0; rep < cfg.multiplier; ++rep) {
        for (std::size_t i = 0; i < m; ++i)
            perturbed[i] = trajectory[i] + sample_in_ball(rng, dim, cfg.radius);
        for (std::size_t i = 0; i + 1 < m; ++i)
            pairs.append(perturbed[i], perturbed[i + 1], PairOrigin::Artificial,
                         static_cast<int>(i));
    }
    return pairs;
}

SnapshotPairs enrich_pairs(const SnapshotPairs& pairs, const EnrichmentConfig& cfg) {
    cfg.validate();
    if (cfg.mode != EnrichmentMode::Pairs)
        throw ConfigError("enrich_pairs: config mode must be 'pairs'");
    pairs.validate();

    const int dim = pairs.state_dim();
    const double out_radius = cfg.effective_output_radius();

    SnapshotPairs enriched = pairs;
    enriched.inputs.reserve((static_cast<std::size_t>(cfg.multiplier) + 1) * pairs.size());

    Rng rng(cfg.seed);
    for (int rep = 0; rep < cfg.multiplier; ++rep) {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const RVector dx = sample_in_ball(rng, dim, cfg.radius);
            const RVector dy = out_radius > 0.0 ? RVector(sample_in_ball(rng, dim, out_radius))
                                                : RVector(RVector::Zero(dim));
            enriched.append(pairs.inputs[i] + dx, pairs.outputs[i] + dy, PairOrigin::Artificial,
                            static_cast<int>(i));
        }
    }
    return enriched;
}

}  // namespace koop
