#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "koop/types.hpp"

namespace koop {

enum class PairOrigin { Observed, Artificial };

/// Paired state snapshots (x_i, y_i) with y_i the one-step image of x_i.
/// Artificial pairs remember which observed pair they perturb.
struct SnapshotPairs {
    std::vector<RVector> inputs;
    std::vector<RVector> outputs;
    std::vector<PairOrigin> origin;
    std::vector<int> source_pair;  // index of the perturbed observed pair; -1 for observed

    std::size_t size() const { return inputs.size(); }
    int state_dim() const;
    void validate() const;

    void append(RVector x, RVector y, PairOrigin o, int source = -1);

    /// Consecutive pairs (s_i, s_{i+1}) of a time-ordered state sequence.
    static SnapshotPairs from_trajectory(const std::vector<RVector>& states);
};

enum class EnrichmentMode { Trajectory, Pairs };

std::string to_string(EnrichmentMode mode);
EnrichmentMode enrichment_mode_from_string(const std::string& s);

struct EnrichmentConfig {
    double radius = 0.1;   // input perturbation bound, 2-norm
    int multiplier = 1;    // artificial points per observed point
    std::uint64_t seed = 0;
    EnrichmentMode mode = EnrichmentMode::Trajectory;
    // Pairs mode output perturbation bound. Unset means radius * 1
    // (unit Lipschitz estimate for the unknown map).
    std::optional<double> output_radius;

    double effective_output_radius() const;
    void validate() const;
};

/// Perturbs whole trajectories and re-pairs by time shift: for each
/// replicate, one independent in-ball perturbation per trajectory point.
/// Observed pairs come first, then replicate pairs in order.
/// Output size = (multiplier + 1) * (M - 1) for an M-point trajectory.
SnapshotPairs enrich_trajectory(const std::vector<RVector>& trajectory,
                                const EnrichmentConfig& cfg);

/// Perturbs both members of every input pair independently:
/// (x + dx, y + dy) with ||dx|| <= radius and ||dy|| <= output_radius.
/// Output size = (multiplier + 1) * input size.
SnapshotPairs enrich_pairs(const SnapshotPairs& pairs, const EnrichmentConfig& cfg);

}  // namespace koop
