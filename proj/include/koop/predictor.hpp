#pragma once

#include <optional>
#include <vector>

#include "koop/koopman.hpp"
#include "koop/systems.hpp"

namespace koop {

struct OutputMapFit {
    CMatrix C;          // state_dim x feature_dim
    RVector residuals;  // per training point: ||x_i - C psi(x_i)||_2
};

/// Least-squares projection from feature space back to state space,
/// computed via the pseudoinverse of the stacked feature matrix.
OutputMapFit fit_output_map(const std::vector<RVector>& train_states,
                            const Dictionary& dict);

struct PredictionResult {
    // horizon + 1 states; the first is the reconstruction of x0.
    Trajectory predicted;
    std::optional<std::vector<double>> per_step_error;  // 2-norm vs truth
    std::optional<RVector> mse_per_state;
    // Largest imaginary component discarded by the real projection.
    double max_imag_magnitude = 0.0;
};

/// Lift x0, propagate the lifted state with K (row convention), project back
/// with C taking real parts. The model must carry an output map.
PredictionResult predict(const KoopmanModel& model, const RVector& x0,
                         int horizon);

struct ErrorStats {
    std::vector<double> per_step_error;
    RVector mse_per_state;
};

ErrorStats evaluate_prediction(const Trajectory& predicted,
                               const Trajectory& truth);

/// Fills the optional error fields of a prediction against ground truth.
void attach_truth(PredictionResult& result, const Trajectory& truth);

}  // namespace koop
