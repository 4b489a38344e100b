#include "koop/predictor.hpp"

#include <cmath>

#include "koop/errors.hpp"

namespace koop {

OutputMapFit fit_output_map(const std::vector<RVector>& train_states, const Dictionary& dict) {
    if (train_states.empty())
        throw InsufficientDataError("fit_output_map: need at least one training state");

    const int state_dim = dict.state_dim();
    for (const auto& s : train_states)
        if (s.size() != state_dim)
            throw DimensionError("fit_output_map: state dimension does not match dictionary");

    // Stacked lifted columns Z (K x M) against stacked states X (N x M):
    // C = X pinv(Z) minimizes sum ||x_i - C psi(x_i)||^2.
    const CMatrix features = dict.evaluate_batch(train_states);  // M x K
    const CMatrix lifted_columns = features.transpose();         // plain transpose: rows become lifted columns

    CMatrix states(state_dim, static_cast<Eigen::Index>(train_states.size()));
    for (std::size_t i = 0; i < train_states.size(); ++i)
        states.col(static_cast<Eigen::Index>(i)) = train_states[i].cast<Complex>();

    OutputMapFit fit;
    fit.C = states * pseudo_inverse(lifted_columns);

    fit.residuals.resize(static_cast<Eigen::Index>(train_states.size()));
    for (std::size_t i = 0; i < train_states.size(); ++i) {
        const CVector reconstructed = fit.C * lifted_columns.col(static_cast<Eigen::Index>(i));
        fit.residuals(static_cast<Eigen::Index>(i)) =
            (reconstructed - train_states[i].cast<Complex>()).norm();
    }
    return fit;
}

PredictionResult predict(const KoopmanModel& model, const RVector& x0, int horizon) {
    if (!model.C.has_value())
        throw ConfigError("predict: model carries no output map C; fit one before predicting");
    if (horizon < 0) throw ConfigError("predict: horizon must be >= 0");
    if (x0.size() != model.dictionary.state_dim())
        throw DimensionError("predict: x0 dimension " + std::to_string(x0.size()) +
                             " does not match model state_dim " +
                             std::to_string(model.dictionary.state_dim()));

    const CMatrix& C = *model.C;
    // Row convention: psi(x) K advances the feature row, so the lifted
    // column z = psi(x)^T advances by K^T.
    const CMatrix propagator = model.K.transpose();

    CVector z = model.dictionary.evaluate(x0).transpose();

    PredictionResult result;
    result.predicted.dt = 1.0;  // step-indexed; callers may relabel with the system dt
    result.predicted.states.reserve(static_cast<std::size_t>(horizon) + 1);

    double max_imag = 0.0;
    for (int n = 0; n <= horizon; ++n) {
        const CVector projected = C * z;
        max_imag = std::max(max_imag, projected.imag().cwiseAbs().maxCoeff());
        result.predicted.states.push_back(projected.real());
        if (n < horizon) z = propagator * z;
    }
    result.max_imag_magnitude = max_imag;
    return result;
}

ErrorStats evaluate_prediction(const Trajectory& predicted, const Trajectory& truth) {
    if (predicted.size() != truth.size())
        throw DimensionError("evaluate_prediction: length mismatch, predicted " +
                             std::to_string(predicted.size()) + " vs truth " +
                             std::to_string(truth.size()));
    if (predicted.state_dim() != truth.state_dim())
        throw DimensionError("evaluate_prediction: state dimension mismatch");

    const std::size_t steps = predicted.size();
    const int dim = predicted.state_dim();

    ErrorStats stats;
    stats.per_step_error.reserve(steps);
    stats.mse_per_state = RVector::Zero(dim);
    for (std::size_t n = 0; n < steps; ++n) {
        const RVector diff = predicted.states[n] - truth.states[n];
        stats.per_step_error.push_back(diff.norm());
        stats.mse_per_state += diff.cwiseProduct(diff);
    }
    stats.mse_per_state /= static_cast<double>(steps);
    return stats;
}

void attach_truth(PredictionResult& result, const Trajectory& truth) {
    ErrorStats stats = evaluate_prediction(result.predicted, truth);
    result.per_step_error = std::move(stats.per_step_error);
    result.mse_per_state = std::move(stats.mse_per_state);
}

}  // namespace koop
