#include "koop/koopman.hpp"

#include <cmath>
#include <limits>

#include "koop/errors.hpp"
#include "koop/random.hpp"

namespace koop {

GramMatrices build_gram(const SnapshotPairs& pairs, const Dictionary& dict) {
    pairs.validate();
    if (pairs.state_dim() != dict.state_dim())
        throw DimensionError("build_gram: data dimension " + std::to_string(pairs.state_dim()) +
                             " does not match dictionary state_dim " +
                             std::to_string(dict.state_dim()));

    const CMatrix lifted_inputs = dict.evaluate_batch(pairs.inputs);
    const CMatrix lifted_outputs = dict.evaluate_batch(pairs.outputs);
    const double inv_m = 1.0 / static_cast<double>(pairs.size());

    GramMatrices gram;
    gram.G = inv_m * (lifted_inputs.adjoint() * lifted_inputs);
    gram.A = inv_m * (lifted_inputs.adjoint() * lifted_outputs);
    gram.sample_count = static_cast<long>(pairs.size());
    return gram;
}

KoopmanModel fit_edmd(const GramMatrices& gram, const Dictionary& dict) {
    KoopmanModel model;
    model.K = pseudo_inverse(gram.G) * gram.A;
    model.dictionary = dict;
    model.lambda = 0.0;
    model.solver_mode = SolverMode::Pseudoinverse;
    model.training_pairs = gram.sample_count;
    model.report.mode = SolverMode::Pseudoinverse;
    model.report.objective_value = (gram.G * model.K - gram.A).norm();
    return model;
}

KoopmanModel fit_robust(const GramMatrices& gram, const Dictionary& dict, double lambda,
                        const RobustSolveOptions& opts) {
    if (lambda <= 0.0) throw ConfigError("fit_robust: lambda must be > 0");
    if (opts.mode == SolverMode::Pseudoinverse)
        throw ConfigError("fit_robust: solver mode must be ridge or exact-frobenius");

    auto [K, report] = opts.mode == SolverMode::Ridge
                           ? solve_ridge(gram.G, gram.A, lambda)
                           : solve_frobenius_regularized(gram.G, gram.A, lambda, opts.tol,
                                                         opts.max_iter);
    KoopmanModel model;
    model.K = std::move(K);
    model.dictionary = dict;
    model.lambda = lambda;
    model.solver_mode = opts.mode;
    model.training_pairs = gram.sample_count;
    model.report = report;
    return model;
}

KoopmanModel train_from_trajectory(const std::vector<RVector>& trajectory, const Dictionary& dict,
                                   const EnrichmentConfig& enrich, double lambda,
                                   const RobustSolveOptions& opts) {
    const SnapshotPairs pairs = enrich_trajectory(trajectory, enrich);
    const GramMatrices gram = build_gram(pairs, dict);
    KoopmanModel model =
        lambda > 0.0 ? fit_robust(gram, dict, lambda, opts) : fit_edmd(gram, dict);
    if (enrich.multiplier > 0) model.provenance = enrich;
    return model;
}

std::vector<Eigenpair> spectrum(const KoopmanModel& model) {
    const EigResult decomposition = eig(model.K);
    std::vector<Eigenpair> pairs;
    pairs.reserve(decomposition.values.size());
    for (std::size_t j = 0; j < decomposition.values.size(); ++j)
        pairs.push_back({decomposition.values[j],
                         decomposition.vectors.col(static_cast<Eigen::Index>(j))});
    return pairs;
}

Complex eigenfunction_eval(const KoopmanModel& model, int eigvec_index, const RVector& x) {
    if (eigvec_index < 0 || eigvec_index >= model.dictionary.feature_dim())
        throw DimensionError("eigenfunction_eval: index " + std::to_string(eigvec_index) +
                             " out of range for feature_dim " +
                             std::to_string(model.dictionary.feature_dim()));
    const std::vector<Eigenpair> pairs = spectrum(model);
    return (model.dictionary.evaluate(x) *
            pairs[static_cast<std::size_t>(eigvec_index)].vector)(0);
}

std::vector<Complex> discrete_to_continuous(const std::vector<Complex>& eigs, double dt) {
    if (dt <= 0.0) throw ConfigError("discrete_to_continuous: dt must be > 0");
    std::vector<Complex> out;
    out.reserve(eigs.size());
    for (const Complex& value : eigs) {
        if (value == Complex(0.0, 0.0)) {
            out.emplace_back(-std::numeric_limits<double>::infinity(), 0.0);
        } else {
            out.push_back(std::log(value) / dt);
        }
    }
    return out;
}

double worst_case_residual_sample(const GramMatrices& gram, const CMatrix& K, double lambda,
                                  int n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw ConfigError("worst_case_residual_sample: n_samples must be >= 1");
    if (lambda < 0.0) throw ConfigError("worst_case_residual_sample: lambda must be >= 0");
    if (gram.G.cols() != K.rows())
        throw DimensionError("worst_case_residual_sample: K does not match Gram dimension");

    // Zero draw first: the sampled max is then a certified lower bound of
    // the true worst case that also dominates the nominal residual.
    double worst = (gram.G * K - gram.A).norm();
    if (lambda == 0.0) return worst;

    Rng rng(seed);
    const int n = static_cast<int>(gram.G.rows());
    for (int s = 1; s < n_samples; ++s) {
        const CMatrix dG = sample_matrix_in_ball(rng, n, n, lambda);
        const CMatrix dA = sample_matrix_in_ball(rng, n, n, lambda);
        worst = std::max(worst, ((gram.G + dG) * K - (gram.A + dA)).norm());
    }
    return worst;
}

}  // namespace koop
