#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "koop/dictionary.hpp"
#include "koop/enrichment.hpp"
#include "koop/numerics.hpp"

namespace koop {

/// Feature-space normal-equation matrices accumulated from snapshot pairs:
/// G = (1/M) sum psi(x_m)^H psi(x_m), A = (1/M) sum psi(x_m)^H psi(y_m),
/// with psi(.) a feature row. G is Hermitian PSD by construction.
struct GramMatrices {
    CMatrix G;
    CMatrix A;
    long sample_count = 0;
};

/// A fitted operator together with everything needed to reuse it:
/// the dictionary, the regularization record, the optional output map C
/// (state_dim x feature_dim) and the enrichment provenance.
struct KoopmanModel {
    CMatrix K;
    Dictionary dictionary;
    double lambda = 0.0;
    SolverMode solver_mode = SolverMode::Pseudoinverse;
    SolveReport report;
    long training_pairs = 0;
    std::optional<CMatrix> C;
    std::optional<EnrichmentConfig> provenance;
};

GramMatrices build_gram(const SnapshotPairs& pairs, const Dictionary& dict);

/// Plain EDMD: K = pinv(G) A.
KoopmanModel fit_edmd(const GramMatrices& gram, const Dictionary& dict);

struct RobustSolveOptions {
    SolverMode mode = SolverMode::Ridge;
    double tol = 1e-10;
    int max_iter = 5000;
};

/// Regularized fit with lambda > 0; mode picks the squared surrogate
/// (ridge) or the literal non-squared objective (exact-frobenius).
/// Non-convergence surfaces through the stored report, not an exception.
KoopmanModel fit_robust(const GramMatrices& gram, const Dictionary& dict,
                        double lambda, const RobustSolveOptions& opts = {});

/// Full sparse-data pipeline: enrich the trajectory, accumulate Gram
/// matrices, fit (plain EDMD when lambda = 0, regularized otherwise).
/// Enrichment provenance is recorded in the model when artificial points
/// were generated.
KoopmanModel train_from_trajectory(const std::vector<RVector>& trajectory,
                                   const Dictionary& dict,
                                   const EnrichmentConfig& enrich,
                                   double lambda,
                                   const RobustSolveOptions& opts = {});

struct Eigenpair {
    Complex value;
    CVector vector;
};

/// eig(K) in the canonical ordering (modulus desc, Re desc, Im desc).
std::vector<Eigenpair> spectrum(const KoopmanModel& model);

/// phi_j(x) = psi(x) . v_j for the j-th spectral eigenvector.
Complex eigenfunction_eval(const KoopmanModel& model, int eigvec_index,
                           const RVector& x);

/// Principal-branch log(lambda)/dt. An exactly zero eigenvalue maps to the
/// -inf sentinel (real part) instead of throwing.
std::vector<Complex> discrete_to_continuous(const std::vector<Complex>& eigs,
                                            double dt);

/// Monte-Carlo lower bound on the worst-case residual
/// max ||(G + dG) K - (A + dA)||_F over Frobenius balls of radius lambda.
/// The zero draw is always included, so the result dominates the nominal
/// residual ||G K - A||_F.
double worst_case_residual_sample(const GramMatrices& gram, const CMatrix& K,
                                  double lambda, int n_samples,
                                  std::uint64_t seed);

}  // namespace koop
