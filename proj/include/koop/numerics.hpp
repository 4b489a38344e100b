#pragma once

#include <utility>
#include <vector>

#include "koop/types.hpp"

namespace koop {

/// Moore-Penrose pseudoinverse via SVD. Singular values at or below
/// rank_tol * sigma_max are treated as zero.
CMatrix pseudo_inverse(const CMatrix& m, double rank_tol = 1e-12);

struct EigResult {
    std::vector<Complex> values;  // sorted by |v| desc, then Re desc, then Im desc
    CMatrix vectors;              // column j pairs with values[j]; unit 2-norm
};

/// Right eigenpairs of a square complex matrix.
EigResult eig(const CMatrix& m);

/// Minimizer of ||G K - A||_F^2 + lambda ||K||_F^2 (squared surrogate,
/// closed form). For lambda = 0 with singular G the SVD pseudoinverse path
/// is taken and flagged in the report.
std::pair<CMatrix, SolveReport> solve_ridge(const CMatrix& G, const CMatrix& A,
                                            double lambda);

/// Approximate minimizer of the non-squared objective
/// f(K) = ||G K - A||_F + lambda ||K||_F via proximal-subgradient descent,
/// started from the lambda = 0 ridge solution. Step size 1/L with
/// L = sigma_max(G)^2, halved after stalls. Non-convergence within max_iter
/// returns the best iterate with converged = false.
std::pair<CMatrix, SolveReport> solve_frobenius_regularized(
    const CMatrix& G, const CMatrix& A, double lambda, double tol = 1e-10,
    int max_iter = 5000);

double spectral_radius(const CMatrix& m);

}  // namespace koop
