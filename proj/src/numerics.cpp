#include "koop/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "koop/errors.hpp"

namespace koop {

namespace {

std::string dims(const CMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_square_same_dim(const CMatrix& G, const CMatrix& A) {
    if (G.rows() != G.cols())
        throw DimensionError("solver: G must be square, got " + dims(G));
    if (A.rows() != G.rows() || A.cols() != G.cols())
        throw DimensionError("solver: A must match G, got G " + dims(G) + " and A " + dims(A));
}

}  // namespace

CMatrix pseudo_inverse(const CMatrix& m, double rank_tol) {
    require_finite(m, "pseudo_inverse");
    if (rank_tol < 0.0) throw ConfigError("pseudo_inverse: rank_tol must be >= 0");

    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw NumericalError("pseudo_inverse: SVD failed to converge on " + dims(m) + " matrix");

    const Eigen::VectorXd& sigma = svd.singularValues();
    const double cutoff = sigma.size() > 0 ? rank_tol * sigma(0) : 0.0;

    Eigen::VectorXd inv_sigma = Eigen::VectorXd::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > cutoff && sigma(i) > 0.0) inv_sigma(i) = 1.0 / sigma(i);
    }
    return svd.matrixV() * inv_sigma.asDiagonal().toDenseMatrix().cast<Complex>() *
           svd.matrixU().adjoint();
}

EigResult eig(const CMatrix& m) {
    if (m.rows() != m.cols())
        throw DimensionError("eig: matrix must be square, got " + dims(m));
    require_finite(m, "eig");

    Eigen::ComplexEigenSolver<CMatrix> solver(m, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eig: iteration failed on " + dims(m) + " matrix");

    const Eigen::Index n = m.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    const auto& vals = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const Complex va = vals(a), vb = vals(b);
        if (std::abs(va) != std::abs(vb)) return std::abs(va) > std::abs(vb);
        if (va.real() != vb.real()) return va.real() > vb.real();
        return va.imag() > vb.imag();
    });

    EigResult result;
    result.values.reserve(static_cast<std::size_t>(n));
    result.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index src = order[static_cast<std::size_t>(j)];
        result.values.push_back(vals(src));
        CVector v = solver.eigenvectors().col(src);
        const double norm = v.norm();
        if (norm > 0.0) v /= norm;
        result.vectors.col(j) = v;
    }

    // Residual postcondition; a Schur-based solve that silently degraded
    // would otherwise poison every downstream spectrum.
    const double scale = m.norm();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double resid = (m * result.vectors.col(j) -
                              result.values[static_cast<std::size_t>(j)] * result.vectors.col(j))
                                 .norm();
        if (resid > 1e-8 * std::max(scale, 1e-300))
            throw NumericalError("eig: residual " + std::to_string(resid) +
                                 " exceeds tolerance on " + dims(m) + " matrix");
    }
    return result;
}

std::pair<CMatrix, SolveReport> solve_ridge(const CMatrix& G, const CMatrix& A, double lambda) {
    require_square_same_dim(G, A);
    require_finite(G, "solve_ridge");
    require_finite(A, "solve_ridge");
    if (lambda < 0.0) throw ConfigError("solve_ridge: lambda must be >= 0");

    const Eigen::Index n = G.rows();
    SolveReport report;
    report.mode = SolverMode::Ridge;
    report.iterations = 0;
    report.converged = true;

    CMatrix K;
    if (lambda > 0.0) {
        CMatrix normal = G.adjoint() * G;
        normal.diagonal().array() += lambda;
        Eigen::LDLT<CMatrix> ldlt(normal);
        if (ldlt.info() != Eigen::Success)
            throw NumericalError("solve_ridge: LDLT failed on " + dims(G) + " system");
        K = ldlt.solve(G.adjoint() * A);
    } else {
        // lambda = 0: SVD path. Full column rank gives the same K as the
        // normal equations; rank deficiency falls back to the pseudoinverse
        // (minimum-norm least squares) and is flagged.
        Eigen::JacobiSVD<CMatrix> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.info() != Eigen::Success)
            throw NumericalError("solve_ridge: SVD failed on " + dims(G) + " matrix");
        const Eigen::VectorXd& sigma = svd.singularValues();
        const double cutoff = sigma.size() > 0 ? 1e-12 * sigma(0) : 0.0;
        Eigen::VectorXd inv_sigma = Eigen::VectorXd::Zero(sigma.size());
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < sigma.size(); ++i) {
            if (sigma(i) > cutoff && sigma(i) > 0.0) {
                inv_sigma(i) = 1.0 / sigma(i);
                ++rank;
            }
        }
        report.pseudoinverse_fallback = rank < n;
        K = svd.matrixV() * inv_sigma.asDiagonal().toDenseMatrix().cast<Complex>() *
            svd.matrixU().adjoint() * A;
    }

    const double resid2 = (G * K - A).squaredNorm();
    report.objective_value = resid2 + lambda * K.squaredNorm();
    return {std::move(K), report};
}

std::pair<CMatrix, SolveReport> solve_frobenius_regularized(const CMatrix& G, const CMatrix& A,
                                                            double lambda, double tol,
                                                            int max_iter) {
    require_square_same_dim(G, A);
    require_finite(G, "solve_frobenius_regularized");
    require_finite(A, "solve_frobenius_regularized");
    if (lambda < 0.0) throw ConfigError("solve_frobenius_regularized: lambda must be >= 0");
    if (tol <= 0.0) throw ConfigError("solve_frobenius_regularized: tol must be > 0");
    if (max_iter < 1) throw ConfigError("solve_frobenius_regularized: max_iter must be >= 1");

    const auto objective = [&](const CMatrix& K) {
        return (G * K - A).norm() + lambda * K.norm();
    };

    SolveReport report;
    report.mode = SolverMode::ExactFrobenius;

    // sigma_max(G)^2 is the Lipschitz constant of the squared residual's
    // gradient; 1/L is the base step.
    Eigen::JacobiSVD<CMatrix> svd(G);
    const double sigma_max = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    if (sigma_max == 0.0) {
        // G = 0: the residual term is constant, so the norm term decides.
        CMatrix K = CMatrix::Zero(G.rows(), G.cols());
        report.objective_value = objective(K);
        report.converged = true;
        return {std::move(K), report};
    }

    // Warm start: the stationarity condition puts the minimizer on the
    // ridge path K(mu), so seed from the best coarse-path candidate instead
    // of the unregularized solution alone. A badly conditioned G makes
    // K(0) an arbitrarily poor start that 1/L steps cannot escape within
    // any reasonable budget.
    CMatrix K = solve_ridge(G, A, 0.0).first;
    double f_cur = objective(K);
    {
        CMatrix zero = CMatrix::Zero(G.rows(), G.cols());
        if (objective(zero) < f_cur) {
            K = zero;
            f_cur = objective(K);
        }
        const double scale = sigma_max * sigma_max;
        for (int i = 0; i < 25; ++i) {
            const double mu = scale * std::pow(10.0, -10.0 + 14.0 * i / 24.0);
            CMatrix candidate = solve_ridge(G, A, mu).first;
            const double f_candidate = objective(candidate);
            if (f_candidate < f_cur) {
                K = std::move(candidate);
                f_cur = f_candidate;
            }
        }
    }

    CMatrix K_best = K;
    double f_best = f_cur;

    const double base_step = 1.0 / (sigma_max * sigma_max);
    double step = base_step;
    bool converged = false;
    int it = 0;
    int flat_streak = 0;

    for (; it < max_iter; ++it) {
        const CMatrix residual = G * K - A;
        const double r = residual.norm();

        CMatrix trial = K;
        if (r > 0.0) trial -= (step / r) * (G.adjoint() * residual);

        // prox of step * lambda * ||.||_F: Frobenius soft shrinkage
        const double trial_norm = trial.norm();
        if (lambda > 0.0) {
            const double shrink = 1.0 - step * lambda / std::max(trial_norm, 1e-300);
            trial = shrink > 0.0 ? CMatrix(shrink * trial) : CMatrix::Zero(G.rows(), G.cols());
        }

        const double f_trial = objective(trial);
        if (f_trial <= f_cur) {
            const double decrease = (f_cur - f_trial) / std::max(f_cur, 1e-300);
            K = std::move(trial);
            f_cur = f_trial;
            if (f_cur < f_best) {
                f_best = f_cur;
                K_best = K;
            }
            flat_streak = decrease < tol ? flat_streak + 1 : 0;
            step = std::min(2.0 * step, base_step);
            if (flat_streak >= 3 && step == base_step) {
                converged = true;
                ++it;
                break;
            }
        } else {
            // stalled: diminish the step and retry from the same iterate
            step *= 0.5;
            flat_streak = 0;
            if (step < base_step * 1e-14) {
                converged = true;
                ++it;
                break;
            }
        }
    }

    report.iterations = it;
    report.converged = converged;
    report.objective_value = f_best;
    return {std::move(K_best), report};
}

double spectral_radius(const CMatrix& m) {
    if (m.rows() != m.cols())
        throw DimensionError("spectral_radius: matrix must be square, got " + dims(m));
    Eigen::ComplexEigenSolver<CMatrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("spectral_radius: eigenvalue iteration failed on " + dims(m) +
                             " matrix");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace koop
