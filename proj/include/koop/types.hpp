#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace koop {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

enum class SolverMode {
    Pseudoinverse,
    Ridge,
    ExactFrobenius,
};

std::string to_string(SolverMode mode);
SolverMode solver_mode_from_string(const std::string& s);

/// Diagnostics attached to every solver call.
struct SolveReport {
    double objective_value = 0.0;
    int iterations = 0;
    bool converged = true;
    SolverMode mode = SolverMode::Ridge;
    // Set when a singular lambda = 0 system was solved through the SVD
    // pseudoinverse instead of the normal equations.
    bool pseudoinverse_fallback = false;
};

/// Throws NumericalError when the matrix contains NaN or Inf entries.
void require_finite(const CMatrix& m, const char* what);
void require_finite(const RVector& v, const char* what);

/// Embed a real vector as a complex row (zero imaginary parts).
CRowVector embed_row(const RVector& x);

}  // namespace koop
