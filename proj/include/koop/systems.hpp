#pragma once

#include <vector>

#include "koop/types.hpp"

namespace koop {

/// Time-ordered state snapshots with a fixed sampling interval.
struct Trajectory {
    std::vector<RVector> states;
    double dt = 1.0;

    std::size_t size() const { return states.size(); }
    int state_dim() const;
    void validate() const;
};

struct OscillatorRingConfig {
    int n_oscillators = 20;
    double damping = 0.4;
    double dt = 0.01;

    void validate() const;
};

struct StuartLandauConfig {
    double mu = 1.0;     // limit cycle at r = sqrt(mu)
    double gamma = 1.0;
    double beta = 0.0;
    double dt = 0.01;

    void validate() const;
};

struct BurgersConfig {
    double viscosity = 0.01;
    double dx = 1.0 / 99.0;  // must satisfy dx * (nx - 1) = 1 (unit domain)
    double dt = 0.02;
    int nx = 100;            // grid size including both boundary points
    int nt = 50;

    void validate() const;
};

/// Circulant ring Laplacian: diagonal 2, immediate cyclic neighbors -1.
RMatrix ring_laplacian(int n);

/// Continuous-time block matrix of the second-order ring dynamics on the
/// stacked state (theta, theta_dot): [[0, I], [-L, -d I]].
RMatrix oscillator_continuous_matrix(const OscillatorRingConfig& cfg);

/// Exact one-step propagator exp(dt * continuous matrix).
RMatrix oscillator_step_matrix(const OscillatorRingConfig& cfg);

/// Exact discrete-time propagation of the linear ring; state is the
/// concatenation (theta, theta_dot). Returns steps + 1 states.
Trajectory simulate_oscillators(const OscillatorRingConfig& cfg,
                                const RVector& theta0, const RVector& omega0,
                                int steps);

/// Iterates the discretized limit-cycle map
///   r     <- r + (mu r - r^3) dt
///   theta <- theta + (gamma - beta r^2) dt
/// with theta stored unwrapped. State is (r, theta).
Trajectory simulate_stuart_landau(const StuartLandauConfig& cfg, double r0,
                                  double theta0, int steps);

/// Semi-implicit finite differences for u_t + u u_x = k u_xx on [0, 1]:
/// backward-Euler central-difference diffusion and advection linearized
/// around the previous step's velocity, one tridiagonal solve per step,
/// Dirichlet endpoints pinned to zero. Satisfies the discrete maximum
/// principle while |u| dt / (2 dx) stays below the diffusion number.
/// Returns nt + 1 states including u0.
Trajectory simulate_burgers(const BurgersConfig& cfg, const RVector& u0);

/// Grid points x_j = j * dx, j = 0..nx-1.
RVector burgers_grid(const BurgersConfig& cfg);

/// sin(2 pi x) with both endpoints set to exactly zero.
RVector burgers_sine_initial(const BurgersConfig& cfg);

}  // namespace koop
