#include "koop/systems.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

#include "koop/errors.hpp"

namespace koop {

int Trajectory::state_dim() const {
    return states.empty() ? 0 : static_cast<int>(states.front().size());
}

void Trajectory::validate() const {
    if (states.empty()) throw InsufficientDataError("trajectory: no states");
    if (dt <= 0.0) throw ConfigError("trajectory: dt must be > 0");
    const int n = state_dim();
    for (const auto& s : states)
        if (s.size() != n) throw DimensionError("trajectory: inconsistent state dimension");
}

void OscillatorRingConfig::validate() const {
    if (n_oscillators < 3) throw ConfigError("oscillators: n_oscillators must be >= 3");
    if (damping < 0.0) throw ConfigError("oscillators: damping must be >= 0");
    if (dt <= 0.0) throw ConfigError("oscillators: dt must be > 0");
}

void StuartLandauConfig::validate() const {
    if (mu <= 0.0) throw ConfigError("stuart-landau: mu must be > 0");
    if (dt <= 0.0) throw ConfigError("stuart-landau: dt must be > 0");
}

void BurgersConfig::validate() const {
    if (viscosity <= 0.0) throw ConfigError("burgers: viscosity must be > 0");
    if (nx < 3) throw ConfigError("burgers: nx must be >= 3");
    if (nt < 1) throw ConfigError("burgers: nt must be >= 1");
    if (dt <= 0.0) throw ConfigError("burgers: dt must be > 0");
    if (dx <= 0.0) throw ConfigError("burgers: dx must be > 0");
    if (std::abs(dx * (nx - 1) - 1.0) > 1e-9)
        throw ConfigError("burgers: dx * (nx - 1) must equal 1 (unit domain)");
}

RMatrix ring_laplacian(int n) {
    if (n < 3) throw ConfigError("ring_laplacian: n must be >= 3");
    RMatrix lap = RMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        lap(i, i) = 2.0;
        lap(i, (i + 1) % n) = -1.0;
        lap(i, (i + n - 1) % n) = -1.0;
    }
    return lap;
}

RMatrix oscillator_continuous_matrix(const OscillatorRingConfig& cfg) {
    cfg.validate();
    const int n = cfg.n_oscillators;
    const RMatrix lap = ring_laplacian(n);
    RMatrix block = RMatrix::Zero(2 * n, 2 * n);
    block.topRightCorner(n, n) = RMatrix::Identity(n, n);
    block.bottomLeftCorner(n, n) = -lap;
    block.bottomRightCorner(n, n) = -cfg.damping * RMatrix::Identity(n, n);
    return block;
}

RMatrix oscillator_step_matrix(const OscillatorRingConfig& cfg) {
    return (cfg.dt * oscillator_continuous_matrix(cfg)).exp();
}

Trajectory simulate_oscillators(const OscillatorRingConfig& cfg, const RVector& theta0,
                                const RVector& omega0, int steps) {
    cfg.validate();
    if (steps < 0) throw ConfigError("simulate_oscillators: steps must be >= 0");
    const int n = cfg.n_oscillators;
    if (theta0.size() != n || omega0.size() != n)
        throw DimensionError("simulate_oscillators: initial condition must have dimension " +
                             std::to_string(n) + " per block");

    const RMatrix step = oscillator_step_matrix(cfg);

    RVector state(2 * n);
    state << theta0, omega0;

    Trajectory traj;
    traj.dt = cfg.dt;
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    traj.states.push_back(state);
    for (int k = 0; k < steps; ++k) {
        state = step * state;
        traj.states.push_back(state);
    }
    return traj;
}

Trajectory simulate_stuart_landau(const StuartLandauConfig& cfg, double r0, double theta0,
                                  int steps) {
    cfg.validate();
    if (r0 <= 0.0) throw ConfigError("simulate_stuart_landau: r0 must be > 0");
    if (steps < 0) throw ConfigError("simulate_stuart_landau: steps must be >= 0");

    Trajectory traj;
    traj.dt = cfg.dt;
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);

    double r = r0;
    double theta = theta0;  // unwrapped on purpose
    RVector state(2);
    state << r, theta;
    traj.states.push_back(state);
    for (int k = 0; k < steps; ++k) {
        const double r_next = r + (cfg.mu * r - r * r * r) * cfg.dt;
        const double theta_next = theta + (cfg.gamma - cfg.beta * r * r) * cfg.dt;
        r = r_next;
        theta = theta_next;
        state << r, theta;
        traj.states.push_back(state);
    }
    return traj;
}

namespace {

// Thomas algorithm; coefficients vary per row because the advection
// linearization enters the matrix.
RVector solve_tridiagonal(const RVector& lower, const RVector& diag, const RVector& upper,
                          const RVector& rhs) {
    const int n = static_cast<int>(rhs.size());
    RVector c_prime(n), d_prime(n);
    c_prime(0) = upper(0) / diag(0);
    d_prime(0) = rhs(0) / diag(0);
    for (int i = 1; i < n; ++i) {
        const double denom = diag(i) - lower(i) * c_prime(i - 1);
        c_prime(i) = upper(i) / denom;
        d_prime(i) = (rhs(i) - lower(i) * d_prime(i - 1)) / denom;
    }
    RVector x(n);
    x(n - 1) = d_prime(n - 1);
    for (int i = n - 2; i >= 0; --i) x(i) = d_prime(i) - c_prime(i) * x(i + 1);
    return x;
}

}  // namespace

Trajectory simulate_burgers(const BurgersConfig& cfg, const RVector& u0) {
    cfg.validate();
    if (u0.size() != cfg.nx)
        throw DimensionError("simulate_burgers: u0 must have nx = " + std::to_string(cfg.nx) +
                             " entries, got " + std::to_string(u0.size()));
    if (u0(0) != 0.0 || u0(cfg.nx - 1) != 0.0)
        throw ConfigError("simulate_burgers: u0 must satisfy the zero Dirichlet boundaries");

    const int interior = cfg.nx - 2;
    const double diffusion = cfg.viscosity * cfg.dt / (cfg.dx * cfg.dx);

    Trajectory traj;
    traj.dt = cfg.dt;
    traj.states.reserve(static_cast<std::size_t>(cfg.nt) + 1);
    traj.states.push_back(u0);

    // Backward-Euler step with the advection linearized around the previous
    // field: (I - k dt D2 + dt diag(u^n) Dc) u^{n+1} = u^n. Each row sums to
    // one and stays diagonally dominant while |u| dt / (2 dx) <= diffusion,
    // which gives the discrete maximum principle on this grid.
    RVector u = u0;
    RVector lower(interior), diag(interior), upper(interior), rhs(interior);
    for (int step = 1; step <= cfg.nt; ++step) {
        for (int j = 1; j <= interior; ++j) {
            const double courant = cfg.dt * u(j) / (2.0 * cfg.dx);
            lower(j - 1) = -diffusion - courant;
            diag(j - 1) = 1.0 + 2.0 * diffusion;
            upper(j - 1) = -diffusion + courant;
            rhs(j - 1) = u(j);
        }
        const RVector inner = solve_tridiagonal(lower, diag, upper, rhs);
        u.setZero();
        u.segment(1, interior) = inner;

        if (!u.allFinite())
            throw NumericalError("simulate_burgers: instability detected at step " +
                                 std::to_string(step));
        traj.states.push_back(u);
    }
    return traj;
}

RVector burgers_grid(const BurgersConfig& cfg) {
    RVector x(cfg.nx);
    for (int j = 0; j < cfg.nx; ++j) x(j) = j * cfg.dx;
    return x;
}

RVector burgers_sine_initial(const BurgersConfig& cfg) {
    const RVector x = burgers_grid(cfg);
    RVector u0(cfg.nx);
    for (int j = 0; j < cfg.nx; ++j) u0(j) = std::sin(2.0 * std::numbers::pi * x(j));
    u0(0) = 0.0;
    u0(cfg.nx - 1) = 0.0;
    return u0;
}

}  // namespace koop
