#pragma once

#include <cstdint>
#include <random>

#include "koop/types.hpp"

namespace koop {

using Rng = std::mt19937_64;

/// Uniform sample from the solid 2-norm ball of the given radius:
/// direction uniform on the sphere, magnitude radius * U^(1/dim).
RVector sample_in_ball(Rng& rng, int dim, double radius);

/// Complex matrix with uniform direction on the Frobenius unit sphere and
/// magnitude uniform in [0, radius]. Not volume-uniform; this is the law
/// the worst-case residual sampler specifies.
CMatrix sample_matrix_in_ball(Rng& rng, int rows, int cols, double radius);

}  // namespace koop
