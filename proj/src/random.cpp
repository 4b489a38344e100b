#include "koop/random.hpp"

#include <cmath>

namespace koop {

RVector sample_in_ball(Rng& rng, int dim, double radius) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    RVector dir(dim);
    double norm = 0.0;
    do {
        for (int i = 0; i < dim; ++i) dir[i] = gauss(rng);
        norm = dir.norm();
    } while (norm == 0.0);

    const double r = radius * std::pow(unit(rng), 1.0 / dim);
    return (r / norm) * dir;
}

CMatrix sample_matrix_in_ball(Rng& rng, int rows, int cols, double radius) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    CMatrix dir(rows, cols);
    double norm = 0.0;
    do {
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) dir(i, j) = Complex(gauss(rng), gauss(rng));
        norm = dir.norm();
    } while (norm == 0.0);

    const double r = radius * unit(rng);
    return (r / norm) * dir;
}

}  // namespace koop
