#include "koop/types.hpp"

#include "koop/errors.hpp"

namespace koop {

std::string to_string(SolverMode mode) {
    switch (mode) {
        case SolverMode::Pseudoinverse: return "pseudoinverse";
        case SolverMode::Ridge: return "ridge";
        case SolverMode::ExactFrobenius: return "exact-frobenius";
    }
    return "ridge";
}

SolverMode solver_mode_from_string(const std::string& s) {
    if (s == "pseudoinverse") return SolverMode::Pseudoinverse;
    if (s == "ridge") return SolverMode::Ridge;
    if (s == "exact-frobenius") return SolverMode::ExactFrobenius;
    throw ConfigError("unknown solver mode: '" + s + "'");
}

void require_finite(const CMatrix& m, const char* what) {
    if (!m.allFinite()) {
        throw NumericalError(std::string(what) + ": non-finite entries in " +
                             std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + " matrix");
    }
}

void require_finite(const RVector& v, const char* what) {
    if (!v.allFinite()) {
        throw NumericalError(std::string(what) + ": non-finite entries in vector of size " +
                             std::to_string(v.size()));
    }
}

CRowVector embed_row(const RVector& x) {
    return x.transpose().cast<Complex>();
}

}  // namespace koop
