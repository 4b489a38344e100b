#include "koop/dictionary.hpp"

#include <cmath>
#include <functional>

#include "koop/errors.hpp"

namespace koop {

namespace {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long result = 1;
    for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

// All exponent tuples of total degree <= max_degree, graded-lex:
// degree ascending, within a degree lexicographic with the first
// coordinate dominant. The constant term comes first.
std::vector<std::vector<int>> monomial_exponents(int state_dim, int max_degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<std::size_t>(state_dim), 0);

    std::function<void(int, int)> fill = [&](int coord, int remaining) {
        if (coord == state_dim - 1) {
            current[static_cast<std::size_t>(coord)] = remaining;
            out.push_back(current);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            current[static_cast<std::size_t>(coord)] = e;
            fill(coord + 1, remaining - e);
        }
    };

    for (int degree = 0; degree <= max_degree; ++degree) fill(0, degree);
    return out;
}

}  // namespace

std::string to_string(DictionaryKind kind) {
    switch (kind) {
        case DictionaryKind::Linear: return "linear";
        case DictionaryKind::Fourier: return "fourier";
        case DictionaryKind::Monomial: return "monomial";
    }
    return "linear";
}

Dictionary Dictionary::linear(int state_dim) {
    if (state_dim < 1) throw ConfigError("linear dictionary: state_dim must be >= 1");
    Dictionary d;
    d.kind_ = DictionaryKind::Linear;
    d.state_dim_ = state_dim;
    d.feature_dim_ = state_dim;
    d.name_ = "linear";
    return d;
}

Dictionary Dictionary::fourier(int state_dim, int n_max, int coord_index) {
    if (state_dim < 1) throw ConfigError("fourier dictionary: state_dim must be >= 1");
    if (n_max < 0) throw ConfigError("fourier dictionary: n_max must be >= 0");
    if (coord_index < 0 || coord_index >= state_dim)
        throw ConfigError("fourier dictionary: coord_index " + std::to_string(coord_index) +
                          " out of range for state_dim " + std::to_string(state_dim));
    Dictionary d;
    d.kind_ = DictionaryKind::Fourier;
    d.state_dim_ = state_dim;
    d.n_max_ = n_max;
    d.coord_index_ = coord_index;
    d.feature_dim_ = 2 * n_max + 1;
    d.name_ = "fourier-" + std::to_string(n_max);
    return d;
}

Dictionary Dictionary::monomial(int state_dim, int max_degree) {
    if (state_dim < 1) throw ConfigError("monomial dictionary: state_dim must be >= 1");
    if (max_degree < 0) throw ConfigError("monomial dictionary: max_degree must be >= 0");
    Dictionary d;
    d.kind_ = DictionaryKind::Monomial;
    d.state_dim_ = state_dim;
    d.max_degree_ = max_degree;
    d.exponents_ = monomial_exponents(state_dim, max_degree);
    d.feature_dim_ = static_cast<int>(binomial(state_dim + max_degree, max_degree));
    d.name_ = "monomial-" + std::to_string(max_degree);
    return d;
}

Dictionary Dictionary::with_name(std::string name) const {
    Dictionary d = *this;
    d.name_ = std::move(name);
    return d;
}

CRowVector Dictionary::evaluate(const RVector& x) const {
    if (x.size() != state_dim_)
        throw DimensionError("dictionary '" + name_ + "': expected state of dimension " +
                             std::to_string(state_dim_) + ", got " + std::to_string(x.size()));
    require_finite(x, "dictionary evaluate");

    CRowVector row(feature_dim_);
    switch (kind_) {
        case DictionaryKind::Linear:
            row = embed_row(x);
            break;
        case DictionaryKind::Fourier: {
            const double angle = x(coord_index_);
            for (int k = -n_max_; k <= n_max_; ++k)
                row(k + n_max_) = std::exp(Complex(0.0, k * angle));
            break;
        }
        case DictionaryKind::Monomial: {
            for (int j = 0; j < feature_dim_; ++j) {
                double value = 1.0;
                const auto& exps = exponents_[static_cast<std::size_t>(j)];
                for (int c = 0; c < state_dim_; ++c)
                    value *= std::pow(x(c), exps[static_cast<std::size_t>(c)]);
                row(j) = Complex(value, 0.0);
            }
            break;
        }
    }
    return row;
}

CMatrix Dictionary::evaluate_batch(const std::vector<RVector>& X) const {
    CMatrix out(static_cast<Eigen::Index>(X.size()), feature_dim_);
    for (std::size_t m = 0; m < X.size(); ++m)
        out.row(static_cast<Eigen::Index>(m)) = evaluate(X[m]);
    return out;
}

}  // namespace koop
