#pragma once

#include <string>
#include <vector>

#include "koop/types.hpp"

namespace koop {

enum class DictionaryKind { Linear, Fourier, Monomial };

std::string to_string(DictionaryKind kind);

/// A named finite family of observables mapping an N-dimensional real state
/// to a K-dimensional complex feature row.
///
/// - linear:            psi(x) = x, K = N
/// - fourier(n_max, j): [e^{-i n_max x_j}, ..., 1, ..., e^{i n_max x_j}],
///                      ascending frequency, K = 2 n_max + 1
/// - monomial(d):       all monomials of total degree <= d, graded-lex order
///                      with the constant term first, K = C(N + d, d)
class Dictionary {
public:
    /// Empty descriptor; only valid as an assignment target (evaluation throws).
    Dictionary() = default;

    static Dictionary linear(int state_dim);
    static Dictionary fourier(int state_dim, int n_max, int coord_index);
    static Dictionary monomial(int state_dim, int max_degree);

    Dictionary with_name(std::string name) const;

    const std::string& name() const { return name_; }
    DictionaryKind kind() const { return kind_; }
    int state_dim() const { return state_dim_; }
    int feature_dim() const { return feature_dim_; }
    int n_max() const { return n_max_; }
    int coord_index() const { return coord_index_; }
    int max_degree() const { return max_degree_; }

    CRowVector evaluate(const RVector& x) const;
    CMatrix evaluate_batch(const std::vector<RVector>& X) const;

private:
    std::string name_;
    DictionaryKind kind_ = DictionaryKind::Linear;
    int state_dim_ = 0;
    int feature_dim_ = 0;
    int n_max_ = 0;
    int coord_index_ = 0;
    int max_degree_ = 0;
    std::vector<std::vector<int>> exponents_;  // monomial kind only
};

}  // namespace koop
