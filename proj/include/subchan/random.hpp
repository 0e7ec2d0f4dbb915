#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "linalg.hpp"

namespace subchan {

using Rng = std::mt19937_64;

// Ginibre-distributed density matrix supported on the first `block` levels of
// a `dim`-level space.
inline FockOperator random_state(Rng& rng, std::size_t dim, std::size_t block) {
  std::normal_distribution<double> gauss;
  const auto b = static_cast<Eigen::Index>(block);
  Eigen::MatrixXcd g(b, b);
  for (Eigen::Index i = 0; i < b; ++i)
    for (Eigen::Index j = 0; j < b; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  FockOperator rho = FockOperator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  rho.topLeftCorner(b, b) = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

inline FockOperator random_state(Rng& rng, std::size_t dim) { return random_state(rng, dim, dim); }

inline FockOperator random_hermitian(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> gauss;
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  return 0.5 * (g + g.adjoint());
}

inline FockVector random_unit_vector(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> gauss;
  FockVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v.normalized();
}

}  // namespace subchan
