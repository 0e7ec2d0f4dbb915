#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "errors.hpp"
#include "linalg.hpp"

namespace subchan {

// |k> truncated to `dim` levels.
inline FockVector fock_state(std::size_t k, std::size_t dim) {
  if (k >= dim)
    throw RangeError("fock_state: level " + std::to_string(k) + " outside truncation " +
                     std::to_string(dim));
  FockVector v = FockVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return v;
}

// ln C(k, i) through log-gamma in extended precision.
inline double log_binomial(std::size_t k, std::size_t i) {
  if (i > k)
    throw DomainError("log_binomial: i = " + std::to_string(i) + " exceeds k = " +
                      std::to_string(k));
  const std::size_t j = std::min(i, k - i);
  if (j == 0) return 0.0;
  const long double n = static_cast<long double>(k);
  const long double r = static_cast<long double>(j);
  return static_cast<double>(std::lgamma(n + 1.0L) - std::lgamma(r + 1.0L) -
                             std::lgamma(n - r + 1.0L));
}

namespace detail {

// ln of the Poisson weight |alpha|^{2k} e^{-|alpha|^2} / k!.
inline long double log_poisson_weight(long double mean, std::size_t k) {
  const long double kk = static_cast<long double>(k);
  if (mean == 0.0L) return k == 0 ? 0.0L : -INFINITY;
  return -mean + kk * std::log(mean) - std::lgamma(kk + 1.0L);
}

// Sum of Poisson weights from `first` upward.
inline double poisson_tail(double mean, std::size_t first) {
  if (mean == 0.0) return first == 0 ? 1.0 : 0.0;
  long double sum = 0.0L;
  for (std::size_t k = first;; ++k) {
    const long double w = std::exp(log_poisson_weight(mean, k));
    sum += w;
    if (static_cast<double>(k) > mean && w <= 1e-20L * sum) break;
    if (static_cast<double>(k) > mean && sum == 0.0L) break;
  }
  return static_cast<double>(sum);
}

}  // namespace detail

struct CoherentState {
  FockVector amplitudes;
  // 1 - sum_k |amplitudes[k]|^2, the weight lost to truncation.
  double deficit = 0.0;
};

// e^{-|alpha|^2/2} alpha^k / sqrt(k!) for k < dim. Not renormalized.
inline CoherentState coherent_state(Complex alpha, std::size_t dim) {
  if (dim == 0) throw DimensionError("coherent_state: dim must be positive");
  CoherentState out;
  out.amplitudes = FockVector::Zero(static_cast<Eigen::Index>(dim));
  const double r = std::abs(alpha);
  if (r == 0.0) {
    out.amplitudes(0) = 1.0;
    return out;
  }
  const double phase = std::arg(alpha);
  const long double mean = static_cast<long double>(r) * r;
  for (std::size_t k = 0; k < dim; ++k) {
    const double mag = static_cast<double>(std::exp(0.5L * detail::log_poisson_weight(mean, k)));
    out.amplitudes(static_cast<Eigen::Index>(k)) = std::polar(mag, phase * static_cast<double>(k));
  }
  out.deficit = detail::poisson_tail(static_cast<double>(mean), dim);
  return out;
}

// Smallest truncation whose coherent-state deficit is at most `target`.
inline std::size_t coherent_dim_for(Complex alpha, double target) {
  const double mean = std::norm(alpha);
  std::size_t dim = 1;
  while (detail::poisson_tail(mean, dim) > target) ++dim;
  return dim;
}

}  // namespace subchan
