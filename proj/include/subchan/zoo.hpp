#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "fock.hpp"
#include "tolerances.hpp"

namespace subchan {

struct PhaseDampingOptions {
  // Number of Kraus terms to keep. Chosen from the Poisson tail bound when empty.
  std::optional<std::size_t> kraus_truncation;
  // Levels [0, working_block) on which the tail bound must hold. Defaults to dim.
  std::optional<std::size_t> working_block;
  // Target completeness defect for the automatic truncation.
  double tail_target = default_tolerances.kraus_tail;
};

// Upper limit on stored Kraus entries (terms * dim^2), about 0.5 GiB.
inline constexpr std::size_t max_kraus_entries = std::size_t{1} << 25;

namespace detail {

// Smallest M with sum_{i >= M} Poisson(mean)(i) <= target.
inline std::size_t poisson_cutoff(double mean, double target) {
  if (mean <= 0.0) return 1;
  std::vector<long double> w;
  for (std::size_t i = 0;; ++i) {
    const long double v = std::exp(log_poisson_weight(static_cast<long double>(mean), i));
    w.push_back(v);
    if (static_cast<double>(i) > mean && v < 1e-30L) break;
  }
  long double tail = 0.0L;
  std::size_t m = w.size();
  for (std::size_t i = w.size(); i-- > 0;) {
    if (tail + w[i] > static_cast<long double>(target)) break;
    tail += w[i];
    m = i;
  }
  return std::max<std::size_t>(m, 1);
}

inline void check_unit_interval(double v, const char* who, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw DomainError(std::string(who) + ": " + name + " = " + std::to_string(v) + " outside [0, 1]");
}

}  // namespace detail

// Diagonal Kraus operators E_i(k,k) = (k sqrt(-2 ln eta))^i / sqrt(i!) * eta^{k^2},
// evaluated in log space. eta = 1 gives the single operator I.
inline KrausChannel phase_damping(double eta, std::size_t dim, const PhaseDampingOptions& opt = {}) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw DomainError("phase_damping: eta = " + std::to_string(eta) + " must lie in (0, 1]");
  if (dim == 0) throw DimensionError("phase_damping: dim must be positive");
  const auto n = static_cast<Eigen::Index>(dim);
  if (eta == 1.0) return KrausChannel({FockOperator::Identity(n, n)}, ChannelFamily::phase_damping, eta);

  const long double rate = -2.0L * std::log(static_cast<long double>(eta));
  const long double log_eta = std::log(static_cast<long double>(eta));
  std::size_t terms = 0;
  if (opt.kraus_truncation) {
    terms = *opt.kraus_truncation;
    if (terms == 0) throw DomainError("phase_damping: kraus_truncation must be positive");
  } else {
    const std::size_t block = opt.working_block.value_or(dim);
    if (block == 0 || block > dim) throw RangeError("phase_damping: working_block outside [1, dim]");
    const double top = static_cast<double>(block - 1);
    terms = detail::poisson_cutoff(top * top * static_cast<double>(rate), opt.tail_target);
  }
  if (terms * dim * dim > max_kraus_entries)
    throw ResourceError("phase_damping: " + std::to_string(terms) + " Kraus terms at dim " +
                        std::to_string(dim) +
                        " exceed the memory guard; lower dim, raise eta, or pass a smaller working_block");

  std::vector<FockOperator> ops;
  ops.reserve(terms);
  for (std::size_t i = 0; i < terms; ++i) {
    FockOperator e = FockOperator::Zero(n, n);
    const long double ii = static_cast<long double>(i);
    const long double half_log_fact = 0.5L * std::lgamma(ii + 1.0L);
    for (std::size_t k = 0; k < dim; ++k) {
      const long double kk = static_cast<long double>(k);
      if (k == 0) {
        if (i == 0) e(0, 0) = 1.0;
        continue;
      }
      const long double log_entry = ii * std::log(kk * std::sqrt(rate)) - half_log_fact + kk * kk * log_eta;
      e(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = static_cast<double>(std::exp(log_entry));
    }
    ops.push_back(std::move(e));
  }
  return KrausChannel(std::move(ops), ChannelFamily::phase_damping, eta);
}

// Phi(|k><s|) = eta^{(k-s)^2} |k><s|
inline double phase_damping_closed(double eta, std::size_t k, std::size_t s) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw DomainError("phase_damping_closed: eta = " + std::to_string(eta) + " must lie in (0, 1]");
  const double d = static_cast<double>(k) - static_cast<double>(s);
  return std::pow(eta, d * d);
}

// E_i = sum_k sqrt(C(k,i)) eta^{(k-i)/2} (1-eta)^{i/2} |k-i><k|, i = 0..dim-1.
// At eta = 0 the factor 0^0 is taken as 1, so every level decays to |0>.
inline KrausChannel amplitude_damping(double eta, std::size_t dim) {
  detail::check_unit_interval(eta, "amplitude_damping", "eta");
  if (dim == 0) throw DimensionError("amplitude_damping: dim must be positive");
  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<FockOperator> ops;
  ops.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    FockOperator e = FockOperator::Zero(n, n);
    const double loss = std::pow(1.0 - eta, 0.5 * static_cast<double>(i));
    for (std::size_t k = i; k < dim; ++k) {
      const double keep = std::pow(eta, 0.5 * static_cast<double>(k - i));
      e(static_cast<Eigen::Index>(k - i), static_cast<Eigen::Index>(k)) =
          std::exp(0.5 * log_binomial(k, i)) * keep * loss;
    }
    ops.push_back(std::move(e));
  }
  return KrausChannel(std::move(ops), ChannelFamily::amplitude_damping, eta);
}

// Phi(|k><s|) = sum_{i=0}^{k} sqrt(C(k,i) C(s,i)) eta^{(k+s)/2 - i} (1-eta)^i |k-i><s-i|
// for k <= s. Take the adjoint of the (s, k) result for k > s.
inline FockOperator amplitude_damping_closed(double eta, std::size_t k, std::size_t s, std::size_t dim) {
  detail::check_unit_interval(eta, "amplitude_damping_closed", "eta");
  if (k > s) throw DomainError("amplitude_damping_closed: requires k <= s (conjugate-transpose the (s, k) result)");
  if (s >= dim) throw RangeError("amplitude_damping_closed: level " + std::to_string(s) + " outside dim");
  const auto n = static_cast<Eigen::Index>(dim);
  FockOperator y = FockOperator::Zero(n, n);
  for (std::size_t i = 0; i <= k; ++i) {
    const double w = std::exp(0.5 * (log_binomial(k, i) + log_binomial(s, i))) *
                     std::pow(eta, 0.5 * static_cast<double>(k + s) - static_cast<double>(i)) *
                     std::pow(1.0 - eta, static_cast<double>(i));
    y(static_cast<Eigen::Index>(k - i), static_cast<Eigen::Index>(s - i)) += w;
  }
  return y;
}

// y_kl = sum_i sqrt(C(k+i,i) C(l+i,i)) eta^{(k+l)/2} (1-eta)^i x_{k+i,l+i}
inline FockOperator amplitude_damping_matrix_form(double eta, const FockOperator& x) {
  detail::check_unit_interval(eta, "amplitude_damping_matrix_form", "eta");
  if (x.rows() != x.cols()) throw DimensionError("amplitude_damping_matrix_form: operator must be square");
  const std::size_t dim = static_cast<std::size_t>(x.rows());
  FockOperator y = FockOperator::Zero(x.rows(), x.cols());
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t l = 0; l < dim; ++l) {
      const double head = std::pow(eta, 0.5 * static_cast<double>(k + l));
      Complex acc = 0.0;
      for (std::size_t i = 0; k + i < dim && l + i < dim; ++i) {
        const double w = std::exp(0.5 * (log_binomial(k + i, i) + log_binomial(l + i, i))) *
                         std::pow(1.0 - eta, static_cast<double>(i));
        acc += w * x(static_cast<Eigen::Index>(k + i), static_cast<Eigen::Index>(l + i));
      }
      y(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = head * acc;
    }
  return y;
}

// Phi(x) = p x + (1 - p) Tr(x) I / N, realized by sqrt(p) I together with the
// N^2 operators sqrt((1-p)/N) |j><l|.
inline KrausChannel depolarizing(double p, std::size_t dim) {
  detail::check_unit_interval(p, "depolarizing", "p");
  if (dim == 0) throw DimensionError("depolarizing: dim must be positive");
  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<FockOperator> ops;
  if (p > 0.0) ops.push_back(std::sqrt(p) * FockOperator::Identity(n, n));
  if (p < 1.0) {
    const double amp = std::sqrt((1.0 - p) / static_cast<double>(dim));
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index l = 0; l < n; ++l) {
        FockOperator e = FockOperator::Zero(n, n);
        e(j, l) = amp;
        ops.push_back(std::move(e));
      }
  }
  return KrausChannel(std::move(ops), ChannelFamily::depolarizing, p);
}

// Amplitude damping on a coherent dyad:
// Phi(|a><b|) = |sqrt(eta) a><sqrt(eta) b| exp[(1-eta)(-(|a|^2+|b|^2)/2 + a conj(b))].
inline FockOperator coherent_action_closed(double eta, Complex alpha, Complex beta, std::size_t dim,
                                           const Tolerances& tol = default_tolerances) {
  detail::check_unit_interval(eta, "coherent_action_closed", "eta");
  for (Complex z : {alpha, beta}) {
    const CoherentState c = coherent_state(z, dim);
    if (c.deficit > tol.coherent_deficit)
      throw PrecisionError("coherent_action_closed: truncation deficit " + std::to_string(c.deficit) +
                           " for |alpha| = " + std::to_string(std::abs(z)) + " at dim " + std::to_string(dim) +
                           "; needs dim >= " + std::to_string(coherent_dim_for(z, tol.coherent_deficit)));
  }
  const double root = std::sqrt(eta);
  const FockVector a = coherent_state(root * alpha, dim).amplitudes;
  const FockVector b = coherent_state(root * beta, dim).amplitudes;
  const Complex factor =
      std::exp((1.0 - eta) * (-(std::norm(alpha) + std::norm(beta)) / 2.0 + alpha * std::conj(beta)));
  return factor * outer(a, b);
}

}  // namespace subchan
