#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "random.hpp"
#include "tolerances.hpp"

namespace subchan {

enum class ChannelFamily { phase_damping, amplitude_damping, depolarizing, custom };

inline std::string_view to_string(ChannelFamily f) {
  switch (f) {
    case ChannelFamily::phase_damping: return "phase-damping";
    case ChannelFamily::amplitude_damping: return "amplitude-damping";
    case ChannelFamily::depolarizing: return "depolarizing";
    case ChannelFamily::custom: return "custom";
  }
  return "unknown";
}

// A completely positive map x -> sum_i E_i x E_i^* on an N-level truncated
// Fock space. Immutable after construction.
//
// When every Kraus operator is diagonal the channel acts as a Schur
// (entrywise) multiplier, x -> G o x with G(k,s) = sum_i E_i(k,k) conj(E_i(s,s)).
// G is accumulated from the stored Kraus operators at construction and the
// application routines use it instead of the dense Kraus sum.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<FockOperator> kraus_ops,
                        ChannelFamily family = ChannelFamily::custom,
                        std::optional<double> parameter = std::nullopt)
      : ops_(std::move(kraus_ops)), family_(family), parameter_(parameter) {
    if (ops_.empty()) throw DimensionError("KrausChannel: empty Kraus list");
    dim_ = static_cast<std::size_t>(ops_.front().rows());
    if (dim_ == 0) throw DimensionError("KrausChannel: zero-dimensional Kraus operator");
    diagonal_ = true;
    for (const auto& e : ops_) {
      if (static_cast<std::size_t>(e.rows()) != dim_ || static_cast<std::size_t>(e.cols()) != dim_)
        throw DimensionError("KrausChannel: Kraus operators must all be " + std::to_string(dim_) +
                             "x" + std::to_string(dim_));
      if (diagonal_ && !e.isDiagonal(0.0)) diagonal_ = false;
    }
    if (diagonal_) {
      const auto n = static_cast<Eigen::Index>(dim_);
      Eigen::MatrixXcd diags(n, static_cast<Eigen::Index>(ops_.size()));
      for (std::size_t i = 0; i < ops_.size(); ++i)
        diags.col(static_cast<Eigen::Index>(i)) = ops_[i].diagonal();
      schur_ = diags * diags.adjoint();
    }
    FockOperator s = FockOperator::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    if (diagonal_) {
      s.diagonal() = schur_.diagonal();
    } else {
      for (const auto& e : ops_) s.noalias() += e.adjoint() * e;
    }
    completeness_ = std::move(s);
  }

  std::size_t dim() const { return dim_; }
  const std::vector<FockOperator>& kraus_ops() const { return ops_; }
  std::size_t kraus_truncation() const { return ops_.size(); }
  ChannelFamily family() const { return family_; }
  // eta for the damping families, p for depolarizing, empty for custom.
  const std::optional<double>& parameter() const { return parameter_; }
  bool is_diagonal() const { return diagonal_; }
  // Only meaningful when is_diagonal().
  const Eigen::MatrixXcd& schur_multiplier() const { return schur_; }
  // sum_i E_i^* E_i
  const FockOperator& completeness() const { return completeness_; }

 private:
  std::vector<FockOperator> ops_;
  std::size_t dim_ = 0;
  ChannelFamily family_;
  std::optional<double> parameter_;
  bool diagonal_ = false;
  Eigen::MatrixXcd schur_;
  FockOperator completeness_;
};

namespace detail {

inline void require_dim(const KrausChannel& ch, const FockOperator& x, const char* who) {
  if (static_cast<std::size_t>(x.rows()) != ch.dim() || static_cast<std::size_t>(x.cols()) != ch.dim())
    throw DimensionError(std::string(who) + ": operator is " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + ", channel dim is " + std::to_string(ch.dim()));
}

}  // namespace detail

inline KrausChannel identity_channel(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return KrausChannel({FockOperator::Identity(n, n)});
}

// Phi(x) = sum_i E_i x E_i^*
inline FockOperator apply_channel(const KrausChannel& ch, const FockOperator& x) {
  detail::require_dim(ch, x, "apply_channel");
  if (ch.is_diagonal()) return ch.schur_multiplier().cwiseProduct(x);
  FockOperator y = FockOperator::Zero(x.rows(), x.cols());
  FockOperator tmp(x.rows(), x.cols());
  for (const auto& e : ch.kraus_ops()) {
    tmp.noalias() = e * x;
    y.noalias() += tmp * e.adjoint();
  }
  return y;
}

// Phi^*(x) = sum_i E_i^* x E_i, the dual under Tr(x1 Phi^*(x2)) = Tr(Phi(x1) x2).
inline FockOperator adjoint_apply(const KrausChannel& ch, const FockOperator& x) {
  detail::require_dim(ch, x, "adjoint_apply");
  if (ch.is_diagonal()) return ch.schur_multiplier().conjugate().cwiseProduct(x);
  FockOperator y = FockOperator::Zero(x.rows(), x.cols());
  FockOperator tmp(x.rows(), x.cols());
  for (const auto& e : ch.kraus_ops()) {
    tmp.noalias() = e.adjoint() * x;
    y.noalias() += tmp * e;
  }
  return y;
}

// ||(sum_i E_i^* E_i - I)|| restricted to the top-left block x block corner.
inline double tp_defect(const KrausChannel& ch, std::size_t block) {
  if (block == 0 || block > ch.dim())
    throw RangeError("tp_defect: block " + std::to_string(block) + " outside [1, " +
                     std::to_string(ch.dim()) + "]");
  const auto b = static_cast<Eigen::Index>(block);
  FockOperator d = ch.completeness().topLeftCorner(b, b) - FockOperator::Identity(b, b);
  if (ch.is_diagonal()) return d.diagonal().cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<FockOperator> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double tp_defect(const KrausChannel& ch) { return tp_defect(ch, ch.dim()); }

struct VerificationReport {
  std::size_t block = 0;
  double tp_defect = 0.0;
  // max over samples of max |Phi(x) - Phi(x)^*| for random hermitian x on the block
  double hermiticity_defect = 0.0;
  // min over samples of the smallest eigenvalue of Phi(rho)
  double min_output_eigenvalue = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  bool trace_preserving = false;
  bool hermiticity_preserving = false;
  bool positivity_preserving = false;

  bool ok() const { return trace_preserving && hermiticity_preserving && positivity_preserving; }
};

// Self-checks on the top-left block. Defects are reported, never thrown.
inline VerificationReport verify_channel(const KrausChannel& ch, std::size_t block,
                                         std::uint64_t seed = 20240601, std::size_t samples = 20,
                                         const Tolerances& tol = default_tolerances) {
  VerificationReport r;
  r.block = block;
  r.seed = seed;
  r.samples = samples;
  r.tp_defect = tp_defect(ch, block);
  r.min_output_eigenvalue = 1.0;

  Rng rng(seed);
  const auto b = static_cast<Eigen::Index>(block);
  for (std::size_t n = 0; n < samples; ++n) {
    FockOperator h = FockOperator::Zero(static_cast<Eigen::Index>(ch.dim()), static_cast<Eigen::Index>(ch.dim()));
    h.topLeftCorner(b, b) = random_hermitian(rng, block);
    r.hermiticity_defect = std::max(r.hermiticity_defect, hermiticity_defect(apply_channel(ch, h)));

    const FockOperator rho = random_state(rng, ch.dim(), block);
    r.min_output_eigenvalue = std::min(r.min_output_eigenvalue, min_eigenvalue(apply_channel(ch, rho)));
  }
  r.trace_preserving = r.tp_defect <= tol.spectral;
  r.hermiticity_preserving = r.hermiticity_defect <= tol.structural * std::max<double>(1.0, static_cast<double>(block));
  r.positivity_preserving = r.min_output_eigenvalue >= -tol.spectral;
  return r;
}

// Linear map on column-stacked operators: vec(Phi(x)) = matrix * vec(x).
struct Superoperator {
  std::size_t dim = 0;
  Eigen::MatrixXcd matrix;

  FockOperator apply(const FockOperator& x) const { return unvec(matrix * vec(x), dim); }
};

inline constexpr std::size_t max_superoperator_dim = 64;

// matrix = sum_i conj(E_i) (x) E_i, since vec(A x B) = (B^T (x) A) vec(x).
inline Superoperator superoperator_of(const KrausChannel& ch) {
  if (ch.dim() > max_superoperator_dim)
    throw ResourceError("superoperator_of: dim " + std::to_string(ch.dim()) + " exceeds " +
                        std::to_string(max_superoperator_dim) +
                        " (the N^2 x N^2 matrix would not fit); rebuild the channel with a smaller truncation");
  const auto n = static_cast<Eigen::Index>(ch.dim());
  Superoperator s;
  s.dim = ch.dim();
  if (ch.is_diagonal()) {
    s.matrix = Eigen::MatrixXcd::Zero(n * n, n * n);
    s.matrix.diagonal() = vec(ch.schur_multiplier());
    return s;
  }
  s.matrix = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (const auto& e : ch.kraus_ops()) {
    const Eigen::MatrixXcd ec = e.conjugate();
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index l = 0; l < n; ++l) {
        const Complex c = ec(j, l);
        if (c == Complex(0.0)) continue;
        s.matrix.block(j * n, l * n, n, n) += c * e;
      }
  }
  return s;
}

}  // namespace subchan
