#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "fock.hpp"
#include "linalg.hpp"
#include "tolerances.hpp"

namespace subchan {

// An ordered orthonormal basis b_0..b_{d-1} of a subspace K of the N-level
// Fock space, stored as the columns of an N x d matrix.
class Subspace {
 public:
  explicit Subspace(Eigen::MatrixXcd basis, const Tolerances& tol = default_tolerances)
      : basis_(std::move(basis)) {
    if (basis_.cols() == 0) throw DimensionError("Subspace: empty basis");
    if (basis_.cols() > basis_.rows())
      throw DimensionError("Subspace: " + std::to_string(basis_.cols()) + " vectors in a " +
                           std::to_string(basis_.rows()) + "-level space");
    const Eigen::MatrixXcd gram = basis_.adjoint() * basis_;
    const double defect =
        (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (defect > tol.basis)
      throw ConstraintError("Subspace: basis is not orthonormal (Gram defect " + std::to_string(defect) + ")",
                            defect);
  }

  static Subspace from_vectors(const std::vector<FockVector>& vs, const Tolerances& tol = default_tolerances) {
    if (vs.empty()) throw DimensionError("Subspace: empty basis");
    Eigen::MatrixXcd b(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
    for (std::size_t j = 0; j < vs.size(); ++j) {
      if (vs[j].size() != b.rows()) throw DimensionError("Subspace: basis vectors differ in length");
      b.col(static_cast<Eigen::Index>(j)) = vs[j];
    }
    return Subspace(std::move(b), tol);
  }

  // span{|k_0>, ..., |k_{d-1}>}
  static Subspace from_levels(std::span<const std::size_t> levels, std::size_t dim) {
    std::vector<FockVector> vs;
    for (std::size_t k : levels) {
      FockVector f = fock_state(k, dim);
      for (const auto& v : vs)
        if (std::abs(v(static_cast<Eigen::Index>(k))) > 0.0)
          throw DimensionError("Subspace: level " + std::to_string(k) + " repeated");
      vs.push_back(std::move(f));
    }
    return from_vectors(vs);
  }
  static Subspace from_levels(std::initializer_list<std::size_t> levels, std::size_t dim) {
    return from_levels(std::span<const std::size_t>(levels.begin(), levels.size()), dim);
  }

  std::size_t ambient_dim() const { return static_cast<std::size_t>(basis_.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(basis_.cols()); }
  const Eigen::MatrixXcd& basis() const { return basis_; }
  FockVector vector(std::size_t j) const { return basis_.col(static_cast<Eigen::Index>(j)); }

  // One past the highest level any basis vector touches.
  std::size_t support_block() const {
    for (Eigen::Index k = basis_.rows(); k-- > 0;)
      if (basis_.row(k).cwiseAbs().maxCoeff() > 0.0) return static_cast<std::size_t>(k + 1);
    return 1;
  }

 private:
  Eigen::MatrixXcd basis_;
};

inline FockOperator projector(const Subspace& k) { return k.basis() * k.basis().adjoint(); }

// Mean of |<a_i|b_j>|^2 summed over j: Tr(P_A P_B) / dim A. Equals 1 iff A is inside B.
inline double subspace_overlap(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("subspace_overlap: ambient dims differ");
  return (b.basis().adjoint() * a.basis()).squaredNorm() / static_cast<double>(a.size());
}

namespace detail {

inline void require_same_space(const KrausChannel& ch, const Subspace& k, const char* who) {
  if (ch.dim() != k.ambient_dim())
    throw DimensionError(std::string(who) + ": subspace lives in " + std::to_string(k.ambient_dim()) +
                         " levels, channel in " + std::to_string(ch.dim()));
}

}  // namespace detail

// x -> P_K Phi(x) P_K for x supported on K. Holds a reference to the channel,
// which must outlive it.
class RestrictedMap {
 public:
  RestrictedMap(const KrausChannel& ch, Subspace k, const Tolerances& tol = default_tolerances)
      : ch_(&ch), k_(std::move(k)), p_(subchan::projector(k_)), tol_(tol) {
    detail::require_same_space(ch, k_, "restrict");
  }

  FockOperator operator()(const FockOperator& x) const {
    detail::require_dim(*ch_, x, "restrict");
    const double outside = operator_norm(x - p_ * x * p_);
    if (outside > tol_.spectral)
      throw ContractViolation("restrict: input not supported on K (weight " + std::to_string(outside) +
                              " outside P_K x P_K)");
    return p_ * apply_channel(*ch_, x) * p_;
  }

  const Subspace& subspace() const { return k_; }
  const FockOperator& projector() const { return p_; }
  const KrausChannel& channel() const { return *ch_; }

 private:
  const KrausChannel* ch_;
  Subspace k_;
  FockOperator p_;
  Tolerances tol_;
};

inline RestrictedMap restrict(const KrausChannel& ch, const Subspace& k,
                              const Tolerances& tol = default_tolerances) {
  return RestrictedMap(ch, k, tol);
}

// Matrix of the restricted map in the basis of K:
// R(k*d + l, i*d + j) = <b_k| Phi(|b_i><b_j|) |b_l>.
inline Eigen::MatrixXcd restricted_matrix(const KrausChannel& ch, const Subspace& k) {
  detail::require_same_space(ch, k, "restricted_matrix");
  const auto d = static_cast<Eigen::Index>(k.size());
  const Eigen::MatrixXcd& b = k.basis();
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(d * d, d * d);
  if (ch.is_diagonal()) {
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        const FockOperator y = ch.schur_multiplier().cwiseProduct(b.col(i) * b.col(j).adjoint());
        const Eigen::MatrixXcd m = b.adjoint() * y * b;
        for (Eigen::Index kk = 0; kk < d; ++kk)
          for (Eigen::Index l = 0; l < d; ++l) r(kk * d + l, i * d + j) = m(kk, l);
      }
    return r;
  }
  for (const auto& e : ch.kraus_ops()) {
    const Eigen::MatrixXcd a = b.adjoint() * (e * b);
    for (Eigen::Index kk = 0; kk < d; ++kk)
      for (Eigen::Index l = 0; l < d; ++l)
        for (Eigen::Index i = 0; i < d; ++i)
          for (Eigen::Index j = 0; j < d; ++j) r(kk * d + l, i * d + j) += a(kk, i) * std::conj(a(l, j));
  }
  return r;
}

struct UnitalityResult {
  double defect = 0.0;
  bool holds = false;
};

// ||P_K Phi^*(P_K) P_K - P_K||. Vanishes iff the restriction P_K Phi(.) P_K is
// trace preserving on K, i.e. iff Psi is a subchannel.
inline UnitalityResult unitality_check(const KrausChannel& ch, const Subspace& k,
                                       const Tolerances& tol = default_tolerances) {
  detail::require_same_space(ch, k, "unitality_check");
  const FockOperator p = projector(k);
  const double defect = operator_norm(p * adjoint_apply(ch, p) * p - p);
  return {defect, defect <= tol.unitality};
}

// ||P_K Phi(P_K) P_K - P_K||: whether Psi maps the chaotic state P_K/d of K to
// itself.
inline UnitalityResult unital_subchannel_check(const KrausChannel& ch, const Subspace& k,
                                               const Tolerances& tol = default_tolerances) {
  detail::require_same_space(ch, k, "unital_subchannel_check");
  const FockOperator p = projector(k);
  const double defect = operator_norm(p * apply_channel(ch, p) * p - p);
  return {defect, defect <= tol.unitality};
}

struct HullReport {
  bool is_invariant_hull = false;
  // max over probes |b_i><b_j| of ||Phi(x) - P_K Phi(x) P_K||, operator norm
  double max_leakage = 0.0;
  // same, Hilbert-Schmidt norm
  double max_leakage_hs = 0.0;
  std::size_t probed_inputs = 0;
  // P_K Phi^*(P_K) P_K = P_K (Psi trace preserving)
  bool is_subchannel = false;
  double subchannel_defect = 0.0;
  // P_K Phi(P_K) P_K = P_K (Psi unital)
  bool is_unital_subchannel = false;
  double unitality_defect = 0.0;
  // Completeness defect of the truncated channel on the levels K touches;
  // verdicts are relative to the truncated channel.
  std::size_t probed_block = 0;
  double channel_defect = 0.0;
};

// Checks Im_K Phi inside sigma(K) on the operator basis |b_i><b_j| of span sigma(K);
// by linearity that covers every state on K.
inline HullReport invariant_hull_check(const KrausChannel& ch, const Subspace& k,
                                       const Tolerances& tol = default_tolerances) {
  detail::require_same_space(ch, k, "invariant_hull_check");
  HullReport r;
  r.probed_block = k.support_block();
  r.channel_defect = tp_defect(ch, r.probed_block);
  if (r.channel_defect > tol.hull_channel_defect)
    throw PrecisionError("invariant_hull_check: channel completeness defect " + std::to_string(r.channel_defect) +
                         " on the first " + std::to_string(r.probed_block) +
                         " levels; increase the Kraus truncation or dim");
  const FockOperator p = projector(k);
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < k.size(); ++j) {
      const FockOperator y = apply_channel(ch, outer(k.vector(i), k.vector(j)));
      const FockOperator leak = y - p * y * p;
      r.max_leakage = std::max(r.max_leakage, operator_norm(leak));
      r.max_leakage_hs = std::max(r.max_leakage_hs, hs_norm(leak));
      ++r.probed_inputs;
    }
  r.is_invariant_hull = r.max_leakage <= tol.hull_leakage;
  const UnitalityResult tp = unitality_check(ch, k, tol);
  r.subchannel_defect = tp.defect;
  r.is_subchannel = tp.holds;
  const UnitalityResult un = unital_subchannel_check(ch, k, tol);
  r.unitality_defect = un.defect;
  r.is_unital_subchannel = un.holds;
  return r;
}

// Hilbert-Schmidt orthonormal basis of {x : Phi(x) = x}, from the right
// singular vectors of (S - I) with singular value below `threshold`. The
// superoperator is not normal, so eigenvalue matching is avoided.
inline std::vector<FockOperator> fixed_point_space(const KrausChannel& ch,
                                                   double threshold = default_tolerances.fixed_point) {
  const Superoperator s = superoperator_of(ch);
  const auto n2 = s.matrix.rows();
  const Eigen::MatrixXcd m = s.matrix - Eigen::MatrixXcd::Identity(n2, n2);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  std::vector<FockOperator> out;
  for (Eigen::Index j = n2; j-- > 0;) {
    if (sv(j) >= threshold) break;
    Eigen::VectorXcd v = svd.matrixV().col(j);
    // Fix the global phase so the largest entry is real and positive.
    Eigen::Index at = 0;
    v.cwiseAbs().maxCoeff(&at);
    v *= std::conj(v(at)) / std::abs(v(at));
    out.push_back(unvec(v, ch.dim()));
  }
  return out;
}

}  // namespace subchan
