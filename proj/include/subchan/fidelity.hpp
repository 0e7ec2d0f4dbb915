#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "fock.hpp"
#include "quadrature.hpp"
#include "subchannel.hpp"
#include "tolerances.hpp"

namespace subchan {

// cos(theta/2)|psi_0> + e^{i phi} sin(theta/2)|psi_1> on a two-dimensional K.
struct EncodedQubit {
  EncodedQubit(Subspace k, double theta, double phi) : subspace(std::move(k)), theta(theta), phi(phi) {
    if (subspace.size() != 2)
      throw DimensionError("EncodedQubit: subspace has dimension " + std::to_string(subspace.size()) + ", need 2");
  }

  FockVector state() const {
    return std::cos(theta / 2) * subspace.vector(0) + std::polar(std::sin(theta / 2), phi) * subspace.vector(1);
  }
  FockOperator density() const {
    const FockVector v = state();
    return outer(v, v);
  }

  Subspace subspace;
  double theta = 0.0;
  double phi = 0.0;
};

namespace detail {

inline double clip_fidelity(double f, const Tolerances& tol) {
  if (f < 0.0 && f >= -tol.fidelity_clip) return 0.0;
  if (f > 1.0 && f <= 1.0 + tol.fidelity_clip) return 1.0;
  return f;
}

}  // namespace detail

// <psi| Phi(|psi><psi|) |psi>, evaluated as sum_i |<psi|E_i|psi>|^2 (or p^T G p
// with p_k = |psi_k|^2 for diagonal channels).
inline double pure_fidelity(const KrausChannel& ch, const FockVector& psi,
                            const Tolerances& tol = default_tolerances) {
  if (static_cast<std::size_t>(psi.size()) != ch.dim())
    throw DimensionError("pure_fidelity: state has " + std::to_string(psi.size()) + " levels, channel " +
                         std::to_string(ch.dim()));
  double f = 0.0;
  if (ch.is_diagonal()) {
    const Eigen::VectorXcd p = psi.cwiseAbs2().cast<Complex>();
    f = (p.transpose() * ch.schur_multiplier() * p).value().real();
  } else {
    for (const auto& e : ch.kraus_ops()) f += std::norm(psi.dot(e * psi));
  }
  return detail::clip_fidelity(f, tol);
}

inline double pure_fidelity(const KrausChannel& ch, const EncodedQubit& q,
                            const Tolerances& tol = default_tolerances) {
  return pure_fidelity(ch, q.state(), tol);
}

enum class FidelityMethod { closed_form, quadrature };

inline std::string_view to_string(FidelityMethod m) {
  return m == FidelityMethod::closed_form ? "closed-form" : "quadrature";
}

struct FidelityReport {
  double value = 0.0;
  FidelityMethod method = FidelityMethod::closed_form;
  // |closed - quadrature| when both were evaluated.
  std::optional<double> cross_check_gap;
  ChannelFamily family = ChannelFamily::custom;
  std::optional<double> parameter;
  std::size_t dim = 0;
  std::size_t kraus_terms = 0;
  // Completeness defect of the channel on the levels the encoding touches.
  double channel_defect = 0.0;
  std::size_t encoding_block = 0;
  std::size_t n_theta = 0;
  std::size_t n_phi = 0;
};

namespace detail {

inline FidelityReport blank_report(const KrausChannel& ch, const Subspace& k, FidelityMethod m) {
  FidelityReport r;
  r.method = m;
  r.family = ch.family();
  r.parameter = ch.parameter();
  r.dim = ch.dim();
  r.kraus_terms = ch.kraus_truncation();
  r.encoding_block = k.support_block();
  r.channel_defect = tp_defect(ch, r.encoding_block);
  return r;
}

inline void require_qubit(const KrausChannel& ch, const Subspace& k, const char* who) {
  detail::require_same_space(ch, k, who);
  if (k.size() != 2)
    throw DimensionError(std::string(who) + ": encoding must be two-dimensional, got " + std::to_string(k.size()));
}

}  // namespace detail

// Bloch-sphere weights for f = sum c_i conj(c_j) conj(c_k) c_l T[i,j,k,l] with
// c = (cos(theta/2), e^{i phi} sin(theta/2)). Only monomials with i + l = j + k
// survive the phi average; their theta averages are <cos^4> = <sin^4> = 1/3 and
// <cos^2 sin^2> = 1/6. Index is 8i + 4j + 2k + l.
inline constexpr std::array<double, 16> bloch_moment_weights = {
    1.0 / 3, 0.0,     0.0,     1.0 / 6,  // 0000 0001 0010 0011
    0.0,     1.0 / 6, 0.0,     0.0,      // 0100 0101 0110 0111
    0.0,     0.0,     1.0 / 6, 0.0,      // 1000 1001 1010 1011
    1.0 / 6, 0.0,     0.0,     1.0 / 3,  // 1100 1101 1110 1111
};

// T[i,j,k,l] = <psi_k| Phi(|psi_i><psi_j|) |psi_l> contracted with the exact
// Bloch-sphere moments.
inline FidelityReport average_fidelity_closed(const KrausChannel& ch, const Subspace& k) {
  detail::require_qubit(ch, k, "average_fidelity_closed");
  const Eigen::MatrixXcd r = restricted_matrix(ch, k);
  Complex acc = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int kk = 0; kk < 2; ++kk)
        for (int l = 0; l < 2; ++l) {
          const double w = bloch_moment_weights[static_cast<std::size_t>(8 * i + 4 * j + 2 * kk + l)];
          if (w != 0.0) acc += w * r(kk * 2 + l, i * 2 + j);
        }
  FidelityReport rep = detail::blank_report(ch, k, FidelityMethod::closed_form);
  rep.value = detail::clip_fidelity(acc.real(), default_tolerances);
  return rep;
}

inline constexpr std::size_t min_quadrature_nodes = 8;

// (1/4pi) int dphi int dtheta sin(theta) f(theta, phi) with Gauss-Legendre in
// u = cos(theta) and the periodic trapezoid rule in phi. The integrand is a
// trigonometric polynomial of degree <= 4, so the default 16 x 16 grid is exact
// up to roundoff.
inline FidelityReport average_fidelity_quadrature(const KrausChannel& ch, const Subspace& k,
                                                  std::size_t n_theta = 16, std::size_t n_phi = 16) {
  detail::require_qubit(ch, k, "average_fidelity_quadrature");
  if (n_theta < min_quadrature_nodes || n_phi < min_quadrature_nodes)
    throw DomainError("average_fidelity_quadrature: need at least " + std::to_string(min_quadrature_nodes) +
                      " nodes per axis");
  const QuadratureRule rule = gauss_legendre(n_theta);
  const FockVector b0 = k.vector(0);
  const FockVector b1 = k.vector(1);
  double total = 0.0;
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double theta = std::acos(rule.nodes[i]);
    const double a = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    double ring = 0.0;
    for (std::size_t j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_phi);
      const FockVector psi = a * b0 + std::polar(s, phi) * b1;
      ring += pure_fidelity(ch, psi);
    }
    total += rule.weights[i] * ring / static_cast<double>(n_phi);
  }
  FidelityReport rep = detail::blank_report(ch, k, FidelityMethod::quadrature);
  rep.value = detail::clip_fidelity(total / 2.0, default_tolerances);
  rep.n_theta = n_theta;
  rep.n_phi = n_phi;
  return rep;
}

// Closed form with the quadrature value recorded as a cross-check.
inline FidelityReport average_fidelity(const KrausChannel& ch, const Subspace& k, std::size_t n_theta = 16,
                                       std::size_t n_phi = 16) {
  FidelityReport rep = average_fidelity_closed(ch, k);
  const FidelityReport q = average_fidelity_quadrature(ch, k, n_theta, n_phi);
  rep.cross_check_gap = std::abs(rep.value - q.value);
  rep.n_theta = n_theta;
  rep.n_phi = n_phi;
  return rep;
}

// Known closed-form averages, kept as test oracles.
struct PhaseDampingPair {
  double eta;
  std::size_t k;
  std::size_t s;
};
// Amplitude damping with the qubit in span{|0>, |1>}.
struct AmplitudeDampingLowest {
  double eta;
};
using ReferenceCase = std::variant<PhaseDampingPair, AmplitudeDampingLowest>;

// 2/3 + eta^{(k-s)^2}/3 for phase damping on span{|k>,|s>};
// 1/2 + eta/6 + sqrt(eta)/3 for amplitude damping on span{|0>,|1>}.
inline double reference_formula(const ReferenceCase& c) {
  struct Visitor {
    double operator()(const PhaseDampingPair& p) const {
      if (p.k == p.s) throw DomainError("reference_formula: phase-damping pair needs k != s");
      return 2.0 / 3.0 + phase_damping_closed_value(p) / 3.0;
    }
    double operator()(const AmplitudeDampingLowest& a) const {
      if (!(a.eta >= 0.0 && a.eta <= 1.0)) throw DomainError("reference_formula: eta outside [0, 1]");
      return 0.5 + a.eta / 6.0 + std::sqrt(a.eta) / 3.0;
    }
    static double phase_damping_closed_value(const PhaseDampingPair& p) {
      if (!(p.eta > 0.0 && p.eta <= 1.0)) throw DomainError("reference_formula: eta outside (0, 1]");
      const double d = static_cast<double>(p.k) - static_cast<double>(p.s);
      return std::pow(p.eta, d * d);
    }
  };
  return std::visit(Visitor{}, c);
}

// Family-tagged entry point; only the two families above have a reference value.
inline double reference_formula(ChannelFamily family, double eta, std::size_t k, std::size_t s) {
  switch (family) {
    case ChannelFamily::phase_damping: return reference_formula(PhaseDampingPair{eta, k, s});
    case ChannelFamily::amplitude_damping:
      if (!((k == 0 && s == 1) || (k == 1 && s == 0)))
        throw DomainError("reference_formula: amplitude-damping reference exists only for span{|0>,|1>}");
      return reference_formula(AmplitudeDampingLowest{eta});
    default: break;
  }
  throw DomainError("reference_formula: no reference value for family " + std::string(to_string(family)));
}

// Transcription of the printed amplitude-damping fidelity series
//
//   F = 1/6 sum_q sum_{n,m>=q} sqrt(C(n,q) C(m,q)) eta^{(n+m-2q)/2} (1-eta)^{e(q)}
//       [ c_n c*_m (d_{m-q} d*_{n-q} + 2 c_{m-q} c*_{n-q})
//       + d_n d*_m (c_{m-q} c*_{n-q} + 2 d_{m-q} d*_{n-q})
//       + d_n d*_{n-q} c*_m c_{m-q} + c_n c*_{n-q} d*_m d_{m-q} ]
//
// The printed version has e(q) = q/2 and c_n c_m (no conjugate) in the first
// product. Expanding T[i,j,k,l] with the Kraus operators gives e(q) = q, since
// each of the two Kraus factors carries (1-eta)^{q/2}, and the conjugate on
// c_m. Only e(q) = q agrees with direct integration of <psi|Phi(rho)|psi>; the
// printed exponent is off by (1-eta)^{q/2} for every q >= 1.
struct SeriesVariant {
  bool halved_loss_exponent = false;  // e(q) = q/2 as printed
  bool conjugate_c_m = true;          // c_n c*_m rather than the printed c_n c_m
};

inline constexpr SeriesVariant corrected_series{false, true};
inline constexpr SeriesVariant printed_series{true, false};

inline double amplitude_damping_fidelity_series(double eta, std::span<const Complex> c, std::span<const Complex> d,
                                                SeriesVariant variant = corrected_series) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("amplitude_damping_fidelity_series: eta outside [0, 1]");
  const std::size_t len = std::max(c.size(), d.size());
  auto at = [](std::span<const Complex> v, std::size_t i) { return i < v.size() ? v[i] : Complex(0.0); };
  Complex total = 0.0;
  for (std::size_t q = 0; q < len; ++q) {
    const double loss = std::pow(1.0 - eta, variant.halved_loss_exponent ? 0.5 * static_cast<double>(q)
                                                                         : static_cast<double>(q));
    for (std::size_t n = q; n < len; ++n)
      for (std::size_t m = q; m < len; ++m) {
        const double w = std::exp(0.5 * (log_binomial(n, q) + log_binomial(m, q))) *
                         std::pow(eta, 0.5 * static_cast<double>(n + m - 2 * q)) * loss;
        if (w == 0.0) continue;
        const Complex cn = at(c, n), cm = at(c, m), dn = at(d, n), dm = at(d, m);
        const Complex cnq = at(c, n - q), cmq = at(c, m - q), dnq = at(d, n - q), dmq = at(d, m - q);
        const Complex cm_first = variant.conjugate_c_m ? std::conj(cm) : cm;
        const Complex bracket = cn * cm_first * (dmq * std::conj(dnq) + 2.0 * cmq * std::conj(cnq)) +
                                dn * std::conj(dm) * (cmq * std::conj(cnq) + 2.0 * dmq * std::conj(dnq)) +
                                dn * std::conj(dnq) * std::conj(cm) * cmq + cn * std::conj(cnq) * std::conj(dm) * dmq;
        total += w * bracket;
      }
  }
  return total.real() / 6.0;
}

}  // namespace subchan
