#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "fidelity.hpp"
#include "nelder_mead.hpp"
#include "subchannel.hpp"
#include "tolerances.hpp"

namespace subchan {

// Two-dimensional subspace spanned by sum_n c_n |n> and sum_n d_n |n>.
// Coefficient lists shorter than dim are zero-padded.
inline Subspace encoding_from_coefficients(std::span<const Complex> c, std::span<const Complex> d, std::size_t dim,
                                           const Tolerances& tol = default_tolerances) {
  if (c.size() > dim || d.size() > dim)
    throw DimensionError("encoding_from_coefficients: more coefficients than the " + std::to_string(dim) +
                         "-level space holds");
  const auto n = static_cast<Eigen::Index>(dim);
  FockVector psi0 = FockVector::Zero(n), psi1 = FockVector::Zero(n);
  for (std::size_t i = 0; i < c.size(); ++i) psi0(static_cast<Eigen::Index>(i)) = c[i];
  for (std::size_t i = 0; i < d.size(); ++i) psi1(static_cast<Eigen::Index>(i)) = d[i];
  for (const FockVector* v : {&psi0, &psi1}) {
    const double defect = std::abs(v->squaredNorm() - 1.0);
    if (defect > tol.basis)
      throw NormalizationError("encoding_from_coefficients: norm defect " + std::to_string(defect), defect);
  }
  const double overlap = std::abs(psi0.dot(psi1));
  if (overlap > tol.basis)
    throw OrthogonalityError("encoding_from_coefficients: overlap " + std::to_string(overlap), overlap);
  return Subspace::from_vectors({psi0, psi1}, tol);
}

// Unit vector in R^{m} from m-1 angles, last coordinate first:
// v[m-1] = cos a_0, the rest sin a_0 times the vector from a_1.. . For m = 3
// this is (sin a cos b, sin a sin b, cos a).
inline std::vector<double> hyperspherical(std::span<const double> angles) {
  const std::size_t m = angles.size() + 1;
  std::vector<double> v(m, 0.0);
  double scale = 1.0;
  std::size_t top = m - 1;
  for (std::size_t i = 0; i + 1 < angles.size(); ++i, --top) {
    v[top] = scale * std::cos(angles[i]);
    scale *= std::sin(angles[i]);
  }
  if (angles.empty()) {
    v[0] = 1.0;
    return v;
  }
  v[1] = scale * std::sin(angles.back());
  v[0] = scale * std::cos(angles.back());
  return v;
}

// |psi_0> = sin a cos b|0> + sin a sin b|1> + cos a|2>, |psi_1> likewise with
// (g, dl). Real amplitudes; the pair must satisfy <psi_0|psi_1> = 0.
inline Subspace three_level_encoding(double alpha, double beta, double gamma, double delta, std::size_t dim = 3,
                                     const Tolerances& tol = default_tolerances) {
  if (dim < 3) throw DimensionError("three_level_encoding: needs dim >= 3");
  const double a[] = {alpha, beta};
  const double b[] = {gamma, delta};
  const auto v0 = hyperspherical(a);
  const auto v1 = hyperspherical(b);
  const double residual = v0[0] * v1[0] + v0[1] * v1[1] + v0[2] * v1[2];
  if (std::abs(residual) > tol.basis)
    throw ConstraintError("three_level_encoding: orthogonality residual " + std::to_string(residual), residual);
  const auto n = static_cast<Eigen::Index>(dim);
  FockVector psi0 = FockVector::Zero(n), psi1 = FockVector::Zero(n);
  for (Eigen::Index i = 0; i < 3; ++i) {
    psi0(i) = v0[static_cast<std::size_t>(i)];
    psi1(i) = v1[static_cast<std::size_t>(i)];
  }
  return Subspace::from_vectors({psi0, psi1}, tol);
}

// Real two-frame ansatz on a set of Fock levels: each basis vector is a
// hyperspherical unit vector on those levels, 2(|levels| - 1) angles total.
struct EncodingAnsatz {
  std::vector<std::size_t> levels;
  std::vector<double> params;
  // <psi_0|psi_1> before Gram-Schmidt.
  double constraint_residual = 0.0;

  std::size_t angles_per_vector() const { return levels.size() - 1; }

  // Gram-Schmidt projected encoding in a dim-level space; throws
  // ConstraintError when the frames are (numerically) parallel.
  Subspace encoding(std::size_t dim) const {
    const std::size_t h = angles_per_vector();
    const auto v0 = hyperspherical(std::span<const double>(params.data(), h));
    const auto v1 = hyperspherical(std::span<const double>(params.data() + h, h));
    double overlap = 0.0;
    for (std::size_t i = 0; i < v0.size(); ++i) overlap += v0[i] * v1[i];
    std::vector<double> w(v1.size());
    double norm2 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = v1[i] - overlap * v0[i];
      norm2 += w[i] * w[i];
    }
    if (norm2 < 1e-12) throw ConstraintError("EncodingAnsatz: frames are parallel", overlap);
    const double inv = 1.0 / std::sqrt(norm2);
    const auto n = static_cast<Eigen::Index>(dim);
    FockVector psi0 = FockVector::Zero(n), psi1 = FockVector::Zero(n);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      psi0(static_cast<Eigen::Index>(levels[i])) = v0[i];
      psi1(static_cast<Eigen::Index>(levels[i])) = w[i] * inv;
    }
    return Subspace::from_vectors({psi0, psi1});
  }

  double overlap() const {
    const std::size_t h = angles_per_vector();
    const auto v0 = hyperspherical(std::span<const double>(params.data(), h));
    const auto v1 = hyperspherical(std::span<const double>(params.data() + h, h));
    double o = 0.0;
    for (std::size_t i = 0; i < v0.size(); ++i) o += v0[i] * v1[i];
    return o;
  }
};

struct OptimizerConfig {
  NelderMeadOptions simplex{0.3, 1e-10, 2000};
  double penalty_weight = 1e3;
  // Simplex re-launches from the incumbent after convergence; stops early
  // once a re-launch gains less than f_spread.
  std::size_t polish_rounds = 3;
};

struct RestartRecord {
  std::vector<double> start;
  std::vector<double> params;
  double fidelity = 0.0;
  std::size_t evaluations = 0;
  bool feasible = false;
};

struct OptimizationResult {
  double best_fidelity = 0.0;
  std::vector<double> best_params;
  Subspace best_encoding;
  std::size_t best_restart = 0;
  std::size_t restarts_run = 0;
  std::vector<RestartRecord> history;
};

inline constexpr std::size_t max_ansatz_levels = 6;

// Multi-start simplex search for the encoding of maximal average fidelity over
// the real two-frame ansatz on `levels`. Search objective:
// F(Gram-Schmidt(psi_0, psi_1)) - penalty * <psi_0|psi_1>^2; reported values
// are F of the projected (feasible) encoding. Deterministic for a given seed.
inline OptimizationResult optimize_encoding(const KrausChannel& ch, std::span<const std::size_t> levels,
                                            std::size_t restarts, std::uint64_t seed,
                                            const OptimizerConfig& cfg = {}) {
  if (levels.size() < 2 || levels.size() > max_ansatz_levels)
    throw DomainError("optimize_encoding: need between 2 and " + std::to_string(max_ansatz_levels) + " levels");
  if (restarts == 0) throw DomainError("optimize_encoding: restarts must be positive");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] >= ch.dim())
      throw RangeError("optimize_encoding: level " + std::to_string(levels[i]) + " outside channel dim");
    for (std::size_t j = 0; j < i; ++j)
      if (levels[i] == levels[j]) throw DomainError("optimize_encoding: repeated level");
  }

  EncodingAnsatz ansatz{{levels.begin(), levels.end()}, {}, 0.0};
  const std::size_t nparams = 2 * ansatz.angles_per_vector();

  auto feasible_fidelity = [&](const std::vector<double>& p, double& out) {
    EncodingAnsatz a = ansatz;
    a.params = p;
    try {
      out = average_fidelity_closed(ch, a.encoding(ch.dim())).value;
      return true;
    } catch (const ConstraintError&) {
      return false;
    }
  };
  auto objective = [&](const std::vector<double>& p) {
    EncodingAnsatz a = ansatz;
    a.params = p;
    const double o = a.overlap();
    double f = 0.0;
    if (!feasible_fidelity(p, f)) return 1.0 + cfg.penalty_weight * o * o;
    return -f + cfg.penalty_weight * o * o;
  };

  Rng rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<std::vector<double>> starts(restarts, std::vector<double>(nparams));
  for (auto& s : starts)
    for (auto& v : s) v = angle(rng);

  std::vector<RestartRecord> history;
  history.reserve(restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    RestartRecord rec;
    rec.start = starts[r];
    NelderMeadResult nm = nelder_mead(objective, starts[r], cfg.simplex);
    rec.evaluations = nm.evaluations;
    for (std::size_t round = 0; round < cfg.polish_rounds; ++round) {
      NelderMeadResult again = nelder_mead(objective, nm.x, cfg.simplex);
      rec.evaluations += again.evaluations;
      const bool gained = again.fx < nm.fx - cfg.simplex.f_spread;
      if (again.fx < nm.fx) nm = std::move(again);
      if (!gained) break;
    }
    rec.params = nm.x;
    rec.feasible = feasible_fidelity(nm.x, rec.fidelity);
    history.push_back(std::move(rec));
  }

  std::size_t best = history.size();
  for (std::size_t r = 0; r < history.size(); ++r)
    if (history[r].feasible && (best == history.size() || history[r].fidelity > history[best].fidelity)) best = r;
  if (best == history.size())
    throw OptimizationError("optimize_encoding: all " + std::to_string(restarts) +
                            " restarts ended on parallel frames; try more restarts or another seed");

  EncodingAnsatz winner = ansatz;
  winner.params = history[best].params;
  winner.constraint_residual = winner.overlap();
  return OptimizationResult{history[best].fidelity, winner.params, winner.encoding(ch.dim()), best, restarts,
                            std::move(history)};
}

inline OptimizationResult optimize_encoding(const KrausChannel& ch, std::initializer_list<std::size_t> levels,
                                            std::size_t restarts, std::uint64_t seed,
                                            const OptimizerConfig& cfg = {}) {
  return optimize_encoding(ch, std::span<const std::size_t>(levels.begin(), levels.size()), restarts, seed, cfg);
}

struct PairFidelity {
  std::size_t k = 0;
  std::size_t s = 0;
  double fidelity = 0.0;
};

// Average fidelity of span{|k>,|s>} for every k < s <= max_level, best first,
// ties broken by (k, s).
inline std::vector<PairFidelity> contiguous_pair_sweep(const KrausChannel& ch, std::size_t max_level) {
  if (max_level >= ch.dim())
    throw RangeError("contiguous_pair_sweep: max_level " + std::to_string(max_level) + " outside channel dim");
  std::vector<PairFidelity> table;
  for (std::size_t k = 0; k <= max_level; ++k)
    for (std::size_t s = k + 1; s <= max_level; ++s)
      table.push_back({k, s, average_fidelity_closed(ch, Subspace::from_levels({k, s}, ch.dim())).value});
  std::stable_sort(table.begin(), table.end(), [](const PairFidelity& a, const PairFidelity& b) {
    if (a.fidelity != b.fidelity) return a.fidelity > b.fidelity;
    return a.k != b.k ? a.k < b.k : a.s < b.s;
  });
  return table;
}

// Leading entries within `window` of the best value.
inline std::vector<PairFidelity> top_ties(const std::vector<PairFidelity>& table, double window = 1e-9) {
  std::vector<PairFidelity> out;
  for (const auto& row : table) {
    if (!out.empty() && row.fidelity < table.front().fidelity - window) break;
    out.push_back(row);
  }
  return out;
}

}  // namespace subchan
