#pragma once

namespace subchan {

// Every numeric threshold used by the library. Functions that test against a
// threshold take a `Tolerances` argument defaulted to these values.
struct Tolerances {
  // Exact-arithmetic structure: norms, hermiticity, idempotency.
  double structural = 1e-12;
  // Anything that goes through an eigen- or singular-value solver.
  double spectral = 1e-10;
  // Orthonormality of user-supplied bases and encodings.
  double basis = 1e-10;
  // Kraus tail truncation target for infinite families.
  double kraus_tail = 1e-12;
  // Leakage above which a subspace is not an invariant hull.
  double hull_leakage = 1e-9;
  // Defect above which P_K Phi*(P_K) P_K != P_K.
  double unitality = 1e-9;
  // Largest unitality defect on the probed block tolerated before a hull
  // verdict is refused.
  double hull_channel_defect = 1e-8;
  // Singular-value threshold for fixed-point extraction.
  double fixed_point = 1e-8;
  // Truncation deficit allowed for coherent states in closed-form actions.
  double coherent_deficit = 1e-8;
  // Snap to [0,1] when a fidelity lands this close outside it.
  double fidelity_clip = 1e-10;
};

inline constexpr Tolerances default_tolerances{};

}  // namespace subchan
