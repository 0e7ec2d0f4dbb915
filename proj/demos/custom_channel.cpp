// Loads a channel from a Kraus file (or stdin) and reports what it preserves.
//
//   demo_custom_channel data/qubit_damping.kraus

#include <cstdio>
#include <iostream>

#include "subchan.hpp"

int main(int argc, char** argv) {
  using namespace subchan;
  try {
    const KrausChannel ch = argc > 1 ? load_channel(argv[1]) : read_channel(std::cin);
    const VerificationReport v = verify_channel(ch, ch.dim());
    std::printf("dim %zu, %zu Kraus operators, trace defect %.2e, min eigenvalue %.2e\n", ch.dim(),
                ch.kraus_truncation(), v.tp_defect, v.min_output_eigenvalue);

    if (ch.dim() <= 8) {
      const auto fp = fixed_point_space(ch);
      std::printf("fixed-point space: %zu\n", fp.size());
    }
    if (ch.dim() >= 2) {
      const auto table = contiguous_pair_sweep(ch, std::min<std::size_t>(ch.dim() - 1, 5));
      for (const auto& row : top_ties(table)) {
        const HullReport h = invariant_hull_check(ch, Subspace::from_levels({row.k, row.s}, ch.dim()));
        std::printf("pair (%zu,%zu): fidelity %.9f, %s\n", row.k, row.s, row.fidelity,
                    h.is_invariant_hull ? "invariant hull" : "leaks");
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
