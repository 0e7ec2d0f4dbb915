// Prints average fidelity against eta for the best pairs of the two damping
// channels, next to a pair that wastes the protection.

#include <cstdio>

#include "subchan.hpp"

int main() {
  using namespace subchan;
  constexpr std::size_t dim = 24;
  const Subspace low = Subspace::from_levels({0, 1}, dim);
  const Subspace far = Subspace::from_levels({0, 3}, dim);

  std::printf("%6s %12s %12s %12s %12s\n", "eta", "ad{0,1}", "ad{0,3}", "pd{0,1}", "pd{0,3}");
  for (double eta : eta_grid(0.1, 1.0, 10)) {
    const KrausChannel ad = amplitude_damping(eta, dim);
    const KrausChannel pd = phase_damping(eta, dim);
    std::printf("%6.2f %12.9f %12.9f %12.9f %12.9f\n", eta, average_fidelity_closed(ad, low).value,
                average_fidelity_closed(ad, far).value, average_fidelity_closed(pd, low).value,
                average_fidelity_closed(pd, far).value);
  }
}
