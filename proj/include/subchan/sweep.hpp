#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "fidelity.hpp"
#include "subchannel.hpp"

namespace subchan {

struct SweepRow {
  double eta = 0.0;
  double fidelity_closed = 0.0;
  double fidelity_quadrature = 0.0;
  double gap = 0.0;
  std::string encoding;
};

// `steps` evenly spaced points from start to end inclusive. A single point is
// allowed only when start == end.
inline std::vector<double> eta_grid(double start, double end, std::size_t steps) {
  if (!(start >= 0.0 && start <= end && end <= 1.0))
    throw DomainError("eta_grid: need 0 <= start <= end <= 1");
  if (steps == 1 && start == end) return {start};
  if (steps < 2) throw DomainError("eta_grid: need at least 2 steps");
  std::vector<double> g(steps);
  for (std::size_t i = 0; i < steps; ++i)
    g[i] = i + 1 == steps ? end
                          : start + (end - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
  return g;
}

inline std::vector<SweepRow> run_sweep(const std::function<KrausChannel(double)>& make_channel,
                                       const std::vector<double>& grid, const Subspace& encoding,
                                       const std::string& label, std::size_t n_theta = 16, std::size_t n_phi = 16) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double eta : grid) {
    const KrausChannel ch = make_channel(eta);
    const double closed = average_fidelity_closed(ch, encoding).value;
    const double quad = average_fidelity_quadrature(ch, encoding, n_theta, n_phi).value;
    rows.push_back({eta, closed, quad, std::abs(closed - quad), label});
  }
  return rows;
}

// 12 significant digits, locale independent.
inline std::string format_csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline constexpr const char* sweep_csv_header = "eta,fidelity_closed,fidelity_quadrature,gap,encoding";

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << sweep_csv_header << '\n';
  for (const auto& r : rows)
    out << format_csv_number(r.eta) << ',' << format_csv_number(r.fidelity_closed) << ','
        << format_csv_number(r.fidelity_quadrature) << ',' << format_csv_number(r.gap) << ',' << r.encoding << '\n';
}

}  // namespace subchan
