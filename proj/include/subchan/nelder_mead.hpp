#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace subchan {

struct NelderMeadOptions {
  double initial_step = 0.3;
  // Stop when max f - min f over the simplex falls below this.
  double f_spread = 1e-10;
  std::size_t max_evaluations = 2000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

// Downhill simplex minimization with the standard coefficients
// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> start, const NelderMeadOptions& opt = {}) {
  const std::size_t n = start.size();
  NelderMeadResult res;
  std::vector<std::vector<double>> pts(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += opt.initial_step;
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);
  res.evaluations = n + 1;

  std::vector<std::size_t> order(n + 1);
  auto point = [&](const std::vector<double>& centroid, const std::vector<double>& worst, double t) {
    std::vector<double> p(n);
    for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (worst[j] - centroid[j]);
    return p;
  };

  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n > 0 ? n - 1 : 0];
    if (vals[worst] - vals[best] < opt.f_spread) {
      res.converged = true;
      break;
    }
    if (res.evaluations >= opt.max_evaluations || n == 0) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);

    const auto reflected = point(centroid, pts[worst], -1.0);
    const double fr = f(reflected);
    ++res.evaluations;
    if (fr < vals[best]) {
      const auto expanded = point(centroid, pts[worst], -2.0);
      const double fe = f(expanded);
      ++res.evaluations;
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const auto contracted = point(centroid, pts[worst], outside ? -0.5 : 0.5);
    const double fc = f(contracted);
    ++res.evaluations;
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
      vals[i] = f(pts[i]);
      ++res.evaluations;
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  res.x = pts[static_cast<std::size_t>(it - vals.begin())];
  res.fx = *it;
  return res;
}

}  // namespace subchan
