#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace ffkit {

struct NelderMeadOptions {
  std::size_t max_evals = 1000;
  double f_target = 0.0;     // stop once the best value is at or below this
  double x_tol = 1e-10;      // simplex diameter (relative) at which the simplex is re-expanded
  double initial_step = 0.1;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t evals = 0;
};

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). When the simplex collapses before the budget is spent it is
/// rebuilt around the best vertex with the initial step sizes; the run stops
/// when a rebuild fails to improve the best value by at least 1%.
template <class Fn>
NelderMeadResult nelder_mead(Fn&& fn, std::vector<double> x0, const std::vector<double>& steps,
                             const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return fn(x);
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  auto build = [&](const std::vector<double>& base) {
    simplex.assign(n + 1, base);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += steps[i];
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);
  };
  build(x0);

  double f_at_rebuild = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto point = [&](double t, const std::vector<double>& worst, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = centroid[i] + t * (worst[i] - centroid[i]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (fv[best] <= opts.f_target || evals >= opts.max_evals) break;

    double diameter = 0.0, scale = 0.0;
    for (std::size_t v = 0; v <= n; ++v)
      for (std::size_t i = 0; i < n; ++i) {
        diameter = std::max(diameter, std::abs(simplex[v][i] - simplex[best][i]));
        scale = std::max(scale, std::abs(simplex[best][i]));
      }
    if (diameter <= opts.x_tol * std::max(1.0, scale)) {
      if (evals + n + 1 > opts.max_evals) break;
      if (fv[best] >= 0.99 * f_at_rebuild) break;
      f_at_rebuild = fv[best];
      const std::vector<double> keep = simplex[best];
      build(keep);
      continue;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v <= n; ++v)
      if (v != worst)
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v][i] / static_cast<double>(n);

    point(-1.0, simplex[worst], xr);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      point(-2.0, simplex[worst], xe);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    point(outside ? -0.5 : 0.5, simplex[worst], xc);
    const double fc = eval(xc);
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t v = 0; v <= n; ++v) {
      if (v == best) continue;
      for (std::size_t i = 0; i < n; ++i) simplex[v][i] = simplex[best][i] + 0.5 * (simplex[v][i] - simplex[best][i]);
      fv[v] = eval(simplex[v]);
    }
  }
  const auto it = std::min_element(fv.begin(), fv.end());
  const auto b = static_cast<std::size_t>(it - fv.begin());
  return {simplex[b], fv[b], evals};
}

}  // namespace ffkit
