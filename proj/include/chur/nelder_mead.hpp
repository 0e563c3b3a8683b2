#ifndef CHUR_NELDER_MEAD_HPP
#define CHUR_NELDER_MEAD_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace chur {

struct SimplexOptions {
  std::size_t max_evaluations = 400;
  double f_tolerance = 1e-13; ///< stop when the simplex values span less
  double x_tolerance = 1e-10; ///< and the vertices lie this close together
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Minimizes f over R^n by the Nelder-Mead simplex method with standard
/// coefficients (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// The initial simplex is x0 plus one step along each axis.
template <class F>
SimplexResult nelder_mead(F &&f, std::vector<double> x0,
                          const std::vector<double> &steps,
                          const SimplexOptions &opt = {}) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> v(n + 1, x0);
  std::vector<double> fv(n + 1);
  SimplexResult r;
  auto eval = [&](const std::vector<double> &x) {
    ++r.evaluations;
    return f(x);
  };
  for (std::size_t i = 0; i < n; ++i)
    v[i + 1][i] += steps[i];
  for (std::size_t i = 0; i <= n && r.evaluations < opt.max_evaluations; ++i)
    fv[i] = eval(v[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto point = [&](double t, const std::vector<double> &worst,
                   std::vector<double> &out) {
    for (std::size_t k = 0; k < n; ++k)
      out[k] = centroid[k] + t * (worst[k] - centroid[k]);
  };

  while (r.evaluations < opt.max_evaluations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back();
    const std::size_t second = order[n > 0 ? n - 1 : 0];

    double spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        spread = std::max(spread, std::abs(v[i][k] - v[best][k]));
    if (fv[worst] - fv[best] <= opt.f_tolerance && spread <= opt.x_tolerance) {
      r.converged = true;
      break;
    }
    if (n == 0) {
      r.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < n; ++k)
          centroid[k] += v[i][k] / static_cast<double>(n);

    point(-1.0, v[worst], xr);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      point(-2.0, v[worst], xe);
      const double fe = r.evaluations < opt.max_evaluations ? eval(xe) : fr;
      if (fe < fr) {
        v[worst] = xe;
        fv[worst] = fe;
      } else {
        v[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      v[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    if (r.evaluations >= opt.max_evaluations)
      break;
    // outside contraction if the reflection improved on the worst, else inside
    const bool outside = fr < fv[worst];
    point(outside ? -0.5 : 0.5, v[worst], xc);
    const double fc = eval(xc);
    if (fc < std::min(fr, fv[worst])) {
      v[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n && r.evaluations < opt.max_evaluations; ++i) {
      if (i == best)
        continue;
      for (std::size_t k = 0; k < n; ++k)
        v[i][k] = v[best][k] + 0.5 * (v[i][k] - v[best][k]);
      fv[i] = eval(v[i]);
    }
  }

  const auto it = std::min_element(fv.begin(), fv.end());
  r.x = v[static_cast<std::size_t>(it - fv.begin())];
  r.value = *it;
  return r;
}

} // namespace chur

#endif // CHUR_NELDER_MEAD_HPP
