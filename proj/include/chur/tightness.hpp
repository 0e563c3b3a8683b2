#ifndef CHUR_TIGHTNESS_HPP
#define CHUR_TIGHTNESS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "charfunc.hpp"
#include "chur_core.hpp"
#include "errors.hpp"
#include "nelder_mead.hpp"
#include "parallel.hpp"
#include "states.hpp"

namespace chur {

enum class StateFamily { gaussian, comb };

inline const char *to_string(StateFamily f) {
  return f == StateFamily::gaussian ? "gaussian" : "comb";
}

/// How (lambda_x, lambda_p) are chosen for a given gamma. With r the ratio,
/// lambda_x = r s and lambda_p = s / r where s = sqrt(|gamma| / hbar), and
/// lambda_x carries the sign of gamma. `search` adds log r to the optimized
/// parameters.
enum class LambdaSplit { symmetric, fixed_ratio, search };

struct ParamBound {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
};

struct TightnessQuery {
  double gamma = 1.0;
  StateFamily family = StateFamily::gaussian;
  GridSpec grid;
  /// Empty means the family defaults for the grid (default_bounds).
  std::vector<ParamBound> bounds;
  LambdaSplit split = LambdaSplit::symmetric;
  double ratio = 1.0;            ///< fixed_ratio only
  double ratio_range = 16.0;     ///< search: r in [1/range, range]
  std::size_t max_evaluations = 2000;
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  unsigned workers = default_workers();
  double bound_scale = 1.0;      ///< harness self-test hook
};

struct TightnessResult {
  double gamma = 0.0;
  StateFamily family = StateFamily::gaussian;
  double best_lambda_big = 0.0;
  double bound = 2.0;
  double gap = 2.0;
  double lambda_x = 0.0;
  double lambda_p = 0.0;
  std::vector<std::pair<std::string, double>> best_params;
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
  double max_iterate_lambda = 0.0; ///< largest Lambda over every evaluated point
  std::size_t iterate_violations = 0; ///< points with Lambda > B + 1e-9

  friend bool operator==(const TightnessResult &, const TightnessResult &) = default;
};

/// Comb grid large enough for periods of a few units and envelopes of ~20.
inline GridSpec default_comb_grid() { return GridSpec{65536, 400.0, 1.0, 0.0}; }

inline std::vector<ParamBound> default_bounds(StateFamily family,
                                              const GridSpec &g) {
  const double dx = g.dx();
  if (family == StateFamily::gaussian) {
    // position and momentum widths both well inside the grid
    const double hi = (0.5 * g.length - std::abs(g.center)) / 8.0 * 0.99;
    return {{"sigma_x", 4.0 * dx, hi}};
  }
  const double w_lo = 2.05 * dx;
  const double envelope_hi = std::max(1.0, g.length / 20.0);
  return {{"period", 0.25, g.length / 40.0},
          {"tooth_sigma", w_lo, std::max(2.0 * w_lo, 0.5)},
          {"envelope_sigma", std::min(1.0, envelope_hi), envelope_hi}};
}

/// (lambda_x, lambda_p) with hbar lambda_x lambda_p = gamma.
inline std::pair<double, double> split_lambda(double gamma, double hbar,
                                              double ratio) {
  const double s = std::sqrt(std::abs(gamma) / hbar);
  const double lx = std::copysign(ratio * s, gamma);
  return {lx, gamma == 0.0 ? 0.0 : gamma / (hbar * lx)};
}

/// Half-count of comb teeth: enough to cover four envelope widths, capped by
/// the grid geometry.
inline int comb_half_teeth(const CombSpec &c, const GridSpec &g) {
  const double by_length = ((g.length - 8.0 * c.envelope_sigma) / c.period - 1.0) / 2.0;
  const double by_center =
      (0.5 * g.length - std::abs(g.center) - 8.0 * c.tooth_sigma) / c.period;
  const double wanted = std::ceil(4.0 * c.envelope_sigma / c.period);
  const double k = std::min({wanted, std::floor(by_length - 1e-9),
                             std::floor(by_center - 1e-9)});
  return static_cast<int>(std::max(0.0, k));
}

namespace detail {

struct TightnessObjective {
  const TightnessQuery &q;
  std::vector<ParamBound> bounds;
  std::size_t family_dims = 0;
  double target_bound = 2.0;

  // per-restart statistics
  double max_lambda = 0.0;
  std::size_t violations = 0;

  /// Maps optimizer coordinates (logs of the parameters) into the box.
  std::vector<double> params(const std::vector<double> &u) const {
    std::vector<double> p(u.size());
    for (std::size_t k = 0; k < u.size(); ++k)
      p[k] = std::exp(std::clamp(u[k], std::log(bounds[k].lo), std::log(bounds[k].hi)));
    return p;
  }

  double ratio_of(const std::vector<double> &p) const {
    switch (q.split) {
    case LambdaSplit::symmetric:
      return 1.0;
    case LambdaSplit::fixed_ratio:
      return q.ratio;
    case LambdaSplit::search:
      return p.back();
    }
    return 1.0;
  }

  /// Lambda of the family member at parameters p; nullopt if the member
  /// cannot be built on the grid.
  std::optional<double> lambda_big(const std::vector<double> &p) const {
    const auto [lx, lp] = split_lambda(q.gamma, q.grid.hbar, ratio_of(p));
    try {
      StateVector psi = [&] {
        if (q.family == StateFamily::gaussian)
          return make_gaussian({p[0], 0.0, 0.0}, q.grid);
        CombSpec c{p[0], p[1], 0, p[2]};
        c.half_teeth = comb_half_teeth(c, q.grid);
        return make_comb(c, q.grid);
      }();
      return std::norm(char_position(psi, lx)) + std::norm(char_momentum(psi, lp));
    } catch (const GridTooSmall &) {
      return std::nullopt;
    } catch (const TeethUnresolved &) {
      return std::nullopt;
    }
  }

  double operator()(const std::vector<double> &u) {
    const auto v = lambda_big(params(u));
    if (!v)
      return 0.0; // unbuildable members score as the worst possible Lambda
    max_lambda = std::max(max_lambda, *v);
    if (*v > target_bound + 1e-9)
      ++violations;
    return -*v;
  }
};

struct RestartOutcome {
  SimplexResult simplex;
  double max_lambda = 0.0;
  std::size_t violations = 0;
};

} // namespace detail

/// Maximizes Lambda over a state family at fixed gamma: a coarse log grid over
/// the parameter box seeds `restarts` simplex runs, each started from one of
/// the best coarse points with a seeded jitter. Restarts may run in parallel;
/// the best Lambda wins, ties going to the lowest restart index.
inline TightnessResult maximize_lambda(const TightnessQuery &query) {
  query.grid.validate();
  if (query.restarts == 0)
    throw InvalidArgument("tightness search needs at least one restart");
  if (query.split == LambdaSplit::fixed_ratio && !(query.ratio > 0.0))
    throw InvalidArgument("lambda split ratio must be positive");
  std::vector<ParamBound> bounds =
      query.bounds.empty() ? default_bounds(query.family, query.grid) : query.bounds;
  const std::size_t family_dims = query.family == StateFamily::gaussian ? 1 : 3;
  if (bounds.size() != family_dims)
    throw InvalidArgument(std::string("family ") + to_string(query.family) +
                          " takes " + std::to_string(family_dims) + " parameters");
  for (const auto &b : bounds)
    if (!(b.lo > 0.0 && b.hi >= b.lo))
      throw InvalidArgument("parameter bounds for " + b.name + " are invalid");
  if (query.split == LambdaSplit::search) {
    if (!(query.ratio_range >= 1.0))
      throw InvalidArgument("ratio_range must be at least 1");
    bounds.push_back({"lambda_ratio", 1.0 / query.ratio_range, query.ratio_range});
  }
  const std::size_t dims = bounds.size();
  const double target = bound(query.gamma) * query.bound_scale;

  TightnessResult res;
  res.gamma = query.gamma;
  res.family = query.family;
  res.bound = target;

  // coarse log grid, about 4 restarts' worth of points
  const std::size_t per_axis = dims == 1 ? 16 : (dims == 2 ? 6 : (dims == 3 ? 4 : 3));
  std::size_t coarse_count = 1;
  for (std::size_t d = 0; d < dims; ++d)
    coarse_count *= per_axis;
  if (coarse_count >= query.max_evaluations)
    throw InvalidArgument("evaluation budget is smaller than the seeding grid");

  detail::TightnessObjective coarse_obj{query, bounds, family_dims, target};
  std::vector<std::pair<double, std::vector<double>>> coarse;
  coarse.reserve(coarse_count);
  for (std::size_t idx = 0; idx < coarse_count; ++idx) {
    std::vector<double> u(dims);
    std::size_t rem = idx;
    for (std::size_t d = 0; d < dims; ++d) {
      const double t = (static_cast<double>(rem % per_axis) + 0.5) /
                       static_cast<double>(per_axis);
      rem /= per_axis;
      u[d] = std::log(bounds[d].lo) +
             t * (std::log(bounds[d].hi) - std::log(bounds[d].lo));
    }
    coarse.emplace_back(coarse_obj(u), u);
  }
  std::stable_sort(coarse.begin(), coarse.end(),
                   [](const auto &a, const auto &b) { return a.first < b.first; });

  const std::size_t per_restart = (query.max_evaluations - coarse_count) / query.restarts;
  std::vector<detail::RestartOutcome> outcomes(query.restarts);
  parallel_for(query.restarts, query.workers, [&](std::size_t r) {
    std::mt19937_64 rng(query.seed + 0x9e3779b97f4a7c15ULL * (r + 1));
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);
    std::vector<double> u0 = coarse[r % coarse.size()].second;
    std::vector<double> steps(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      const double width = std::log(bounds[d].hi) - std::log(bounds[d].lo);
      const double cell = width / static_cast<double>(per_axis);
      if (r > 0)
        u0[d] += jitter(rng) * cell;
      steps[d] = width > 0.0 ? 0.5 * cell : 1e-3;
    }
    detail::TightnessObjective obj{query, bounds, family_dims, target};
    SimplexOptions opt;
    opt.max_evaluations = per_restart;
    outcomes[r].simplex = nelder_mead(obj, u0, steps, opt);
    outcomes[r].max_lambda = obj.max_lambda;
    outcomes[r].violations = obj.violations;
  });

  res.evaluations = coarse_count;
  res.max_iterate_lambda = coarse_obj.max_lambda;
  res.iterate_violations = coarse_obj.violations;
  // the best coarse point competes too, so the result is never worse than it
  double best = -coarse.front().first;
  std::vector<double> best_u = coarse.front().second;
  for (const auto &o : outcomes) {
    res.evaluations += o.simplex.evaluations;
    res.max_iterate_lambda = std::max(res.max_iterate_lambda, o.max_lambda);
    res.iterate_violations += o.violations;
    if (!o.simplex.converged)
      res.budget_exhausted = true;
    if (-o.simplex.value > best) {
      best = -o.simplex.value;
      best_u = o.simplex.x;
    }
  }
  const detail::TightnessObjective view{query, bounds, family_dims, target};
  const auto p = view.params(best_u);
  const auto [lx, lp] = split_lambda(query.gamma, query.grid.hbar, view.ratio_of(p));
  res.lambda_x = lx;
  res.lambda_p = lp;
  for (std::size_t d = 0; d < dims; ++d)
    res.best_params.emplace_back(bounds[d].name, p[d]);
  if (query.family == StateFamily::comb) {
    CombSpec c{p[0], p[1], 0, p[2]};
    res.best_params.emplace_back("half_teeth",
                                 static_cast<double>(comb_half_teeth(c, query.grid)));
  }
  res.best_lambda_big = best;
  res.gap = res.bound - best;
  return res;
}

/// maximize_lambda over a list of gamma values, sorted ascending with
/// repeated values removed.
inline std::vector<TightnessResult> gap_profile(std::vector<double> gammas,
                                                const TightnessQuery &templ) {
  std::sort(gammas.begin(), gammas.end());
  gammas.erase(std::unique(gammas.begin(), gammas.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
               gammas.end());
  std::vector<TightnessResult> out;
  out.reserve(gammas.size());
  for (double g : gammas) {
    TightnessQuery q = templ;
    q.gamma = g;
    out.push_back(maximize_lambda(q));
  }
  return out;
}

} // namespace chur

#endif // CHUR_TIGHTNESS_HPP
