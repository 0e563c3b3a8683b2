#ifndef CHUR_STATES_HPP
#define CHUR_STATES_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"

namespace chur {

struct GaussianSpec {
  double sigma_x = 1.0; ///< position standard deviation of |psi|^2
  double center_x = 0.0;
  double center_p = 0.0;
};

/// Gaussian-tooth comb under a Gaussian envelope:
/// psi ~ sum_{k=-K..K} exp(-(kT)^2 / (2 W^2)) exp(-(x - kT)^2 / (2 w^2)).
struct CombSpec {
  double period = 1.0;         ///< T
  double tooth_sigma = 0.005;  ///< w
  int half_teeth = 50;         ///< K
  double envelope_sigma = 20.; ///< W
};

struct RandomStateSpec {
  int n_modes = 32;
  double mode_scale = 1.0;
  std::uint64_t seed = 0;
};

/// Normalized minimum-uncertainty wave packet with momentum boost center_p.
inline StateVector make_gaussian(const GaussianSpec &spec, const GridSpec &grid) {
  grid.validate();
  if (!(spec.sigma_x > 0.0))
    throw InvalidArgument("sigma_x must be positive");
  if (8.0 * spec.sigma_x + std::abs(spec.center_x - grid.center) >=
      0.5 * grid.length)
    throw GridTooSmall("Gaussian with sigma_x " + std::to_string(spec.sigma_x) +
                       " does not fit a grid of length " +
                       std::to_string(grid.length));
  std::vector<cplx> amps(grid.n_points);
  const double s2 = spec.sigma_x * spec.sigma_x;
  for (std::size_t j = 0; j < grid.n_points; ++j) {
    const double x = grid.x(j);
    const double d = x - spec.center_x;
    amps[j] = std::polar(std::exp(-d * d / (4.0 * s2)),
                         spec.center_p * x / grid.hbar);
  }
  return StateVector(grid, std::move(amps)).normalized();
}

inline StateVector make_comb(const CombSpec &spec, const GridSpec &grid) {
  grid.validate();
  if (!(spec.period > 0.0 && spec.tooth_sigma > 0.0 &&
        spec.envelope_sigma > 0.0) ||
      spec.half_teeth < 0)
    throw InvalidArgument("comb parameters must be positive");
  const double K = static_cast<double>(spec.half_teeth);
  if ((2.0 * K + 1.0) * spec.period + 8.0 * spec.envelope_sigma >= grid.length ||
      std::abs(grid.center) + K * spec.period + 8.0 * spec.tooth_sigma >=
          0.5 * grid.length)
    throw GridTooSmall("comb of " + std::to_string(2 * spec.half_teeth + 1) +
                       " teeth does not fit a grid of length " +
                       std::to_string(grid.length));
  if (spec.tooth_sigma <= 2.0 * grid.dx())
    throw TeethUnresolved("tooth width " + std::to_string(spec.tooth_sigma) +
                          " is not above two grid steps");

  std::vector<cplx> amps(grid.n_points, 0.0);
  const double dx = grid.dx();
  const double w2 = spec.tooth_sigma * spec.tooth_sigma;
  const double W2 = spec.envelope_sigma * spec.envelope_sigma;
  // each tooth is negligible (< e^-72) beyond 12 w from its centre
  const double reach = 12.0 * spec.tooth_sigma;
  for (int k = -spec.half_teeth; k <= spec.half_teeth; ++k) {
    const double xk = k * spec.period;
    const double weight = std::exp(-xk * xk / (2.0 * W2));
    const double lo = std::max(0.0, std::floor((xk - reach - grid.x_min()) / dx));
    const double hi = std::min(static_cast<double>(grid.n_points - 1),
                               std::ceil((xk + reach - grid.x_min()) / dx));
    for (auto j = static_cast<std::size_t>(lo); j <= static_cast<std::size_t>(hi);
         ++j) {
      const double d = grid.x(j) - xk;
      amps[j] += weight * std::exp(-d * d / (2.0 * w2));
    }
  }
  return StateVector(grid, std::move(amps)).normalized();
}

/// Orthonormal Hermite-Gauss functions phi_n((x - center)/scale)/sqrt(scale),
/// n = 0..n_modes-1, sampled on the position grid. Row n holds mode n.
inline std::vector<std::vector<double>>
hermite_functions(const GridSpec &grid, int n_modes, double scale) {
  if (n_modes < 1)
    throw InvalidArgument("need at least one Hermite mode");
  if (!(scale > 0.0))
    throw InvalidArgument("mode scale must be positive");
  const std::size_t n = grid.n_points;
  std::vector<std::vector<double>> modes(static_cast<std::size_t>(n_modes),
                                         std::vector<double>(n));
  const double norm0 = 1.0 / (std::pow(std::numbers::pi, 0.25) * std::sqrt(scale));
  for (std::size_t j = 0; j < n; ++j) {
    const double u = (grid.x(j) - grid.center) / scale;
    double prev = 0.0;
    double cur = norm0 * std::exp(-0.5 * u * u);
    modes[0][j] = cur;
    for (int m = 1; m < n_modes; ++m) {
      const double next = std::sqrt(2.0 / m) * u * cur -
                          std::sqrt((m - 1.0) / m) * prev;
      prev = cur;
      cur = next;
      modes[static_cast<std::size_t>(m)][j] = cur;
    }
  }
  return modes;
}

/// Superposition of the first n_modes Hermite-Gauss functions with complex
/// standard-normal coefficients drawn from a generator seeded by spec.seed.
inline StateVector make_random(const RandomStateSpec &spec, const GridSpec &grid) {
  grid.validate();
  if (spec.n_modes < 1 || spec.n_modes > 128)
    throw InvalidArgument("n_modes must lie in [1, 128]");
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> coeffs(static_cast<std::size_t>(spec.n_modes));
  for (auto &c : coeffs) {
    const double re = normal(rng);
    const double im = normal(rng);
    c = {re, im};
  }
  const auto modes = hermite_functions(grid, spec.n_modes, spec.mode_scale);
  std::vector<cplx> amps(grid.n_points, 0.0);
  for (std::size_t m = 0; m < coeffs.size(); ++m)
    for (std::size_t j = 0; j < grid.n_points; ++j)
      amps[j] += coeffs[m] * modes[m][j];
  return StateVector(grid, std::move(amps)).normalized();
}

} // namespace chur

#endif // CHUR_STATES_HPP
