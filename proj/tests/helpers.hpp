#ifndef CHUR_TESTS_HELPERS_HPP
#define CHUR_TESTS_HELPERS_HPP

#include <cmath>
#include <complex>
#include <numbers>

#include "chur/chur.hpp"

namespace testing {

inline chur::GridSpec default_grid() { return chur::GridSpec{}; }

/// psi(x) = (2 pi s^2)^(-1/4) exp(-(x - c)^2 / (4 s^2)).
inline double gaussian_amplitude(double x, double s, double c = 0.0) {
  return std::pow(2.0 * std::numbers::pi * s * s, -0.25) *
         std::exp(-(x - c) * (x - c) / (4.0 * s * s));
}

inline double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
}

} // namespace testing

#endif
