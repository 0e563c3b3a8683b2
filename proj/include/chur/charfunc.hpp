#ifndef CHUR_CHARFUNC_HPP
#define CHUR_CHARFUNC_HPP

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "grid.hpp"

namespace chur {

/// One sample of a characteristic function.
struct CharFunctionSample {
  double lambda = 0.0;
  cplx value{1.0, 0.0};
};

/// Fourier integral of a sampled density, sum_k exp(i lambda u_k) rho_k du.
/// Phi(-lambda) is the exact complex conjugate of Phi(lambda).
inline cplx characteristic(const Density &rho, double lambda) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < rho.values.size(); ++k) {
    const double arg = lambda * rho.coordinate(k);
    re += std::cos(arg) * rho.values[k];
    im += std::sin(arg) * rho.values[k];
  }
  return {re * rho.step, im * rho.step};
}

inline cplx char_position(const StateVector &state, double lambda_x) {
  return characteristic(density(state, Representation::position), lambda_x);
}

inline cplx char_momentum(const StateVector &state, double lambda_p) {
  return characteristic(density(state, Representation::momentum), lambda_p);
}

inline cplx char_position(const MixedState &state, double lambda_x) {
  cplx s = 0.0;
  for (const auto &c : state.components())
    s += c.weight * char_position(c.state, lambda_x);
  return s;
}

inline cplx char_momentum(const MixedState &state, double lambda_p) {
  cplx s = 0.0;
  for (const auto &c : state.components())
    s += c.weight * char_momentum(c.state, lambda_p);
  return s;
}

template <class State>
cplx char_function(const State &state, double lambda, Representation rep) {
  return rep == Representation::position ? char_position(state, lambda)
                                         : char_momentum(state, lambda);
}

template <class State>
std::vector<CharFunctionSample> char_sweep(const State &state,
                                           std::span<const double> lambdas,
                                           Representation rep) {
  std::vector<CharFunctionSample> out;
  out.reserve(lambdas.size());
  for (double l : lambdas)
    out.push_back({l, char_function(state, l, rep)});
  return out;
}

/// Position characteristic function evaluated as the autocorrelation
/// integral of the momentum wave function, int psi~*(p) psi~(p - hbar lambda) dp.
inline cplx char_momentum_autocorr(const StateVector &state, double lambda_x) {
  const StateVector mom = to_momentum(state);
  const StateVector shifted = translate(mom, -mom.grid().hbar * lambda_x);
  return mom.inner(shifted);
}

/// Omega = <psi| exp(-i lambda_x x) exp(i lambda_p p) |psi>.
inline cplx displacement_expectation(const StateVector &state, double lambda_x,
                                     double lambda_p) {
  const StateVector pos = to_position(state);
  const GridSpec &g = pos.grid();
  const StateVector shifted = translate(pos, g.hbar * lambda_p);
  double re = 0.0;
  double im = 0.0;
  for (std::size_t j = 0; j < g.n_points; ++j) {
    const cplx v = std::conj(pos[j]) *
                   std::polar(1.0, -lambda_x * g.x(j)) * shifted[j];
    re += v.real();
    im += v.imag();
  }
  return cplx(re, im) * g.dx();
}

/// Re Phi(lambda) against the variance bound 1 - lambda^2 sigma^2 / 2.
/// Phi is taken about the mean of the density, exp(-i lambda mu) Phi(lambda);
/// for a centred density this is Phi itself and the bound holds for any mean.
struct LowerBoundCheck {
  double re_phi = 1.0;
  double bound = 1.0;
  bool holds = true;
};

inline LowerBoundCheck lower_bound_from(cplx phi, double lambda, double mean,
                                        double variance_value) {
  LowerBoundCheck r;
  r.re_phi = (std::polar(1.0, -lambda * mean) * phi).real();
  r.bound = 1.0 - 0.5 * lambda * lambda * variance_value;
  r.holds = r.re_phi >= r.bound - 1e-10;
  return r;
}

template <class State>
LowerBoundCheck lower_bound_check(const State &state, double lambda,
                                  Representation rep) {
  const Density rho = density(state, rep);
  return lower_bound_from(characteristic(rho, lambda), lambda, rho.mean(),
                          rho.variance());
}

} // namespace chur

#endif // CHUR_CHARFUNC_HPP
