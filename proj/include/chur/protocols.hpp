#ifndef CHUR_PROTOCOLS_HPP
#define CHUR_PROTOCOLS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "charfunc.hpp"
#include "chur_core.hpp"
#include "errors.hpp"
#include "grid.hpp"

namespace chur {

// ---------------------------------------------------------------------------
// Qubit-assisted measurement of <exp(i lambda_p p)>.
//
// The ancilla starts in |+>, a controlled displacement applies
// exp(i lambda_p p) on the |1> branch, and the ancilla is read out in the
// sigma_x basis |+-> and the sigma_y basis |+-i> = (|0> +- i|1>)/sqrt(2).
// With D = <exp(i lambda_p p)> this gives P+- = (1 +- Re D)/2 and
// P+-i = (1 +- Im D)/2, so D = (P+ - P-) + i (P+i - P-i).
// ---------------------------------------------------------------------------

struct QubitReadout {
  double lambda_p = 0.0;
  double p_plus = 0.5;
  double p_minus = 0.5;
  double p_plus_i = 0.5;
  double p_minus_i = 0.5;
  cplx reconstructed{1.0, 0.0};
  // sampled runs only
  std::uint64_t shots_x = 0;
  std::uint64_t shots_y = 0;
  double prob_stderr_x = 0.0; ///< sqrt(p (1 - p) / n) in the sigma_x basis
  double prob_stderr_y = 0.0;

  /// Standard error of the reconstructed quadratures, 2 max(stderr_x, stderr_y).
  double stderr_estimate() const {
    return 2.0 * std::max(prob_stderr_x, prob_stderr_y);
  }
};

inline cplx reconstruct_displacement(double p_plus, double p_minus,
                                     double p_plus_i, double p_minus_i) {
  return {p_plus - p_minus, p_plus_i - p_minus_i};
}

/// Exact outcome probabilities from the joint ancilla-system state.
inline QubitReadout qubit_exact(const StateVector &state, double lambda_p) {
  const StateVector psi = to_position(state);
  const GridSpec &g = psi.grid();
  const StateVector displaced = translate(psi, g.hbar * lambda_p);
  // joint state (|0> psi + |1> D psi) / sqrt(2); the ancilla outcome
  // (|0> + c|1>)/sqrt(2) leaves the system in (psi + conj(c) D psi) / 2
  auto outcome = [&](cplx c) {
    double s = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j)
      s += std::norm(0.5 * (psi[j] + std::conj(c) * displaced[j]));
    return s * g.dx();
  };
  QubitReadout r;
  r.lambda_p = lambda_p;
  r.p_plus = outcome({1.0, 0.0});
  r.p_minus = outcome({-1.0, 0.0});
  r.p_plus_i = outcome({0.0, 1.0});
  r.p_minus_i = outcome({0.0, -1.0});
  r.reconstructed =
      reconstruct_displacement(r.p_plus, r.p_minus, r.p_plus_i, r.p_minus_i);
  return r;
}

/// Mixture: outcome probabilities are weight-averaged.
inline QubitReadout qubit_exact(const MixedState &state, double lambda_p) {
  QubitReadout r;
  r.lambda_p = lambda_p;
  r.p_plus = r.p_minus = r.p_plus_i = r.p_minus_i = 0.0;
  for (const auto &c : state.components()) {
    const QubitReadout q = qubit_exact(c.state, lambda_p);
    r.p_plus += c.weight * q.p_plus;
    r.p_minus += c.weight * q.p_minus;
    r.p_plus_i += c.weight * q.p_plus_i;
    r.p_minus_i += c.weight * q.p_minus_i;
  }
  r.reconstructed =
      reconstruct_displacement(r.p_plus, r.p_minus, r.p_plus_i, r.p_minus_i);
  return r;
}

/// Finite-statistics run: shots are split evenly between the two ancilla
/// bases and outcomes are drawn binomially from the exact probabilities.
template <class State>
QubitReadout qubit_sampled(const State &state, double lambda_p,
                           std::uint64_t shots, std::uint64_t seed) {
  if (shots < 2)
    throw InvalidShots("need at least one shot per ancilla basis, got " +
                       std::to_string(shots));
  const QubitReadout exact = qubit_exact(state, lambda_p);
  std::mt19937_64 rng(seed);
  QubitReadout r;
  r.lambda_p = lambda_p;
  r.shots_x = (shots + 1) / 2;
  r.shots_y = shots - r.shots_x;
  auto draw = [&](std::uint64_t n, double p) {
    std::binomial_distribution<std::uint64_t> dist(n, std::clamp(p, 0.0, 1.0));
    return dist(rng);
  };
  const auto plus = draw(r.shots_x, exact.p_plus);
  const auto plus_i = draw(r.shots_y, exact.p_plus_i);
  const double nx = static_cast<double>(r.shots_x);
  const double ny = static_cast<double>(r.shots_y);
  r.p_plus = static_cast<double>(plus) / nx;
  r.p_minus = 1.0 - r.p_plus;
  r.p_plus_i = static_cast<double>(plus_i) / ny;
  r.p_minus_i = 1.0 - r.p_plus_i;
  r.prob_stderr_x = std::sqrt(r.p_plus * r.p_minus / nx);
  r.prob_stderr_y = std::sqrt(r.p_plus_i * r.p_minus_i / ny);
  r.reconstructed =
      reconstruct_displacement(r.p_plus, r.p_minus, r.p_plus_i, r.p_minus_i);
  return r;
}

// ---------------------------------------------------------------------------
// Finite-dimensional Weyl pairs, U W = exp(i phi) W U.
// ---------------------------------------------------------------------------

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct WeylPair {
  int dimension = 2;
  CMatrix u_matrix;
  CMatrix w_matrix;
  double phase = std::numbers::pi;

  /// Max-norm of U W - exp(i phi) W U.
  double commutation_defect() const {
    const CMatrix diff =
        u_matrix * w_matrix - std::polar(1.0, phase) * (w_matrix * u_matrix);
    return diff.cwiseAbs().maxCoeff();
  }
};

inline void require_unitary(const CMatrix &m, const char *name) {
  if (m.rows() != m.cols())
    throw NotUnitary(std::string(name) + " is not square");
  const CMatrix defect =
      m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols());
  if (defect.cwiseAbs().maxCoeff() > 1e-10)
    throw NotUnitary(std::string(name) + " is not unitary");
}

/// Validated pair; the commutation relation must hold to 1e-12 entrywise.
inline WeylPair make_weyl_pair(CMatrix u, CMatrix w, double phase) {
  require_unitary(u, "U");
  require_unitary(w, "W");
  if (u.rows() != w.rows() || u.rows() < 2)
    throw InvalidArgument("U and W must share a dimension of at least 2");
  WeylPair pair{static_cast<int>(u.rows()), std::move(u), std::move(w), phase};
  if (pair.commutation_defect() > 1e-12)
    throw InvalidArgument("U and W violate U W = exp(i phi) W U");
  return pair;
}

/// Clock diag(1, w, ..., w^{d-1}) and cyclic shift |j> -> |j+1>, w = e^{2 pi i/d}.
inline WeylPair clock_and_shift(int d) {
  if (d < 2)
    throw InvalidArgument("dimension must be at least 2");
  CMatrix u = CMatrix::Zero(d, d);
  CMatrix w = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    u(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / d);
    w((j + 1) % d, j) = 1.0;
  }
  return make_weyl_pair(std::move(u), std::move(w), 2.0 * std::numbers::pi / d);
}

struct FiniteDimResult {
  double lhs = 0.0; ///< |<U>|^2 + |<W>|^2
  double bound = 2.0;
  bool holds = true;
};

inline FiniteDimResult finite_dim_chur(const WeylPair &pair, const CVector &psi) {
  if (psi.size() != pair.dimension)
    throw InvalidArgument("state dimension does not match the pair");
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw NotUnitVector("state is not normalized");
  FiniteDimResult r;
  const cplx eu = psi.dot(pair.u_matrix * psi);
  const cplx ew = psi.dot(pair.w_matrix * psi);
  r.lhs = std::norm(eu) + std::norm(ew);
  r.bound = bound(pair.phase);
  r.holds = r.lhs <= r.bound + 1e-12;
  return r;
}

/// Haar-random pure state: normalized complex Gaussian vector.
template <class Rng> CVector random_unit_vector(int d, Rng &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(d);
  for (int i = 0; i < d; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = cplx(re, im);
  }
  return v / v.norm();
}

struct FiniteDimSweep {
  int dimension = 2;
  double phase = 0.0;
  double lhs_max = 0.0;
  double bound = 2.0;
  std::size_t samples = 0;
  std::size_t violations = 0;
};

inline FiniteDimSweep finite_dim_sweep(const WeylPair &pair, std::size_t samples,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FiniteDimSweep s;
  s.dimension = pair.dimension;
  s.phase = pair.phase;
  s.bound = bound(pair.phase);
  s.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto r = finite_dim_chur(pair, random_unit_vector(pair.dimension, rng));
    s.lhs_max = std::max(s.lhs_max, r.lhs);
    if (!r.holds)
      ++s.violations;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Loop Quantum Cosmology (b, V) pair.
//
// The volume state lives on a position-like grid; the Hubble variable b is its
// conjugate under the constant hbar Q, and only the holonomy U_b = exp(i
// lambda_b b) is available. Choosing lambda_V = pi / (hbar Q lambda_b) sets
// the bound to 1, and the variance bound on |Phi_V| turns the relation into
// sigma_V >= (hbar Q / pi) lambda_b |<U_b>|.
// ---------------------------------------------------------------------------

struct LqcScenario {
  double q_constant = 1.0; ///< Q = 4 pi G / c^2 in the chosen units
  double lambda_b = 1.0;
  StateVector state_v;     ///< volume representation; its grid carries hbar
};

struct LqcReport {
  double hbar_q = 1.0;
  double sigma_v = 0.0;
  cplx holonomy;           ///< <U_b(lambda_b)>
  double rhs = 0.0;        ///< (hbar Q / pi) lambda_b |<U_b>|
  bool holds = true;
  double lambda_v = 0.0;   ///< pi / (hbar Q lambda_b)
  double bound_at_lambda_v = 1.0;
  cplx phi_v;              ///< volume characteristic function at lambda_v
  double chain_lhs = 0.0;  ///< |<U_b>|^2
  double chain_rhs = 1.0;  ///< 1 - |Phi_V(lambda_v)|^2
  bool chain_holds = true;
};

inline LqcReport lqc_bound_check(const LqcScenario &sc) {
  if (!(sc.q_constant > 0.0) || !(sc.lambda_b > 0.0))
    throw InvalidArgument("LQC needs Q > 0 and lambda_b > 0");
  const StateVector vol = to_position(sc.state_v);
  LqcReport r;
  r.hbar_q = vol.grid().hbar * sc.q_constant;
  const StateVector conj = vol.with_hbar(r.hbar_q);
  r.sigma_v = std::sqrt(variance(conj, Representation::position));
  if (r.sigma_v < 1e-12)
    throw ZeroVariance("volume state has zero spread");
  r.holonomy = char_momentum(conj, sc.lambda_b);
  r.rhs = r.hbar_q / std::numbers::pi * sc.lambda_b * std::abs(r.holonomy);
  r.holds = r.sigma_v >= r.rhs - 1e-9;
  r.lambda_v = std::numbers::pi / (r.hbar_q * sc.lambda_b);
  r.bound_at_lambda_v = bound(r.hbar_q * r.lambda_v * sc.lambda_b);
  r.phi_v = char_position(conj, r.lambda_v);
  r.chain_lhs = std::norm(r.holonomy);
  r.chain_rhs = 1.0 - std::norm(r.phi_v);
  r.chain_holds = r.chain_lhs <= r.chain_rhs + 1e-9;
  return r;
}

} // namespace chur

#endif // CHUR_PROTOCOLS_HPP
