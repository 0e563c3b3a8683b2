#ifndef CHUR_CHUR_CORE_HPP
#define CHUR_CHUR_CORE_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "charfunc.hpp"
#include "grid.hpp"

namespace chur {

/// Upper bound on |Phi(lambda_x)|^2 + |Phi~(lambda_p)|^2 as a function of
/// gamma = hbar lambda_x lambda_p, in the half-angle form
/// 2 / (1 + |sin(gamma/2)|). Even, 2 pi periodic, between 1 and 2.
/// Reducing gamma first makes B(2 pi) exactly 2.
inline double bound(double gamma) {
  const double r = std::remainder(gamma, 2.0 * std::numbers::pi);
  return 2.0 / (1.0 + std::abs(std::sin(0.5 * r)));
}

/// 2 sqrt(2) (sqrt(2) - sqrt(1 - cos g)) / (1 + cos g). Singular (0/0) at odd
/// multiples of pi; kept as the reference expression for bound().
/// Evaluated in long double: near even multiples of pi, 1 - cos g cancels and
/// a double evaluation loses about 1e-11 absolute.
inline double bound_literal(double gamma) {
  const long double c = std::cos(static_cast<long double>(gamma));
  const long double r2 = std::sqrt(2.0L);
  return static_cast<double>(2.0L * r2 * (r2 - std::sqrt(1.0L - c)) / (1.0L + c));
}

/// Z = (1 + exp(i gamma)) / 2.
inline cplx z_constant(double gamma) {
  return 0.5 * (1.0 + std::polar(1.0, gamma));
}

struct GramDiagnostics {
  double direct = 0.0;     ///< real part of the 3x3 determinant
  double direct_imag = 0.0; ///< imaginary residue, zero for a Hermitian G
  double expanded = 0.0;   ///< 1 - Lambda - |Omega|^2 + Theta + Theta*
};

/// Determinant of G = [[1, Phi, Phi~], [Phi*, 1, Omega], [Phi~*, Omega*, 1]].
inline GramDiagnostics gram_from(cplx phi, cplx phi_tilde, cplx omega) {
  const cplx g[3][3] = {{1.0, phi, phi_tilde},
                        {std::conj(phi), 1.0, omega},
                        {std::conj(phi_tilde), std::conj(omega), 1.0}};
  const cplx det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                   g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                   g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
  const double big_lambda = std::norm(phi) + std::norm(phi_tilde);
  const cplx theta = omega * phi * std::conj(phi_tilde);
  GramDiagnostics r;
  r.direct = det.real();
  r.direct_imag = det.imag();
  r.expanded = 1.0 - big_lambda - std::norm(omega) + 2.0 * theta.real();
  return r;
}

struct ChurEvaluation {
  double lambda_x = 0.0;
  double lambda_p = 0.0;
  double gamma = 0.0;
  cplx phi{1.0, 0.0};
  cplx phi_tilde{1.0, 0.0};
  double capital_lambda = 2.0;
  double bound = 2.0;
  cplx z{1.0, 0.0};
  // Pure states only.
  std::optional<cplx> omega;
  std::optional<cplx> theta;
  std::optional<double> gram_det;

  double margin() const { return bound - capital_lambda; }
  bool holds(double tolerance = 1e-9) const {
    return capital_lambda <= bound + tolerance;
  }
};

namespace detail {

inline ChurEvaluation chur_common(cplx phi, cplx phi_tilde, double lambda_x,
                                  double lambda_p, double hbar) {
  ChurEvaluation e;
  e.lambda_x = lambda_x;
  e.lambda_p = lambda_p;
  e.gamma = hbar * lambda_x * lambda_p;
  e.phi = phi;
  e.phi_tilde = phi_tilde;
  e.capital_lambda = std::norm(phi) + std::norm(phi_tilde);
  e.bound = bound(e.gamma);
  e.z = z_constant(e.gamma);
  return e;
}

inline ChurEvaluation with_omega(ChurEvaluation e, cplx omega) {
  e.omega = omega;
  e.theta = omega * e.phi * std::conj(e.phi_tilde);
  e.gram_det = gram_from(e.phi, e.phi_tilde, omega).expanded;
  return e;
}

} // namespace detail

/// Lambda = |Phi|^2 + |Phi~|^2 with the bound and, for pure states, the
/// Gram-matrix quantities.
inline ChurEvaluation evaluate_chur(const StateVector &state, double lambda_x,
                                    double lambda_p) {
  const StateVector pos = to_position(state);
  auto e = detail::chur_common(char_position(pos, lambda_x),
                               char_momentum(pos, lambda_p), lambda_x, lambda_p,
                               pos.grid().hbar);
  return detail::with_omega(e, displacement_expectation(pos, lambda_x, lambda_p));
}

inline ChurEvaluation evaluate_chur(const MixedState &state, double lambda_x,
                                    double lambda_p) {
  return detail::chur_common(char_position(state, lambda_x),
                             char_momentum(state, lambda_p), lambda_x, lambda_p,
                             state.grid().hbar);
}

inline GramDiagnostics gram_determinant(const StateVector &state,
                                        double lambda_x, double lambda_p) {
  const StateVector pos = to_position(state);
  return gram_from(char_position(pos, lambda_x), char_momentum(pos, lambda_p),
                   displacement_expectation(pos, lambda_x, lambda_p));
}

struct ProofStep {
  std::string name;
  double value = 0.0; ///< left-hand side of the checked inequality
  double limit = 0.0; ///< right-hand side
  bool passed = true;
  bool skipped = false;
};

struct ProofChainReport {
  ChurEvaluation evaluation;
  double omega_star = 0.0; ///< maximizing |Omega|, when |Z| > 1e-6
  std::vector<ProofStep> steps;

  bool passed() const {
    for (const auto &s : steps)
      if (!s.skipped && !s.passed)
        return false;
    return true;
  }
};

/// Replays the inequality chain from det G >= 0 to the final bound on one
/// evaluation: (a) det G >= 0, (b) |Theta| <= |Omega| Lambda / 2,
/// (c) Lambda <= (1 - |Omega|^2) / (1 - |Z||Omega|), (d) the maximizing
/// |Omega| reproduces bound(gamma).
inline ProofChainReport proof_chain_from(const ChurEvaluation &e) {
  ProofChainReport r;
  r.evaluation = e;
  const double w = std::abs(*e.omega);
  const double zabs = std::abs(e.z);
  const double big_lambda = e.capital_lambda;

  ProofStep a{"gram_determinant", *e.gram_det, 0.0, false, false};
  a.passed = a.value >= -1e-10;
  r.steps.push_back(a);

  ProofStep b{"am_gm", std::abs(*e.theta), 0.5 * w * big_lambda, false, false};
  b.passed = b.value <= b.limit + 1e-10;
  r.steps.push_back(b);

  ProofStep c{"omega_bound", big_lambda, 0.0, false, false};
  if (zabs * w < 1.0) {
    c.limit = (1.0 - w * w) / (1.0 - zabs * w);
    c.passed = c.value <= c.limit + 1e-9;
  } else {
    c.skipped = true;
  }
  r.steps.push_back(c);

  ProofStep d{"maximizer", 0.0, e.bound, false, false};
  if (zabs > 1e-6) {
    const double root = std::sqrt(std::max(0.0, 1.0 - zabs * zabs));
    // (1 - sqrt(1 - |Z|^2)) / |Z| written without the cancellation
    const double ws = zabs / (1.0 + root);
    r.omega_star = ws;
    const double denom = 1.0 - zabs * ws;
    // |Z| -> 1 is the 0/0 limit (1 - w^2)/(1 - w) = 1 + w
    d.value = denom > 1e-12 ? (1.0 - ws * ws) / denom : 1.0 + ws;
    d.passed = std::abs(d.value - d.limit) <= 1e-10;
  } else {
    d.skipped = true;
  }
  r.steps.push_back(d);
  return r;
}

inline ProofChainReport proof_chain_check(const StateVector &state,
                                          double lambda_x, double lambda_p) {
  return proof_chain_from(evaluate_chur(state, lambda_x, lambda_p));
}

struct HurRow {
  double a = 0.0;
  double lambda_x = 0.0;
  double lambda_p = 0.0;
  double weakened_lhs = 0.0; ///< 2 - a (sigma_x^2 / b^2 + b^2 sigma_p^2 / hbar^2)
  double bound = 2.0;
  double capital_lambda = 2.0; ///< Lambda of the state at this (lambda_x, lambda_p)
  double slope = 1.0;          ///< (2 - bound(a)) / a
  bool holds = true;
};

struct HurReport {
  double sigma_x = 0.0;
  double sigma_p = 0.0;
  double b = 0.0; ///< sqrt(hbar sigma_x / sigma_p)
  double product = 0.0;
  double hbar_half = 0.5;
  bool heisenberg_holds = true;
  std::vector<HurRow> rows;
};

/// Compares the weakened ChUR with the Heisenberg relation along the
/// parametrization lambda_x = sqrt(a)/b, lambda_p = sqrt(a) b / hbar.
inline HurReport hur_comparison(const StateVector &state,
                                std::span<const double> a_values) {
  const StateVector pos = to_position(state);
  const double hbar = pos.grid().hbar;
  HurReport r;
  r.sigma_x = std::sqrt(variance(pos, Representation::position));
  r.sigma_p = std::sqrt(variance(pos, Representation::momentum));
  if (r.sigma_x < 1e-12 || r.sigma_p < 1e-12)
    throw ZeroVariance("hur_comparison needs nonzero position and momentum "
                       "spreads");
  r.b = std::sqrt(hbar * r.sigma_x / r.sigma_p);
  r.product = r.sigma_x * r.sigma_p;
  r.hbar_half = 0.5 * hbar;
  r.heisenberg_holds = r.product >= r.hbar_half - 1e-9;
  for (double a : a_values) {
    if (!(a > 0.0))
      throw InvalidArgument("hur_comparison needs a > 0");
    HurRow row;
    row.a = a;
    row.lambda_x = std::sqrt(a) / r.b;
    row.lambda_p = std::sqrt(a) * r.b / hbar;
    row.weakened_lhs =
        2.0 - a * (r.sigma_x * r.sigma_x / (r.b * r.b) +
                   r.b * r.b * r.sigma_p * r.sigma_p / (hbar * hbar));
    row.bound = bound(a);
    row.capital_lambda = std::norm(char_position(pos, row.lambda_x)) +
                         std::norm(char_momentum(pos, row.lambda_p));
    row.slope = (2.0 - row.bound) / a;
    row.holds = row.weakened_lhs <= row.bound + 1e-9;
    r.rows.push_back(row);
  }
  return r;
}

struct RobertsonSchrodinger {
  double var_x = 0.0;
  double var_p = 0.0;
  double covariance = 0.0; ///< symmetrized <{x - <x>, p - <p>}> / 2
  double determinant = 0.0; ///< var_x var_p - cov^2
  bool holds = true;        ///< determinant >= hbar^2 / 4
};

/// Covariance-matrix form of the position-momentum uncertainty relation.
inline RobertsonSchrodinger robertson_schrodinger(const StateVector &state) {
  const StateVector pos = to_position(state);
  const StateVector mom = to_momentum(pos);
  const GridSpec &g = pos.grid();
  std::vector<cplx> p_mom(g.n_points);
  for (std::size_t k = 0; k < g.n_points; ++k)
    p_mom[k] = g.p(k) * mom[k];
  const StateVector p_psi =
      to_position(StateVector(g, std::move(p_mom), Representation::momentum));
  RobertsonSchrodinger r;
  const double mx = mean(pos, Representation::position);
  const double mp = mean(pos, Representation::momentum);
  r.var_x = variance(pos, Representation::position);
  r.var_p = variance(pos, Representation::momentum);
  double acc = 0.0;
  for (std::size_t j = 0; j < g.n_points; ++j)
    acc += (std::conj(pos[j]) * (g.x(j) - mx) * (p_psi[j] - mp * pos[j])).real();
  r.covariance = acc * g.dx();
  r.determinant = r.var_x * r.var_p - r.covariance * r.covariance;
  r.holds = r.determinant >= 0.25 * g.hbar * g.hbar - 1e-9;
  return r;
}

} // namespace chur

#endif // CHUR_CHUR_CORE_HPP
