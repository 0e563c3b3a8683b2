#ifndef CHUR_SWEEP_HPP
#define CHUR_SWEEP_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <span>
#include <vector>

#include "charfunc.hpp"
#include "chur_core.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "states.hpp"

namespace chur {

/// Evenly spaced values lo, ..., hi (count >= 2), or {lo} for count == 1.
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i)
    v[i] = count == 1 ? lo
                      : lo + (hi - lo) * static_cast<double>(i) /
                                 static_cast<double>(count - 1);
  return v;
}

inline std::vector<double> logspace(double lo, double hi, std::size_t count) {
  auto v = linspace(std::log10(lo), std::log10(hi), count);
  for (auto &x : v)
    x = std::pow(10.0, x);
  return v;
}

struct SweepConfig {
  GridSpec grid;
  std::size_t n_states = 1000;
  int n_modes = 32;
  double mode_scale = 1.0;
  std::uint64_t seed = 0; ///< state i uses seed + i
  std::vector<double> lambda_x = linspace(-5.0, 5.0, 21);
  std::vector<double> lambda_p = linspace(-5.0, 5.0, 21);
  std::size_t autocorr_states = 100; ///< states that also get the autocorrelation check
  unsigned workers = default_workers();
  double bound_scale = 1.0; ///< harness self-test hook; 1 in normal runs
  double tolerance = 1e-9;  ///< violation threshold on Lambda - B
};

struct SweepSummary {
  std::size_t states = 0;
  std::size_t evaluations = 0;
  std::size_t violations = 0;        ///< Lambda > B + tolerance
  double min_margin = std::numeric_limits<double>::infinity();
  double min_gram_det = std::numeric_limits<double>::infinity();
  double max_gram_mismatch = 0.0;    ///< |direct - expanded| and |Im det|
  std::size_t gram_failures = 0;     ///< det G < -1e-10
  std::size_t proof_failures = 0;
  std::size_t lower_bound_checks = 0;
  std::size_t lower_bound_failures = 0;
  double lower_bound_min_slack = std::numeric_limits<double>::infinity();
  std::size_t autocorr_states = 0;
  double autocorr_max_error = 0.0;   ///< max |Fourier sum - autocorrelation form|
  double max_modulus = 0.0;          ///< max of |Phi|, |Phi~|, |Omega|
  /// Smallest-margin evaluation per (lambda_x, lambda_p), row-major in
  /// lambda_x; ties go to the lowest state index.
  std::vector<ChurEvaluation> worst;
  std::vector<std::size_t> worst_state;

  bool all_hold() const {
    return violations == 0 && gram_failures == 0 && proof_failures == 0 &&
           lower_bound_failures == 0 && max_gram_mismatch <= 1e-12 &&
           autocorr_max_error <= 1e-8 && max_modulus <= 1.0 + 1e-12;
  }
};

namespace detail {

/// cos and sin of lambda u_k for each lambda, stored row-wise.
struct PhaseTable {
  std::vector<std::vector<double>> cos_t, sin_t;

  PhaseTable(std::span<const double> lambdas, std::size_t n,
             auto coordinate) {
    cos_t.assign(lambdas.size(), std::vector<double>(n));
    sin_t.assign(lambdas.size(), std::vector<double>(n));
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const double a = lambdas[i] * coordinate(k);
        cos_t[i][k] = std::cos(a);
        sin_t[i][k] = std::sin(a);
      }
  }
};

struct StateSweepResult {
  SweepSummary part;
  std::vector<ChurEvaluation> evals; ///< row-major (lambda_x, lambda_p)
};

inline void note_lower_bound(SweepSummary &s, cplx phi, double lambda,
                             double mu, double var) {
  const LowerBoundCheck c = lower_bound_from(phi, lambda, mu, var);
  ++s.lower_bound_checks;
  s.lower_bound_min_slack = std::min(s.lower_bound_min_slack, c.re_phi - c.bound);
  if (!c.holds)
    ++s.lower_bound_failures;
}

inline StateSweepResult sweep_state(const SweepConfig &cfg, std::size_t index,
                                    const PhaseTable &tx, const PhaseTable &tp) {
  const GridSpec &g = cfg.grid;
  const std::size_t n = g.n_points;
  const StateVector pos =
      make_random({cfg.n_modes, cfg.mode_scale, cfg.seed + index}, g);
  const StateVector mom = to_momentum(pos);
  const Density rx = density(pos, Representation::position);
  const Density rp = density(mom, Representation::momentum);
  const double mx = rx.mean(), vx = rx.variance();
  const double mp = rp.mean(), vp = rp.variance();

  StateSweepResult out;
  SweepSummary &s = out.part;
  s.states = 1;
  const std::size_t nx = cfg.lambda_x.size(), np = cfg.lambda_p.size();

  auto char_from = [n](const PhaseTable &t, std::size_t i, const Density &rho) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      re += t.cos_t[i][k] * rho.values[k];
      im += t.sin_t[i][k] * rho.values[k];
    }
    return cplx(re * rho.step, im * rho.step);
  };
  std::vector<cplx> phi(nx), phit(np);
  for (std::size_t i = 0; i < nx; ++i) {
    phi[i] = char_from(tx, i, rx);
    note_lower_bound(s, phi[i], cfg.lambda_x[i], mx, vx);
  }
  for (std::size_t i = 0; i < np; ++i) {
    phit[i] = char_from(tp, i, rp);
    note_lower_bound(s, phit[i], cfg.lambda_p[i], mp, vp);
  }

  out.evals.resize(nx * np);
  std::vector<double> pr(n), pi(n);
  for (std::size_t ip = 0; ip < np; ++ip) {
    const StateVector shifted = translate(pos, g.hbar * cfg.lambda_p[ip]);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx v = std::conj(pos[j]) * shifted[j];
      pr[j] = v.real();
      pi[j] = v.imag();
    }
    for (std::size_t ix = 0; ix < nx; ++ix) {
      // sum conj(psi) psi(x + hbar lambda_p) exp(-i lambda_x x) dx
      double re = 0.0, im = 0.0;
      const auto &c = tx.cos_t[ix];
      const auto &sn = tx.sin_t[ix];
      for (std::size_t j = 0; j < n; ++j) {
        re += pr[j] * c[j] + pi[j] * sn[j];
        im += pi[j] * c[j] - pr[j] * sn[j];
      }
      const cplx omega = cplx(re, im) * g.dx();
      ChurEvaluation e = detail::chur_common(phi[ix], phit[ip], cfg.lambda_x[ix],
                                             cfg.lambda_p[ip], g.hbar);
      e.bound *= cfg.bound_scale;
      e = detail::with_omega(e, omega);
      const GramDiagnostics gd = gram_from(e.phi, e.phi_tilde, omega);

      ++s.evaluations;
      s.min_margin = std::min(s.min_margin, e.margin());
      if (!e.holds(cfg.tolerance))
        ++s.violations;
      s.min_gram_det = std::min(s.min_gram_det, gd.expanded);
      if (gd.expanded < -1e-10)
        ++s.gram_failures;
      s.max_gram_mismatch =
          std::max({s.max_gram_mismatch, std::abs(gd.direct - gd.expanded),
                    std::abs(gd.direct_imag)});
      if (!proof_chain_from(e).passed())
        ++s.proof_failures;
      s.max_modulus = std::max({s.max_modulus, std::abs(e.phi),
                                std::abs(e.phi_tilde), std::abs(omega)});
      out.evals[ix * np + ip] = e;
    }
  }

  if (index < cfg.autocorr_states) {
    s.autocorr_states = 1;
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const StateVector sh = translate(mom, -g.hbar * cfg.lambda_x[ix]);
      s.autocorr_max_error =
          std::max(s.autocorr_max_error, std::abs(mom.inner(sh) - phi[ix]));
    }
  }
  return out;
}

inline void merge(SweepSummary &a, const SweepSummary &b) {
  a.states += b.states;
  a.evaluations += b.evaluations;
  a.violations += b.violations;
  a.min_margin = std::min(a.min_margin, b.min_margin);
  a.min_gram_det = std::min(a.min_gram_det, b.min_gram_det);
  a.max_gram_mismatch = std::max(a.max_gram_mismatch, b.max_gram_mismatch);
  a.gram_failures += b.gram_failures;
  a.proof_failures += b.proof_failures;
  a.lower_bound_checks += b.lower_bound_checks;
  a.lower_bound_failures += b.lower_bound_failures;
  a.lower_bound_min_slack = std::min(a.lower_bound_min_slack, b.lower_bound_min_slack);
  a.autocorr_states += b.autocorr_states;
  a.autocorr_max_error = std::max(a.autocorr_max_error, b.autocorr_max_error);
  a.max_modulus = std::max(a.max_modulus, b.max_modulus);
}

} // namespace detail

/// Random-state sweep over a (lambda_x, lambda_p) grid: the relation itself,
/// the Gram determinant two ways, the proof chain, the variance lower bound
/// on every characteristic-function sample, and the Fourier sum against the
/// autocorrelation form. Deterministic for any worker count.
inline SweepSummary random_state_sweep(const SweepConfig &cfg) {
  cfg.grid.validate();
  const GridSpec &g = cfg.grid;
  const detail::PhaseTable tx(cfg.lambda_x, g.n_points,
                              [&](std::size_t k) { return g.x(k); });
  const detail::PhaseTable tp(cfg.lambda_p, g.n_points,
                              [&](std::size_t k) { return g.p(k); });
  SweepSummary total;
  const std::size_t cells = cfg.lambda_x.size() * cfg.lambda_p.size();
  total.worst.resize(cells);
  total.worst_state.assign(cells, std::numeric_limits<std::size_t>::max());
  std::mutex m;
  parallel_for(cfg.n_states, cfg.workers, [&](std::size_t i) {
    const auto r = detail::sweep_state(cfg, i, tx, tp);
    std::lock_guard lock(m);
    detail::merge(total, r.part);
    for (std::size_t c = 0; c < cells; ++c) {
      const double mg = r.evals[c].margin();
      const double cur = total.worst[c].margin();
      const std::size_t cs = total.worst_state[c];
      if (cs == std::numeric_limits<std::size_t>::max() || mg < cur ||
          (mg == cur && i < cs)) {
        total.worst[c] = r.evals[c];
        total.worst_state[c] = i;
      }
    }
  });
  return total;
}

/// One point of the Gaussian curve: lambda_x = sqrt(a)/b, lambda_p =
/// sqrt(a) b / hbar with b^2 = 2 sigma_x^2, so gamma = a.
struct GaussianCurvePoint {
  double a = 0.0;
  double bound = 2.0;
  double capital_lambda = 2.0;
  double expected = 2.0; ///< 2 exp(-a/2)
  bool lower_bound_holds = true;
};

inline std::vector<GaussianCurvePoint>
gaussian_curve(std::span<const double> a_values, const GridSpec &grid,
               double sigma_x = 1.0, double bound_scale = 1.0) {
  const StateVector psi = make_gaussian({sigma_x, 0.0, 0.0}, grid);
  const Density rx = density(psi, Representation::position);
  const Density rp = density(psi, Representation::momentum);
  const double b = std::sqrt(2.0) * sigma_x;
  std::vector<GaussianCurvePoint> out;
  out.reserve(a_values.size());
  for (double a : a_values) {
    if (a < 0.0)
      throw InvalidArgument("curve parameter a must be non-negative");
    GaussianCurvePoint pt;
    pt.a = a;
    const double lx = std::sqrt(a) / b;
    const double lp = std::sqrt(a) * b / grid.hbar;
    const cplx phi = characteristic(rx, lx);
    const cplx phit = characteristic(rp, lp);
    pt.capital_lambda = std::norm(phi) + std::norm(phit);
    pt.bound = bound(grid.hbar * lx * lp) * bound_scale;
    pt.expected = 2.0 * std::exp(-0.5 * a);
    pt.lower_bound_holds =
        lower_bound_from(phi, lx, rx.mean(), rx.variance()).holds &&
        lower_bound_from(phit, lp, rp.mean(), rp.variance()).holds;
    out.push_back(pt);
  }
  return out;
}

} // namespace chur

#endif // CHUR_SWEEP_HPP
