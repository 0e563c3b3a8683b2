#ifndef CHUR_MASK_HPP
#define CHUR_MASK_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "charfunc.hpp"
#include "chur_core.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "grid.hpp"

namespace chur {

enum class MaskKind { top_hat, gaussian, periodic, tabulated };

inline const char *to_string(MaskKind k) {
  switch (k) {
  case MaskKind::top_hat:
    return "top_hat";
  case MaskKind::gaussian:
    return "gaussian";
  case MaskKind::periodic:
    return "periodic";
  case MaskKind::tabulated:
    return "tabulated";
  }
  return "unknown";
}

/// Detection aperture. The mask function M(x) is the transmittance |A(x)|^2,
/// except for complex-response tabulated masks where M is the tabulated
/// complex function itself (used only by the uncertainty relation, which
/// holds for any complex M).
///
/// top_hat: M = gain on [0, width]. gaussian: M = gain exp(-x^2 / (2 sigma^2)).
/// periodic: M = gain on [0, duty period) modulo period. tabulated: uniform
/// samples, linear between samples for pointwise use and band-limited for
/// the spectrum.
struct MaskSpec {
  MaskKind kind = MaskKind::top_hat;
  double width = 1.0;
  double sigma = 1.0;
  double period = 1.0;
  double duty = 0.5;
  double gain = 1.0;
  double kappa = 1.0; ///< maps momentum into a position-like variable

  // tabulated
  double origin = 0.0;
  double step = 0.0;
  std::vector<cplx> samples; ///< mask function values M(origin + i step)
  bool complex_response = false;
  /// Phase profile of the aperture amplitude. Stored for provenance only,
  /// the transmittance does not depend on it.
  std::vector<double> phase_profile;

  static MaskSpec top_hat(double width, double kappa = 1.0) {
    MaskSpec m;
    m.kind = MaskKind::top_hat;
    m.width = width;
    m.kappa = kappa;
    m.validate();
    return m;
  }

  static MaskSpec gaussian(double sigma, double kappa = 1.0) {
    MaskSpec m;
    m.kind = MaskKind::gaussian;
    m.sigma = sigma;
    m.kappa = kappa;
    m.validate();
    return m;
  }

  static MaskSpec periodic(double period, double duty, double kappa = 1.0) {
    MaskSpec m;
    m.kind = MaskKind::periodic;
    m.period = period;
    m.duty = duty;
    m.kappa = kappa;
    m.validate();
    return m;
  }

  /// Transmittance mask from complex aperture amplitudes A(x) = |A| e^{i phi};
  /// M = |A|^2 and the phase is kept in phase_profile.
  static MaskSpec from_aperture(double origin, double step,
                                std::span<const cplx> aperture,
                                double kappa = 1.0) {
    MaskSpec m;
    m.kind = MaskKind::tabulated;
    m.origin = origin;
    m.step = step;
    m.kappa = kappa;
    m.samples.reserve(aperture.size());
    m.phase_profile.reserve(aperture.size());
    for (const auto &a : aperture) {
      m.samples.emplace_back(std::norm(a), 0.0);
      m.phase_profile.push_back(std::arg(a));
    }
    m.validate();
    return m;
  }

  /// Complex-valued mask function sampled directly.
  static MaskSpec complex_function(double origin, double step,
                                   std::vector<cplx> values,
                                   double kappa = 1.0) {
    MaskSpec m;
    m.kind = MaskKind::tabulated;
    m.origin = origin;
    m.step = step;
    m.kappa = kappa;
    m.samples = std::move(values);
    m.complex_response = true;
    m.validate();
    return m;
  }

  MaskSpec scaled(double c) const {
    MaskSpec m = *this;
    if (kind == MaskKind::tabulated) {
      for (auto &s : m.samples)
        s *= c;
    } else {
      m.gain *= c;
    }
    m.validate();
    return m;
  }

  void validate() const {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
      throw InvalidArgument("mask kappa must be positive");
    if (!(gain >= 0.0 && gain <= 1.0))
      throw InvalidArgument("mask gain must lie in [0, 1]");
    switch (kind) {
    case MaskKind::top_hat:
      if (!(width > 0.0))
        throw InvalidArgument("top-hat width must be positive");
      break;
    case MaskKind::gaussian:
      if (!(sigma > 0.0))
        throw InvalidArgument("gaussian mask sigma must be positive");
      break;
    case MaskKind::periodic:
      if (!(period > 0.0) || !(duty > 0.0 && duty <= 1.0))
        throw InvalidArgument("periodic mask needs period > 0, duty in (0, 1]");
      break;
    case MaskKind::tabulated:
      if (samples.size() < 2 || !(step > 0.0))
        throw InvalidArgument("tabulated mask needs two or more uniform samples");
      for (const auto &s : samples) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
          throw InvalidArgument("tabulated mask value is not finite");
        if (std::abs(s) > 1.0 + 1e-12)
          throw InvalidArgument("tabulated mask exceeds unit modulus");
        if (!complex_response && (s.real() < -1e-15 || s.imag() != 0.0))
          throw InvalidArgument("transmittance must lie in [0, 1]");
      }
      break;
    }
  }

  bool is_real() const { return !complex_response; }

  /// Pointwise mask function.
  cplx value(double x) const {
    switch (kind) {
    case MaskKind::top_hat:
      return (x >= 0.0 && x <= width) ? gain : 0.0;
    case MaskKind::gaussian:
      return gain * std::exp(-x * x / (2.0 * sigma * sigma));
    case MaskKind::periodic: {
      const double f = x / period - std::floor(x / period);
      return f < duty ? gain : 0.0;
    }
    case MaskKind::tabulated: {
      const double t = (x - origin) / step;
      if (t < 0.0 || t > static_cast<double>(samples.size() - 1))
        return 0.0;
      const auto i = std::min(static_cast<std::size_t>(t), samples.size() - 2);
      const double f = t - static_cast<double>(i);
      return (1.0 - f) * samples[i] + f * samples[i + 1];
    }
    }
    return 0.0;
  }

  /// Unnormalized transform int exp(-i lambda u) M(u) du. Not defined for
  /// periodic masks.
  cplx spectrum(double lambda) const {
    switch (kind) {
    case MaskKind::top_hat:
      if (std::abs(lambda * width) < 1e-8)
        return gain * width * cplx(1.0, -0.5 * lambda * width);
      return gain * (1.0 - std::polar(1.0, -lambda * width)) /
             cplx(0.0, lambda);
    case MaskKind::gaussian:
      return gain * sigma * std::sqrt(2.0 * std::numbers::pi) *
             std::exp(-0.5 * lambda * lambda * sigma * sigma);
    case MaskKind::periodic:
      throw NonIntegrableMask("periodic masks have no integrable spectrum");
    case MaskKind::tabulated: {
      if (std::abs(lambda) > std::numbers::pi / step)
        return 0.0;
      // sum_i M_i z^i with z = exp(-i lambda step), by Horner's rule
      const cplx z = std::polar(1.0, -lambda * step);
      cplx acc = 0.0;
      for (auto it = samples.rbegin(); it != samples.rend(); ++it)
        acc = acc * z + *it;
      return acc * std::polar(step, -lambda * origin);
    }
    }
    return 0.0;
  }

  /// Unitary transform (1/sqrt(2 pi)) int exp(-i lambda u) M(u) du.
  cplx unitary_spectrum(double lambda) const {
    return spectrum(lambda) / std::sqrt(2.0 * std::numbers::pi);
  }

  /// int |M|^2 dx.
  double l2_norm_squared() const {
    switch (kind) {
    case MaskKind::top_hat:
      return gain * gain * width;
    case MaskKind::gaussian:
      return gain * gain * sigma * std::sqrt(std::numbers::pi);
    case MaskKind::periodic:
      return std::numeric_limits<double>::infinity();
    case MaskKind::tabulated: {
      double s = 0.0;
      for (const auto &v : samples)
        s += std::norm(v);
      return s * step;
    }
    }
    return 0.0;
  }

  /// Interval outside which M is zero (or below e^-37 of its peak).
  std::pair<double, double> support() const {
    switch (kind) {
    case MaskKind::top_hat:
      return {0.0, width};
    case MaskKind::gaussian:
      return {-8.6 * sigma, 8.6 * sigma};
    case MaskKind::periodic:
      return {-std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity()};
    case MaskKind::tabulated:
      return {origin, origin + step * static_cast<double>(samples.size() - 1)};
    }
    return {0.0, 0.0};
  }

  bool is_zero() const {
    if (gain == 0.0)
      return true;
    if (kind == MaskKind::tabulated)
      return std::all_of(samples.begin(), samples.end(),
                         [](const cplx &s) { return s == cplx(0.0); });
    return false;
  }
};

/// Detection probabilities for a set of mask locations y.
struct DetectionProfile {
  std::vector<double> y_samples;
  std::vector<double> q_values; ///< position readout Q(y)
  std::vector<double> p_values; ///< momentum readout P(y)
};

namespace detail {

/// Density of kappa p, the position-like variable of the momentum readout.
inline Density scaled_momentum_density(const StateVector &state, double kappa) {
  Density d = density(state, Representation::momentum);
  d.origin *= kappa;
  d.step *= kappa;
  for (auto &v : d.values)
    v /= kappa;
  return d;
}

/// Q(y) = int M(x + y) rho(x) dx as the conjugate-domain product
/// Q(y) = (1/L) sum_m M^(lambda_m) Phi(lambda_m) exp(i lambda_m y)
/// over a zero-padded periodic window of length L that holds the whole
/// support of Q and the requested y range.
class SpectralConvolution {
public:
  static constexpr std::size_t max_points = std::size_t{1} << 24;

  SpectralConvolution(const MaskSpec &mask, const Density &rho,
                      std::optional<std::pair<double, double>> y_range = {})
      : step_(rho.step) {
    if (mask.kind == MaskKind::periodic)
      throw NonIntegrableMask("periodic masks use the Fourier-series path");
    const std::size_t n = rho.values.size();
    const auto [s_lo, s_hi] = mask.support();
    const double a = rho.origin;
    const double span = static_cast<double>(n) * step_;
    double lo = s_lo - a - span - 2.0 * step_;
    double hi = s_hi - a + 2.0 * step_;
    if (y_range) {
      lo = std::min(lo, y_range->first);
      hi = std::max(hi, y_range->second);
    }
    // the periodic images of rho must not reach the mask for any y in range
    const double needed = std::max(hi - lo, span + (s_hi - s_lo)) + 4.0 * step_;
    std::size_t size = 1;
    while (static_cast<double>(size) * step_ < needed) {
      size <<= 1;
      if (size > max_points)
        throw DomainOverflow("detection window needs more than 2^24 points");
    }
    size_ = size;
    y_lo_ = lo;
    window_ = static_cast<double>(size_) * step_;

    std::vector<cplx> padded(size_, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      padded[j] = rho.values[j];
    // Phi(lambda_m) = h exp(i lambda_m a) sum_j rho_j exp(2 pi i m j / N)
    fft::transform(padded, padded, fft::Direction::backward);
    coeffs_.assign(size_, 0.0);
    const double mass = std::abs(step_ * padded[0]);
    for (std::size_t q = 0; q < size_; ++q) {
      const double lam = lambda(signed_mode(q));
      const cplx phi = step_ * std::polar(1.0, lam * a) * padded[q];
      // negligible density content, skip the mask spectrum
      if (std::abs(phi) <= 1e-17 * mass)
        continue;
      coeffs_[q] = mask.spectrum(lam) * phi / window_;
    }
  }

  /// int |Q|^2 dy from the conjugate side, sum |M~ Phi|^2 dlambda.
  double spectral_energy() const {
    double s = 0.0;
    for (const auto &c : coeffs_)
      s += std::norm(c);
    return s * window_;
  }

  double y_lo() const { return y_lo_; }
  double y_hi() const { return y_lo_ + window_; }
  double step() const { return step_; }
  std::size_t size() const { return size_; }

  /// Q on the window lattice y_k = y_lo + k step.
  std::vector<cplx> lattice_values() const {
    std::vector<cplx> g(size_);
    for (std::size_t q = 0; q < size_; ++q)
      g[q] = coeffs_[q] * std::polar(1.0, lambda(signed_mode(q)) * y_lo_);
    fft::transform(g, g, fft::Direction::backward);
    return g;
  }

  /// Q at an arbitrary y inside the window.
  cplx at(double y) const {
    if (y < y_lo_ - 1e-12 || y > y_lo_ + window_)
      throw DomainOverflow("mask location " + std::to_string(y) +
                           " is outside the representable window");
    double re = 0.0;
    double im = 0.0;
    for (std::size_t q = 0; q < size_; ++q) {
      const cplx v = coeffs_[q] * std::polar(1.0, lambda(signed_mode(q)) * y);
      re += v.real();
      im += v.imag();
    }
    return {re, im};
  }

private:
  long signed_mode(std::size_t q) const {
    return q < size_ / 2 ? static_cast<long>(q)
                         : static_cast<long>(q) - static_cast<long>(size_);
  }
  double lambda(long m) const {
    return 2.0 * std::numbers::pi * static_cast<double>(m) / window_;
  }

  double step_;
  std::size_t size_ = 0;
  double y_lo_ = 0.0;
  double window_ = 0.0;
  std::vector<cplx> coeffs_;
};

/// Periodic mask: Q(y) = sum_n a_n exp(i k_n y) Phi(k_n), k_n = 2 pi n / P.
inline std::vector<cplx> periodic_readout(const MaskSpec &mask,
                                          const Density &rho,
                                          std::span<const double> ys) {
  const double band = std::numbers::pi / rho.step;
  const long harmonics = static_cast<long>(std::ceil(band * mask.period /
                                                     (2.0 * std::numbers::pi)));
  std::vector<cplx> out(ys.size(), 0.0);
  for (long nh = -harmonics; nh <= harmonics; ++nh) {
    const double k = 2.0 * std::numbers::pi * static_cast<double>(nh) / mask.period;
    cplx a;
    if (nh == 0) {
      a = mask.duty;
    } else {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(nh);
      a = (1.0 - std::polar(1.0, -t * mask.duty)) / cplx(0.0, t);
    }
    a *= mask.gain;
    const cplx phi = characteristic(rho, k);
    for (std::size_t i = 0; i < ys.size(); ++i)
      out[i] += a * phi * std::polar(1.0, k * ys[i]);
  }
  return out;
}

inline std::vector<cplx> readout(const MaskSpec &mask, const Density &rho,
                                 std::span<const double> ys) {
  if (mask.kind == MaskKind::periodic)
    return periodic_readout(mask, rho, ys);
  std::optional<std::pair<double, double>> range;
  if (!ys.empty())
    range = std::make_pair(*std::min_element(ys.begin(), ys.end()),
                           *std::max_element(ys.begin(), ys.end()));
  SpectralConvolution conv(mask, rho, range);
  std::vector<cplx> out(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i)
    out[i] = conv.at(ys[i]);
  return out;
}

/// Plain Riemann sum of M(u_k + y) rho_k du.
inline std::vector<cplx> readout_direct(const MaskSpec &mask, const Density &rho,
                                        std::span<const double> ys) {
  std::vector<cplx> out(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < rho.values.size(); ++k) {
      const cplx v = mask.value(rho.coordinate(k) + ys[i]) * rho.values[k];
      re += v.real();
      im += v.imag();
    }
    out[i] = cplx(re, im) * rho.step;
  }
  return out;
}

inline std::vector<double> real_parts(const std::vector<cplx> &v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = v[i].real();
  return out;
}

inline void require_transmittance(const MaskSpec &mask) {
  if (!mask.is_real())
    throw InvalidArgument("detection profiles need a transmittance mask");
}

} // namespace detail

enum class ConvolutionPath { spectral, direct };

/// Q(y) = int M(x + y) rho(x) dx.
inline std::vector<double>
detect_position(const MaskSpec &mask, const StateVector &state,
                std::span<const double> y_grid,
                ConvolutionPath path = ConvolutionPath::spectral) {
  detail::require_transmittance(mask);
  const Density rho = density(state, Representation::position);
  return detail::real_parts(path == ConvolutionPath::spectral
                                ? detail::readout(mask, rho, y_grid)
                                : detail::readout_direct(mask, rho, y_grid));
}

/// P(y) = int M(kappa p + y) rho~(p) dp.
inline std::vector<double>
detect_momentum(const MaskSpec &mask, const StateVector &state,
                std::span<const double> y_grid,
                ConvolutionPath path = ConvolutionPath::spectral) {
  detail::require_transmittance(mask);
  const Density rho = detail::scaled_momentum_density(state, mask.kappa);
  return detail::real_parts(path == ConvolutionPath::spectral
                                ? detail::readout(mask, rho, y_grid)
                                : detail::readout_direct(mask, rho, y_grid));
}

/// Mask locations covering the mask support plus four standard deviations of
/// both readout densities, spaced by the position grid step.
inline std::vector<double> default_y_grid(const MaskSpec &mask,
                                          const StateVector &state) {
  auto [s_lo, s_hi] = mask.support();
  if (mask.kind == MaskKind::periodic) {
    s_lo = 0.0;
    s_hi = 2.0 * mask.period;
  }
  const Density rx = density(state, Representation::position);
  const Density ru = detail::scaled_momentum_density(state, mask.kappa);
  const double mx = rx.mean(), sx = std::sqrt(rx.variance());
  const double mu = ru.mean(), su = std::sqrt(ru.variance());
  const double lo = std::min(s_lo - (mx + 4.0 * sx), s_lo - (mu + 4.0 * su));
  const double hi = std::max(s_hi - (mx - 4.0 * sx), s_hi - (mu - 4.0 * su));
  const double h = state.grid().dx();
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;
  std::vector<double> ys(count);
  for (std::size_t i = 0; i < count; ++i)
    ys[i] = lo + static_cast<double>(i) * h;
  return ys;
}

inline DetectionProfile detection_profile(const MaskSpec &mask,
                                          const StateVector &state,
                                          std::span<const double> y_grid) {
  DetectionProfile prof;
  prof.y_samples.assign(y_grid.begin(), y_grid.end());
  prof.q_values = detect_position(mask, state, y_grid);
  prof.p_values = detect_momentum(mask, state, y_grid);
  return prof;
}

inline DetectionProfile detection_profile(const MaskSpec &mask,
                                          const StateVector &state) {
  const auto ys = default_y_grid(mask, state);
  return detection_profile(mask, state, ys);
}

struct TransformIdentityRow {
  double lambda = 0.0;
  cplx q_transform;  ///< quadrature transform of Q(y)
  cplx q_expected;   ///< M~(lambda) Phi(lambda)
  cplx p_transform;
  cplx p_expected;   ///< M~(lambda) Phi~(kappa lambda)
};

struct TransformIdentityReport {
  std::vector<TransformIdentityRow> rows;
  double max_error = 0.0;
  bool holds = true;
};

namespace detail {

/// (1/sqrt(2 pi)) sum_k exp(-i lambda y_k) f_k dy
inline cplx lattice_transform(const std::vector<cplx> &f, double y0, double h,
                              double lambda) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const cplx v = f[k] * std::polar(1.0, -lambda * (y0 + k * h));
    re += v.real();
    im += v.imag();
  }
  return cplx(re, im) * h / std::sqrt(2.0 * std::numbers::pi);
}

} // namespace detail

/// Checks that the unit-hbar transforms of Q and P factor as M~ Phi and
/// M~ Phi~(kappa .), with Q and P sampled in y-space and transformed by
/// quadrature.
inline TransformIdentityReport
mask_transform_identity(const MaskSpec &mask, const StateVector &state,
                        std::span<const double> lambdas,
                        double tolerance = 1e-8) {
  const Density rx = density(state, Representation::position);
  const Density ru = detail::scaled_momentum_density(state, mask.kappa);
  const detail::SpectralConvolution cq(mask, rx);
  const detail::SpectralConvolution cp(mask, ru);
  const auto q = cq.lattice_values();
  const auto p = cp.lattice_values();
  TransformIdentityReport rep;
  for (double l : lambdas) {
    TransformIdentityRow row;
    row.lambda = l;
    row.q_transform = detail::lattice_transform(q, cq.y_lo(), cq.step(), l);
    row.p_transform = detail::lattice_transform(p, cp.y_lo(), cp.step(), l);
    const cplx mt = mask.unitary_spectrum(l);
    row.q_expected = mt * characteristic(rx, l);
    row.p_expected = mt * characteristic(ru, l);
    rep.max_error = std::max({rep.max_error, std::abs(row.q_transform - row.q_expected),
                              std::abs(row.p_transform - row.p_expected)});
    rep.rows.push_back(row);
  }
  rep.holds = rep.max_error <= tolerance;
  return rep;
}

struct MaskRelationReport {
  double lhs = 0.0;            ///< int (|Q|^2 + |P|^2) dy
  double lhs_position = 0.0;
  double lhs_momentum = 0.0;
  double lhs_parseval = 0.0;   ///< int |M~|^2 (|Phi|^2 + |Phi~(kappa .)|^2) dlambda
  double rhs = 0.0;            ///< int |M~|^2 B(hbar kappa lambda^2) dlambda
  double mask_l2 = 0.0;        ///< int |M|^2 dx
  double lambda_cutoff = 0.0;
  double tail_mass = 0.0;      ///< mass of |M~|^2 beyond the cutoff
  bool cap_holds = true;       ///< rhs <= 2 int |M|^2 dx
  bool holds = true;           ///< lhs <= rhs (1 + 1e-6)
};

namespace detail {

/// Cutoff beyond which |M~|^2 stays below 1e-14 of its maximum, or nullopt
/// if the spectrum decays too slowly to be truncated there.
inline std::optional<double> spectral_cutoff(const MaskSpec &mask) {
  constexpr double rel = 1e-14;
  switch (mask.kind) {
  case MaskKind::gaussian:
    return std::sqrt(std::log(1.0 / rel)) / mask.sigma;
  case MaskKind::top_hat:
    return std::nullopt;
  case MaskKind::periodic:
    throw NonIntegrableMask("periodic masks are not square integrable");
  case MaskKind::tabulated: {
    // |M^|^2 on a 4x zero-padded lattice of the band
    std::size_t size = 1;
    while (size < 4 * mask.samples.size())
      size <<= 1;
    std::vector<cplx> padded(size, 0.0);
    std::copy(mask.samples.begin(), mask.samples.end(), padded.begin());
    fft::transform(padded, padded, fft::Direction::forward);
    double peak = 0.0;
    for (const auto &v : padded)
      peak = std::max(peak, std::norm(v));
    const double dl = 2.0 * std::numbers::pi / (static_cast<double>(size) * mask.step);
    double cutoff = 0.0;
    for (std::size_t q = 0; q < size; ++q) {
      const long m = q < size / 2 ? static_cast<long>(q)
                                  : static_cast<long>(q) - static_cast<long>(size);
      if (std::norm(padded[q]) >= rel * peak)
        cutoff = std::max(cutoff, std::abs(static_cast<double>(m)) * dl);
    }
    const double band = std::numbers::pi / mask.step;
    cutoff = std::min(band, cutoff + 2.0 * dl);
    if (cutoff >= band - 2.0 * dl)
      return std::nullopt;
    return cutoff;
  }
  }
  return std::nullopt;
}

} // namespace detail

/// Right-hand side of the detection-mask relation,
/// int |M~(lambda)|^2 B(hbar kappa lambda^2) dlambda.
///
/// Integrated with Gauss-Legendre panels whose edges sit on the kinks of B
/// (hbar kappa lambda^2 = 2 pi k). Spectra that do not decay below 1e-14 of
/// their peak are integrated up to a kink-aligned cutoff and the remaining
/// mass, known from Parseval, is weighted by the mean of B over a period,
/// 4/pi.
inline MaskRelationReport mask_rhs(const MaskSpec &mask, double hbar) {
  MaskRelationReport rep;
  if (mask.kind == MaskKind::periodic)
    throw NonIntegrableMask("periodic masks are not square integrable");
  rep.mask_l2 = mask.l2_norm_squared();
  if (mask.is_zero())
    return rep;
  const double c = hbar * mask.kappa;
  const auto [s_lo, s_hi] = mask.support();
  const double extent = std::max(s_hi - s_lo, mask.kind == MaskKind::tabulated
                                                  ? 2.0 * mask.step
                                                  : 1e-3);
  const double h_max = std::min(0.25, 0.4 / extent);

  std::optional<double> cutoff = detail::spectral_cutoff(mask);
  double lam_c = 0.0;
  bool tail = false;
  if (cutoff) {
    lam_c = *cutoff;
  } else {
    // separate the oscillation of B from that of the spectrum by a wide
    // margin, then align to a kink so the tail averages over whole periods
    double target = std::max(400.0 / extent, 100.0 * std::numbers::pi / (c * extent));
    if (mask.kind == MaskKind::tabulated)
      target = std::min(target, std::numbers::pi / mask.step);
    const double k = std::floor(c * target * target / (2.0 * std::numbers::pi));
    lam_c = k >= 1.0 ? std::sqrt(2.0 * std::numbers::pi * k / c) : target;
    tail = true;
  }
  rep.lambda_cutoff = lam_c;

  using GL = boost::math::quadrature::gauss<double, 10>;
  const auto &nodes = GL::abscissa();
  const auto &weights = GL::weights();
  double with_b = 0.0;
  double mass = 0.0;
  auto accumulate = [&](double lam, double w) {
    const double m2 = std::norm(mask.unitary_spectrum(lam)) +
                      std::norm(mask.unitary_spectrum(-lam));
    with_b += w * m2 * bound(c * lam * lam);
    mass += w * m2;
  };
  auto integrate_interval = [&](double l, double r) {
    const auto pieces = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil((r - l) / h_max)));
    const double w = (r - l) / static_cast<double>(pieces);
    for (std::size_t i = 0; i < pieces; ++i) {
      const double mid = l + (static_cast<double>(i) + 0.5) * w;
      const double half = 0.5 * w;
      // boost stores the non-negative half of the symmetric rule
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (nodes[k] == 0.0) {
          accumulate(mid, half * weights[k]);
        } else {
          accumulate(mid + half * nodes[k], half * weights[k]);
          accumulate(mid - half * nodes[k], half * weights[k]);
        }
      }
    }
  };
  double left = 0.0;
  for (std::size_t k = 1;; ++k) {
    const double kink = std::sqrt(2.0 * std::numbers::pi * static_cast<double>(k) / c);
    const double right = std::min(kink, lam_c);
    if (right > left)
      integrate_interval(left, right);
    left = right;
    if (right >= lam_c)
      break;
  }
  rep.rhs = with_b;
  if (tail) {
    rep.tail_mass = std::max(0.0, rep.mask_l2 - mass);
    rep.rhs += 4.0 / std::numbers::pi * rep.tail_mass;
  }
  rep.cap_holds = rep.rhs <= 2.0 * rep.mask_l2 * (1.0 + 1e-6);
  return rep;
}

/// Detection-mask uncertainty relation
/// int (|Q|^2 + |P|^2) dy <= int |M~|^2 B(hbar kappa lambda^2) dlambda.
/// The left side is a y-space quadrature; the conjugate-domain value is
/// reported alongside as lhs_parseval.
inline MaskRelationReport mask_uncertainty_relation(const MaskSpec &mask,
                                                    const StateVector &state) {
  MaskRelationReport rep = mask_rhs(mask, state.grid().hbar);
  if (mask.is_zero())
    return rep;
  const Density rx = density(state, Representation::position);
  const Density ru = detail::scaled_momentum_density(state, mask.kappa);
  const detail::SpectralConvolution cq(mask, rx);
  const detail::SpectralConvolution cp(mask, ru);
  for (const auto &v : cq.lattice_values())
    rep.lhs_position += std::norm(v);
  rep.lhs_position *= cq.step();
  for (const auto &v : cp.lattice_values())
    rep.lhs_momentum += std::norm(v);
  rep.lhs_momentum *= cp.step();
  rep.lhs = rep.lhs_position + rep.lhs_momentum;

  rep.lhs_parseval = cq.spectral_energy() + cp.spectral_energy();
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-6);
  return rep;
}

} // namespace chur

#endif // CHUR_MASK_HPP
