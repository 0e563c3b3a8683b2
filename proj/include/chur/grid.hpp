#ifndef CHUR_GRID_HPP
#define CHUR_GRID_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fft.hpp"

namespace chur {

using cplx = std::complex<double>;

/// Uniform periodic grid shared by the position and momentum representations.
///
/// Position samples are x_j = center - length/2 + j dx. Momentum samples are
/// p_k = (k - n/2) dp with dp = 2 pi hbar / length, so the momentum grid is
/// centred on zero and dx dp n = 2 pi hbar.
struct GridSpec {
  std::size_t n_points = 4096;
  double length = 40.0;
  double hbar = 1.0;
  double center = 0.0;

  void validate() const {
    if (n_points < 2)
      throw InvalidArgument("grid needs at least two points");
    if (!(length > 0.0) || !std::isfinite(length))
      throw InvalidArgument("grid length must be positive");
    if (!(hbar > 0.0) || !std::isfinite(hbar))
      throw InvalidArgument("hbar must be positive");
    if (!std::isfinite(center))
      throw InvalidArgument("grid center must be finite");
  }

  double dx() const { return length / static_cast<double>(n_points); }
  double dp() const { return 2.0 * std::numbers::pi * hbar / length; }
  double x_min() const { return center - 0.5 * length; }
  double x(std::size_t j) const {
    return x_min() + static_cast<double>(j) * dx();
  }
  /// Signed frequency index of momentum sample k.
  long mode(std::size_t k) const {
    return static_cast<long>(k) - static_cast<long>(n_points / 2);
  }
  double p(std::size_t k) const { return static_cast<double>(mode(k)) * dp(); }
  double p_min() const { return p(0); }
  double momentum_span() const {
    return static_cast<double>(n_points) * dp();
  }

  friend bool operator==(const GridSpec &, const GridSpec &) = default;
};

enum class Representation { position, momentum };

inline const char *to_string(Representation rep) {
  return rep == Representation::position ? "position" : "momentum";
}

/// Samples of a probability density with Riemann weight `step`.
struct Density {
  double origin = 0.0;
  double step = 1.0;
  std::vector<double> values;

  double coordinate(std::size_t k) const {
    return origin + static_cast<double>(k) * step;
  }

  double total() const {
    double s = 0.0;
    for (double v : values)
      s += v;
    return s * step;
  }

  double mean() const {
    double s = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k)
      s += coordinate(k) * values[k];
    return s * step / total();
  }

  /// Second central moment by plain quadrature.
  double variance() const {
    const double mu = mean();
    double s = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double d = coordinate(k) - mu;
      s += d * d * values[k];
    }
    return s * step / total();
  }
};

/// Complex amplitudes of a pure state sampled on a GridSpec in either
/// representation. Norms are taken with the Riemann weight of the
/// representation (dx or dp).
class StateVector {
public:
  StateVector(GridSpec grid, std::vector<cplx> amplitudes,
              Representation rep = Representation::position)
      : grid_(std::move(grid)), amplitudes_(std::move(amplitudes)),
        rep_(rep) {
    grid_.validate();
    if (amplitudes_.size() != grid_.n_points)
      throw InvalidArgument("amplitude count " +
                            std::to_string(amplitudes_.size()) +
                            " does not match grid size " +
                            std::to_string(grid_.n_points));
  }

  const GridSpec &grid() const { return grid_; }
  Representation representation() const { return rep_; }
  std::span<const cplx> amplitudes() const { return amplitudes_; }
  std::size_t size() const { return amplitudes_.size(); }
  const cplx &operator[](std::size_t k) const { return amplitudes_[k]; }

  double step() const {
    return rep_ == Representation::position ? grid_.dx() : grid_.dp();
  }
  double coordinate(std::size_t k) const {
    return rep_ == Representation::position ? grid_.x(k) : grid_.p(k);
  }
  /// Extent of the periodic window in the current representation.
  double span() const {
    return rep_ == Representation::position ? grid_.length
                                            : grid_.momentum_span();
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto &a : amplitudes_)
      s += std::norm(a);
    return s * step();
  }

  Density density() const {
    Density d;
    d.origin = coordinate(0);
    d.step = step();
    d.values.resize(amplitudes_.size());
    for (std::size_t k = 0; k < amplitudes_.size(); ++k)
      d.values[k] = std::norm(amplitudes_[k]);
    return d;
  }

  /// Inner product <this|other> on the common grid.
  cplx inner(const StateVector &other) const {
    if (other.grid_ != grid_ || other.rep_ != rep_)
      throw InvalidArgument("inner product between different grids");
    cplx s = 0.0;
    for (std::size_t k = 0; k < amplitudes_.size(); ++k)
      s += std::conj(amplitudes_[k]) * other.amplitudes_[k];
    return s * step();
  }

  StateVector normalized() const {
    const double nrm = std::sqrt(norm_squared());
    if (!(nrm > 0.0))
      throw InvalidArgument("cannot normalize a zero state");
    std::vector<cplx> amps(amplitudes_);
    for (auto &a : amps)
      a /= nrm;
    return {grid_, std::move(amps), rep_};
  }

  /// Same amplitudes reinterpreted on a grid with a different hbar.
  StateVector with_hbar(double hbar) const {
    GridSpec g = grid_;
    g.hbar = hbar;
    return {g, amplitudes_, rep_};
  }

private:
  GridSpec grid_;
  std::vector<cplx> amplitudes_;
  Representation rep_;
};

/// Convex combination of pure states on one grid.
class MixedState {
public:
  struct Component {
    double weight;
    StateVector state;
  };

  explicit MixedState(std::vector<Component> components)
      : components_(std::move(components)) {
    if (components_.empty())
      throw InvalidArgument("mixed state needs at least one component");
    double total = 0.0;
    for (const auto &c : components_) {
      if (!(c.weight > 0.0 && c.weight <= 1.0))
        throw InvalidArgument("mixture weights must lie in (0, 1]");
      if (c.state.grid() != components_.front().state.grid())
        throw InvalidArgument("mixture components live on different grids");
      total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw InvalidArgument("mixture weights must sum to one");
  }

  const std::vector<Component> &components() const { return components_; }
  const GridSpec &grid() const { return components_.front().state.grid(); }

private:
  std::vector<Component> components_;
};

/// Momentum-representation amplitudes:
/// psi~(p_k) = dx / sqrt(2 pi hbar) sum_j exp(-i p_k x_j / hbar) psi(x_j).
inline StateVector to_momentum(const StateVector &state) {
  if (state.representation() == Representation::momentum)
    return state;
  const GridSpec &g = state.grid();
  const std::size_t n = g.n_points;
  std::vector<cplx> spectrum =
      fft::transform(state.amplitudes(), fft::Direction::forward);
  const double scale =
      g.dx() / std::sqrt(2.0 * std::numbers::pi * g.hbar);
  const double origin_phase = -2.0 * std::numbers::pi * g.x_min() / g.length;
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long m = g.mode(k);
    const std::size_t q =
        static_cast<std::size_t>((m + static_cast<long>(n)) % static_cast<long>(n));
    out[k] = scale * std::polar(1.0, origin_phase * static_cast<double>(m)) *
             spectrum[q];
  }
  return {g, std::move(out), Representation::momentum};
}

/// Inverse of to_momentum.
inline StateVector to_position(const StateVector &state) {
  if (state.representation() == Representation::position)
    return state;
  const GridSpec &g = state.grid();
  const std::size_t n = g.n_points;
  const double origin_phase = 2.0 * std::numbers::pi * g.x_min() / g.length;
  std::vector<cplx> folded(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long m = g.mode(k);
    const std::size_t q =
        static_cast<std::size_t>((m + static_cast<long>(n)) % static_cast<long>(n));
    folded[q] = std::polar(1.0, origin_phase * static_cast<double>(m)) *
                state[k];
  }
  fft::transform(folded, folded, fft::Direction::backward);
  const double scale =
      g.dp() / std::sqrt(2.0 * std::numbers::pi * g.hbar);
  for (auto &a : folded)
    a *= scale;
  return {g, std::move(folded), Representation::position};
}

inline StateVector to_representation(const StateVector &state,
                                     Representation rep) {
  return rep == Representation::position ? to_position(state)
                                         : to_momentum(state);
}

/// Returns the band-limited periodic interpolant of f(u + shift), where u is
/// the coordinate of the state's own representation. The shift is applied
/// as a phase ramp in the conjugate representation, so the result is unitary
/// and exact for integer multiples of the grid step.
inline StateVector translate(const StateVector &state, double shift) {
  if (!std::isfinite(shift) || std::abs(shift) >= 0.25 * state.span())
    throw ShiftTooLarge("shift " + std::to_string(shift) +
                        " reaches a quarter of the periodic window " +
                        std::to_string(state.span()));
  if (shift == 0.0)
    return state;
  const GridSpec &g = state.grid();
  const std::size_t n = g.n_points;
  if (state.representation() == Representation::position) {
    StateVector mom = to_momentum(state);
    std::vector<cplx> amps(mom.amplitudes().begin(), mom.amplitudes().end());
    for (std::size_t k = 0; k < n; ++k)
      amps[k] *= std::polar(1.0, g.p(k) * shift / g.hbar);
    return to_position(StateVector(g, std::move(amps), Representation::momentum));
  }
  StateVector pos = to_position(state);
  std::vector<cplx> amps(pos.amplitudes().begin(), pos.amplitudes().end());
  for (std::size_t j = 0; j < n; ++j)
    amps[j] *= std::polar(1.0, -g.x(j) * shift / g.hbar);
  return to_momentum(StateVector(g, std::move(amps), Representation::position));
}

inline Density density(const StateVector &state, Representation rep) {
  return to_representation(state, rep).density();
}

/// Weight-averaged density of a mixture.
inline Density density(const MixedState &state, Representation rep) {
  Density out;
  for (const auto &c : state.components()) {
    Density d = density(c.state, rep);
    if (out.values.empty()) {
      out.origin = d.origin;
      out.step = d.step;
      out.values.assign(d.values.size(), 0.0);
    }
    for (std::size_t k = 0; k < d.values.size(); ++k)
      out.values[k] += c.weight * d.values[k];
  }
  return out;
}

inline double variance(const StateVector &state, Representation rep) {
  return density(state, rep).variance();
}

inline double variance(const MixedState &state, Representation rep) {
  return density(state, rep).variance();
}

inline double mean(const StateVector &state, Representation rep) {
  return density(state, rep).mean();
}

} // namespace chur

#endif // CHUR_GRID_HPP
