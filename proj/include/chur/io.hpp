#ifndef CHUR_IO_HPP
#define CHUR_IO_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "mask.hpp"

namespace chur::io {

/// %.17g, enough digits to round-trip any double.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Header "n_points length hbar center", then one "re im" line per sample.
/// Momentum-representation states are written in position representation.
inline void write_state(std::ostream &os, const StateVector &state) {
  const StateVector pos = to_position(state);
  const GridSpec &g = pos.grid();
  os << g.n_points << ' ' << fmt(g.length) << ' ' << fmt(g.hbar) << ' '
     << fmt(g.center) << '\n';
  for (std::size_t j = 0; j < g.n_points; ++j)
    os << fmt(pos[j].real()) << ' ' << fmt(pos[j].imag()) << '\n';
}

inline StateVector read_state(std::istream &is) {
  GridSpec g;
  if (!(is >> g.n_points >> g.length >> g.hbar >> g.center))
    throw InvalidArgument("state file header must be 'n_points length hbar center'");
  g.validate();
  std::vector<cplx> amps(g.n_points);
  for (std::size_t j = 0; j < g.n_points; ++j) {
    double re = 0.0, im = 0.0;
    if (!(is >> re >> im))
      throw InvalidArgument("state file ends after " + std::to_string(j) +
                            " of " + std::to_string(g.n_points) + " samples");
    amps[j] = {re, im};
  }
  return StateVector(g, std::move(amps));
}

inline void save_state(const std::string &path, const StateVector &state) {
  std::ofstream os(path);
  if (!os)
    throw InvalidArgument("cannot write state file " + path);
  write_state(os, state);
}

inline StateVector load_state(const std::string &path) {
  std::ifstream is(path);
  if (!is)
    throw InvalidArgument("cannot open state file " + path);
  return read_state(is);
}

/// Tabulated aperture: rows "x A" (real amplitude) or "x re im" (complex
/// amplitude), uniform x spacing. Lines starting with '#' are skipped.
/// Amplitudes become a transmittance |A|^2 unless as_complex_function is set,
/// in which case the values are taken as the complex mask function itself.
inline MaskSpec read_mask_table(std::istream &is, double kappa = 1.0,
                                bool as_complex_function = false) {
  std::vector<double> xs;
  std::vector<cplx> vals;
  std::string line;
  int columns = 0;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    for (auto &ch : line)
      if (ch == ',')
        ch = ' ';
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v)
      row.push_back(v);
    if (!ls.eof() || (row.size() != 2 && row.size() != 3))
      throw InvalidArgument("mask table line " + std::to_string(lineno) +
                            " needs 2 or 3 numeric columns");
    if (columns == 0)
      columns = static_cast<int>(row.size());
    else if (columns != static_cast<int>(row.size()))
      throw InvalidArgument("mask table mixes column counts at line " +
                            std::to_string(lineno));
    xs.push_back(row[0]);
    vals.emplace_back(row[1], row.size() == 3 ? row[2] : 0.0);
  }
  if (xs.size() < 2)
    throw InvalidArgument("mask table needs at least two rows");
  const double step = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  if (!(step > 0.0))
    throw InvalidArgument("mask table x values must increase");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (std::abs(xs[i] - xs[i - 1] - step) > 1e-9 * std::max(1.0, std::abs(step)))
      throw InvalidArgument("mask table spacing is not uniform at row " +
                            std::to_string(i + 1));
  if (as_complex_function)
    return MaskSpec::complex_function(xs.front(), step, std::move(vals), kappa);
  return MaskSpec::from_aperture(xs.front(), step, vals, kappa);
}

inline MaskSpec load_mask_table(const std::string &path, double kappa = 1.0,
                                bool as_complex_function = false) {
  std::ifstream is(path);
  if (!is)
    throw InvalidArgument("cannot open mask table " + path);
  return read_mask_table(is, kappa, as_complex_function);
}

/// Comma-separated row of %.17g values.
inline std::string csv_row(std::initializer_list<double> values) {
  std::string s;
  bool first = true;
  for (double v : values) {
    if (!first)
      s += ", ";
    s += fmt(v);
    first = false;
  }
  return s;
}

} // namespace chur::io

#endif // CHUR_IO_HPP
