#ifndef CHUR_CLI_CLI_HPP
#define CHUR_CLI_CLI_HPP

// Command-line driver. Exit codes: 0 all relations hold, 1 violation found,
// 2 usage or configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chur/chur.hpp"

namespace chur::cli {

using json = nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_violation = 1;
constexpr int exit_config = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string> &commands() {
  static const std::vector<std::string> c{"verify", "figure1",    "sweep", "mask",
                                          "qubit",  "finite-dim", "lqc",   "tightness"};
  return c;
}

inline std::string section_name(const std::string &command) {
  return command == "finite-dim" ? "finite_dim" : command;
}

inline json default_state() {
  return {{"kind", "gaussian"},  {"sigma_x", 1.0},      {"center_x", 0.0},
          {"center_p", 0.0},     {"period", 1.0},       {"tooth_sigma", 0.005},
          {"half_teeth", 50},    {"envelope_sigma", 20.0}, {"n_modes", 32},
          {"mode_scale", 1.0},   {"seed", 0},           {"path", ""}};
}

/// Every accepted key with its default; doubles as the schema. A null default
/// accepts any value.
inline json default_config() {
  return {
      {"grid", {{"n_points", 4096}, {"length", 40.0}, {"hbar", 1.0}, {"center", 0.0}}},
      {"seed", 0},
      {"workers", 0},
      {"tolerance", 1e-9},
      {"out", ""},
      {"verify",
       {{"n_states", 1000},
        {"n_modes", 32},
        {"mode_scale", 1.0},
        {"lambda_min", -5.0},
        {"lambda_max", 5.0},
        {"lambda_count", 21},
        {"autocorr_states", 100}}},
      {"figure1",
       {{"a_min", 0.01}, {"a_max", 10.0}, {"a_count", 50}, {"a_values", nullptr},
        {"sigma_x", 1.0}}},
      {"sweep",
       {{"state", default_state()},
        {"representation", "position"},
        {"lambda_min", -5.0},
        {"lambda_max", 5.0},
        {"lambda_count", 101}}},
      {"mask",
       {{"kind", "top_hat"},
        {"width", 1.0},
        {"sigma", 1.0},
        {"period", 1.0},
        {"duty", 0.5},
        {"kappa", 1.0},
        {"path", ""},
        {"complex", false},
        {"state", default_state()},
        {"y_min", nullptr},
        {"y_max", nullptr},
        {"y_count", 201}}},
      {"qubit",
       {{"state", default_state()},
        {"lambda_min", -5.0},
        {"lambda_max", 5.0},
        {"lambda_count", 21},
        {"shots", 0}}},
      {"finite_dim", {{"dimensions", {2, 3, 4, 8, 16, 64}}, {"samples", 100000}}},
      {"lqc",
       {{"q_constant", 1.0}, {"lambda_b", {0.1, 1.0, 10.0}}, {"state", default_state()}}},
      {"tightness",
       {{"gammas", {0.1, 1.5707963267948966, 3.141592653589793}},
        {"family", "gaussian"},
        {"split", "symmetric"},
        {"ratio", 1.0},
        {"ratio_range", 16.0},
        {"max_evaluations", 2000},
        {"restarts", 5},
        {"grid", nullptr}}},
  };
}

inline std::string type_name(const json &j) {
  if (j.is_number())
    return "a number";
  if (j.is_string())
    return "a string";
  if (j.is_boolean())
    return "a boolean";
  if (j.is_array())
    return "an array";
  if (j.is_object())
    return "an object";
  return "null";
}

/// Overlays `user` on `base`; keys absent from `base` and type mismatches are
/// configuration errors naming the dotted key.
inline void merge_config(json &base, const json &user, const std::string &prefix) {
  if (!user.is_object())
    throw ConfigError("configuration " + (prefix.empty() ? "root" : "'" + prefix + "'") +
                      " must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key()))
      throw ConfigError("unknown configuration key '" + key + "'");
    json &slot = base[it.key()];
    const json &val = it.value();
    if (slot.is_null()) {
      slot = val;
    } else if (slot.is_object()) {
      merge_config(slot, val, key);
    } else if (slot.is_number() && val.is_number()) {
      slot = val;
    } else if (slot.type() == val.type()) {
      slot = val;
    } else {
      throw ConfigError("configuration key '" + key + "' must be " + type_name(slot) +
                        ", got " + type_name(val));
    }
  }
}

template <class T> T get(const json &j, const std::string &key, const std::string &where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &) {
    throw ConfigError("configuration key '" + where + "." + key + "' has an invalid value");
  }
}

inline double number(const json &j, const std::string &key, const std::string &where) {
  return get<double>(j, key, where);
}

inline std::size_t count(const json &j, const std::string &key, const std::string &where) {
  const double v = number(j, key, where);
  if (!(v >= 0.0) || v != std::floor(v))
    throw ConfigError("configuration key '" + where + "." + key +
                      "' must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

inline std::vector<double> numbers(const json &j, const std::string &key,
                                   const std::string &where) {
  return get<std::vector<double>>(j, key, where);
}

inline GridSpec grid_from(const json &g, const std::string &where) {
  GridSpec s;
  s.n_points = count(g, "n_points", where);
  s.length = number(g, "length", where);
  s.hbar = number(g, "hbar", where);
  s.center = number(g, "center", where);
  try {
    s.validate();
  } catch (const Error &e) {
    throw ConfigError(where + ": " + e.what());
  }
  return s;
}

inline StateVector state_from(const json &s, const GridSpec &grid, const std::string &where) {
  const auto kind = get<std::string>(s, "kind", where);
  if (kind == "gaussian")
    return make_gaussian({number(s, "sigma_x", where), number(s, "center_x", where),
                          number(s, "center_p", where)},
                         grid);
  if (kind == "comb")
    return make_comb({number(s, "period", where), number(s, "tooth_sigma", where),
                      static_cast<int>(count(s, "half_teeth", where)),
                      number(s, "envelope_sigma", where)},
                     grid);
  if (kind == "random")
    return make_random({static_cast<int>(count(s, "n_modes", where)),
                        number(s, "mode_scale", where), count(s, "seed", where)},
                       grid);
  if (kind == "file") {
    const auto path = get<std::string>(s, "path", where);
    if (!std::filesystem::exists(path))
      throw ConfigError("state file '" + path + "' does not exist");
    return io::load_state(path);
  }
  throw ConfigError("configuration key '" + where +
                    ".kind' must be gaussian, comb, random or file");
}

struct Report {
  std::string command;
  json config;
  std::vector<std::pair<std::string, std::string>> fields;
  std::string csv_header;
  std::vector<std::string> csv_rows;
  bool holds = true;

  void add(const std::string &k, const std::string &v) { fields.emplace_back(k, v); }
  void add(const std::string &k, double v) { fields.emplace_back(k, io::fmt(v)); }
  void add(const std::string &k, std::size_t v) {
    fields.emplace_back(k, std::to_string(v));
  }
  void add(const std::string &k, bool v) { fields.emplace_back(k, v ? "true" : "false"); }

  std::string summary() const {
    std::ostringstream os;
    os << "version: " << version_string << '\n';
    os << "command: " << command << '\n';
    os << "config: " << config.dump() << '\n';
    for (const auto &[k, v] : fields)
      os << k << ": " << v << '\n';
    os << "verdict: " << (holds ? "holds" : "violation") << '\n';
    return os.str();
  }

  std::string csv() const {
    std::string s = "# " + std::string(version_string) + " " + command + " " +
                    config.dump() + "\n" + csv_header + "\n";
    for (const auto &r : csv_rows)
      s += r + "\n";
    return s;
  }
};

struct Context {
  json config;
  GridSpec grid;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double tolerance = 1e-9;
  double bound_scale = 1.0;
};

inline std::string eval_row(const ChurEvaluation &e) {
  return io::csv_row({e.lambda_x, e.lambda_p, e.gamma, std::abs(e.phi),
                      std::abs(e.phi_tilde), e.capital_lambda, e.bound, e.margin(),
                      e.omega ? std::abs(*e.omega) : 0.0, e.gram_det ? *e.gram_det : 0.0});
}

inline void cmd_verify(const Context &ctx, Report &rep) {
  const json &c = ctx.config["verify"];
  const std::string w = "verify";
  SweepConfig sc;
  sc.grid = ctx.grid;
  sc.n_states = count(c, "n_states", w);
  sc.n_modes = static_cast<int>(count(c, "n_modes", w));
  sc.mode_scale = number(c, "mode_scale", w);
  sc.seed = ctx.seed;
  sc.lambda_x = sc.lambda_p =
      linspace(number(c, "lambda_min", w), number(c, "lambda_max", w),
               count(c, "lambda_count", w));
  sc.autocorr_states = count(c, "autocorr_states", w);
  sc.workers = ctx.workers;
  sc.bound_scale = ctx.bound_scale;
  sc.tolerance = ctx.tolerance;
  const SweepSummary s = random_state_sweep(sc);
  rep.add("states", s.states);
  rep.add("evaluations", s.evaluations);
  rep.add("violations", s.violations);
  rep.add("min_margin", s.min_margin);
  rep.add("min_gram_det", s.min_gram_det);
  rep.add("gram_failures", s.gram_failures);
  rep.add("max_gram_mismatch", s.max_gram_mismatch);
  rep.add("proof_chain_failures", s.proof_failures);
  rep.add("lower_bound_checks", s.lower_bound_checks);
  rep.add("lower_bound_failures", s.lower_bound_failures);
  rep.add("autocorr_states", s.autocorr_states);
  rep.add("autocorr_max_error", s.autocorr_max_error);
  rep.add("max_modulus", s.max_modulus);
  rep.csv_header = "lambda_x, lambda_p, gamma, abs_phi, abs_phi_tilde, capital_lambda, "
                   "bound, margin, abs_omega, gram_det";
  for (const auto &e : s.worst)
    rep.csv_rows.push_back(eval_row(e));
  rep.holds = s.all_hold();
}

inline void cmd_figure1(const Context &ctx, Report &rep) {
  const json &c = ctx.config["figure1"];
  const std::string w = "figure1";
  const std::vector<double> a =
      c["a_values"].is_null()
          ? logspace(number(c, "a_min", w), number(c, "a_max", w), count(c, "a_count", w))
          : numbers(c, "a_values", w);
  const auto pts = gaussian_curve(a, ctx.grid, number(c, "sigma_x", w), ctx.bound_scale);
  rep.csv_header = "gamma, bound, gaussian_lambda, closed_form";
  std::size_t below = 0;
  double max_dev = 0.0;
  bool lb = true;
  for (const auto &p : pts) {
    rep.csv_rows.push_back(io::csv_row({p.a, p.bound, p.capital_lambda, p.expected}));
    if (p.capital_lambda <= p.bound + ctx.tolerance)
      ++below;
    max_dev = std::max(max_dev, std::abs(p.capital_lambda - p.expected));
    lb = lb && p.lower_bound_holds;
  }
  rep.add("points", pts.size());
  rep.add("points_below_bound", below);
  rep.add("max_closed_form_deviation", max_dev);
  rep.add("lower_bound_holds", lb);
  rep.holds = below == pts.size() && lb;
}

inline void cmd_sweep(const Context &ctx, Report &rep) {
  const json &c = ctx.config["sweep"];
  const std::string w = "sweep";
  const StateVector psi = state_from(c["state"], ctx.grid, w + ".state");
  const auto r = get<std::string>(c, "representation", w);
  if (r != "position" && r != "momentum")
    throw ConfigError("configuration key 'sweep.representation' must be position or momentum");
  const Representation rp = r == "position" ? Representation::position : Representation::momentum;
  const auto lambdas = linspace(number(c, "lambda_min", w), number(c, "lambda_max", w),
                                count(c, "lambda_count", w));
  const Density rho = density(psi, rp);
  const double mu = rho.mean(), var = rho.variance();
  rep.csv_header = "lambda, re, im, abs";
  double max_abs = 0.0;
  std::size_t lb_fail = 0;
  for (const auto &s : char_sweep(psi, lambdas, rp)) {
    rep.csv_rows.push_back(
        io::csv_row({s.lambda, s.value.real(), s.value.imag(), std::abs(s.value)}));
    max_abs = std::max(max_abs, std::abs(s.value));
    if (!lower_bound_from(s.value, s.lambda, mu, var).holds)
      ++lb_fail;
  }
  rep.add("representation", r);
  rep.add("mean", mu);
  rep.add("variance", var);
  rep.add("max_abs", max_abs);
  rep.add("lower_bound_failures", lb_fail);
  rep.holds = max_abs <= 1.0 + 1e-12 && lb_fail == 0;
}

inline MaskSpec mask_from(const json &c) {
  const std::string w = "mask";
  const auto kind = get<std::string>(c, "kind", w);
  const double kappa = number(c, "kappa", w);
  if (kind == "top_hat")
    return MaskSpec::top_hat(number(c, "width", w), kappa);
  if (kind == "gaussian")
    return MaskSpec::gaussian(number(c, "sigma", w), kappa);
  if (kind == "periodic")
    return MaskSpec::periodic(number(c, "period", w), number(c, "duty", w), kappa);
  if (kind == "tabulated") {
    const auto path = get<std::string>(c, "path", w);
    if (!std::filesystem::exists(path))
      throw ConfigError("mask table '" + path + "' does not exist");
    return io::load_mask_table(path, kappa, get<bool>(c, "complex", w));
  }
  throw ConfigError(
      "configuration key 'mask.kind' must be top_hat, gaussian, periodic or tabulated");
}

inline void cmd_mask(const Context &ctx, Report &rep) {
  const json &c = ctx.config["mask"];
  const std::string w = "mask";
  const MaskSpec mask = mask_from(c);
  const StateVector psi = state_from(c["state"], ctx.grid, w + ".state");
  rep.add("mask_kind", std::string(to_string(mask.kind)));
  rep.holds = true;
  if (mask.is_real()) {
    std::vector<double> ys;
    if (c["y_min"].is_null() != c["y_max"].is_null())
      throw ConfigError("configuration keys 'mask.y_min' and 'mask.y_max' go together");
    if (c["y_min"].is_null())
      ys = default_y_grid(mask, psi);
    else
      ys = linspace(number(c, "y_min", w), number(c, "y_max", w), count(c, "y_count", w));
    const auto prof = detection_profile(mask, psi, ys);
    rep.csv_header = "y, q, p";
    for (std::size_t i = 0; i < ys.size(); ++i)
      rep.csv_rows.push_back(io::csv_row({ys[i], prof.q_values[i], prof.p_values[i]}));
    rep.add("profile_points", ys.size());
  } else {
    rep.csv_header = "y, q, p";
    rep.add("profile_points", std::size_t{0});
  }
  if (mask.kind == MaskKind::periodic) {
    rep.add("relation", std::string("not applicable, periodic mask is not square integrable"));
    return;
  }
  const auto r = mask_uncertainty_relation(mask, psi);
  const double lhs = r.lhs, rhs = r.rhs * ctx.bound_scale;
  rep.add("lhs", lhs);
  rep.add("lhs_parseval", r.lhs_parseval);
  rep.add("rhs", rhs);
  rep.add("mask_l2", r.mask_l2);
  rep.add("cap_holds", r.cap_holds);
  rep.holds = lhs <= rhs * (1.0 + 1e-6) && r.cap_holds;
}

inline void cmd_qubit(const Context &ctx, Report &rep) {
  const json &c = ctx.config["qubit"];
  const std::string w = "qubit";
  const StateVector psi = state_from(c["state"], ctx.grid, w + ".state");
  const auto lambdas = linspace(number(c, "lambda_min", w), number(c, "lambda_max", w),
                                count(c, "lambda_count", w));
  const std::size_t shots = count(c, "shots", w);
  rep.csv_header =
      "lambda_p, p_plus, p_minus, p_plus_i, p_minus_i, re_est, im_est, stderr";
  double max_err = 0.0, max_z = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double lp = lambdas[i];
    const cplx exact = char_momentum(psi, lp);
    QubitReadout r;
    double err = 0.0;
    if (shots == 0) {
      r = qubit_exact(psi, lp);
      err = std::abs(r.reconstructed - exact);
      max_err = std::max(max_err, err);
    } else {
      r = qubit_sampled(psi, lp, shots, ctx.seed + i);
      err = std::abs(r.reconstructed - exact) / (5.0 / std::sqrt(static_cast<double>(shots)));
      max_z = std::max(max_z, err);
    }
    rep.csv_rows.push_back(io::csv_row({lp, r.p_plus, r.p_minus, r.p_plus_i, r.p_minus_i,
                                        r.reconstructed.real(), r.reconstructed.imag(),
                                        r.stderr_estimate()}));
  }
  rep.add("shots", shots);
  if (shots == 0) {
    rep.add("max_reconstruction_error", max_err);
    rep.holds = max_err <= 1e-10;
  } else {
    rep.add("max_error_over_5_by_sqrt_shots", max_z);
    rep.holds = max_z <= 1.0;
  }
}

inline void cmd_finite_dim(const Context &ctx, Report &rep) {
  const json &c = ctx.config["finite_dim"];
  const std::string w = "finite_dim";
  const auto dims = numbers(c, "dimensions", w);
  const std::size_t samples = count(c, "samples", w);
  rep.csv_header = "d, phi, lhs_max, bound";
  std::vector<FiniteDimSweep> rows(dims.size());
  for (double d : dims)
    if (d < 2 || d != std::floor(d) || d > 4096)
      throw ConfigError("configuration key 'finite_dim.dimensions' needs integers in [2, 4096]");
  parallel_for(dims.size(), ctx.workers, [&](std::size_t i) {
    rows[i] = finite_dim_sweep(clock_and_shift(static_cast<int>(dims[i])), samples,
                               ctx.seed + i);
  });
  std::size_t violations = 0;
  for (const auto &r : rows) {
    const double b = r.bound * ctx.bound_scale;
    rep.csv_rows.push_back(io::csv_row({static_cast<double>(r.dimension), r.phase, r.lhs_max, b}));
    if (r.lhs_max > b + 1e-12)
      ++violations;
  }
  rep.add("samples_per_dimension", samples);
  rep.add("dimensions_violating", violations);
  rep.holds = violations == 0;
}

inline void cmd_lqc(const Context &ctx, Report &rep) {
  const json &c = ctx.config["lqc"];
  const std::string w = "lqc";
  const StateVector psi = state_from(c["state"], ctx.grid, w + ".state");
  const double q = number(c, "q_constant", w);
  rep.csv_header =
      "lambda_b, sigma_v, abs_holonomy, rhs, lambda_v, chain_lhs, chain_rhs, holds";
  bool all = true;
  for (double lb : numbers(c, "lambda_b", w)) {
    const auto r = lqc_bound_check({q, lb, psi});
    const double rhs = r.rhs / ctx.bound_scale;
    const bool chain = r.chain_lhs <= r.chain_rhs * ctx.bound_scale + 1e-9;
    const bool ok = r.sigma_v >= rhs - 1e-9 && chain;
    all = all && ok;
    rep.csv_rows.push_back(io::csv_row({lb, r.sigma_v, std::abs(r.holonomy), rhs, r.lambda_v,
                                        r.chain_lhs, r.chain_rhs, ok ? 1.0 : 0.0}));
  }
  rep.add("hbar_q", ctx.grid.hbar * q);
  rep.holds = all;
}

inline void cmd_tightness(const Context &ctx, Report &rep) {
  const json &c = ctx.config["tightness"];
  const std::string w = "tightness";
  TightnessQuery q;
  const auto family = get<std::string>(c, "family", w);
  if (family == "gaussian")
    q.family = StateFamily::gaussian;
  else if (family == "comb")
    q.family = StateFamily::comb;
  else
    throw ConfigError("configuration key 'tightness.family' must be gaussian or comb");
  if (!c["grid"].is_null()) {
    json g = default_config()["grid"];
    merge_config(g, c["grid"], "tightness.grid");
    q.grid = grid_from(g, "tightness.grid");
  } else {
    q.grid = q.family == StateFamily::comb ? default_comb_grid() : ctx.grid;
    q.grid.hbar = ctx.grid.hbar;
  }
  const auto split = get<std::string>(c, "split", w);
  if (split == "symmetric")
    q.split = LambdaSplit::symmetric;
  else if (split == "fixed_ratio")
    q.split = LambdaSplit::fixed_ratio;
  else if (split == "search")
    q.split = LambdaSplit::search;
  else
    throw ConfigError(
        "configuration key 'tightness.split' must be symmetric, fixed_ratio or search");
  q.ratio = number(c, "ratio", w);
  q.ratio_range = number(c, "ratio_range", w);
  q.max_evaluations = count(c, "max_evaluations", w);
  q.restarts = count(c, "restarts", w);
  q.seed = ctx.seed;
  q.workers = ctx.workers;
  q.bound_scale = ctx.bound_scale;
  const auto results = gap_profile(numbers(c, "gammas", w), q);
  rep.csv_header = "gamma, bound, best_lambda_big, gap, family, params_json, evaluations";
  std::size_t bad = 0, exhausted = 0;
  for (const auto &r : results) {
    json params = json::object();
    for (const auto &[k, v] : r.best_params)
      params[k] = v;
    params["lambda_x"] = r.lambda_x;
    params["lambda_p"] = r.lambda_p;
    // params_json is quoted so its commas survive CSV parsing
    std::string pj = params.dump();
    std::string quoted = "\"";
    for (char ch : pj)
      quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    quoted += "\"";
    rep.csv_rows.push_back(io::csv_row({r.gamma, r.bound, r.best_lambda_big, r.gap}) + ", " +
                           to_string(r.family) + ", " + quoted + ", " +
                           std::to_string(r.evaluations));
    if (r.gap < -1e-9 || r.iterate_violations > 0)
      ++bad;
    if (r.budget_exhausted)
      ++exhausted;
  }
  rep.add("rows", results.size());
  rep.add("rows_violating", bad);
  rep.add("budget_exhausted_rows", exhausted);
  rep.holds = bad == 0;
}

inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Characteristic-function uncertainty relation toolkit", "chur"};
  std::string command, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid_n;
  std::optional<double> grid_length, hbar;
  std::optional<unsigned> workers;
  bool self_test = false;
  app.add_option("command", command, "verify | figure1 | sweep | mask | qubit | finite-dim | lqc | tightness")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--grid-n", grid_n, "grid points");
  app.add_option("--grid-length", grid_length, "grid length");
  app.add_option("--hbar", hbar, "value of hbar");
  app.add_option("--out", out_dir, "output directory for <command>.csv and <command>_summary.txt");
  app.add_option("--workers", workers, "worker threads (0 = available parallelism)");
  app.add_flag("--self-test", self_test, "scale every bound by 0.4 to exercise the failure path");
  app.set_version_flag("--version", version_string);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  Report rep;
  rep.command = command;
  try {
    json cfg = default_config();
    if (config_path.empty())
      if (const char *env = std::getenv("CHUR_DEFAULT_CONFIG"); env && *env)
        config_path = env;
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is)
        throw ConfigError("cannot open configuration file '" + config_path + "'");
      json user;
      try {
        user = json::parse(is, nullptr, true, true);
      } catch (const json::parse_error &e) {
        throw ConfigError("configuration file '" + config_path + "' is not valid JSON: " +
                          e.what());
      }
      merge_config(cfg, user, "");
    }
    if (seed)
      cfg["seed"] = *seed;
    if (grid_n)
      cfg["grid"]["n_points"] = *grid_n;
    if (grid_length)
      cfg["grid"]["length"] = *grid_length;
    if (hbar)
      cfg["grid"]["hbar"] = *hbar;
    if (workers)
      cfg["workers"] = *workers;
    if (!out_dir.empty())
      cfg["out"] = out_dir;

    Context ctx;
    ctx.config = cfg;
    ctx.grid = grid_from(cfg["grid"], "grid");
    ctx.seed = count(cfg, "seed", "root");
    const std::size_t wk = count(cfg, "workers", "root");
    ctx.workers = wk == 0 ? default_workers() : static_cast<unsigned>(wk);
    ctx.tolerance = number(cfg, "tolerance", "root");
    ctx.bound_scale = self_test ? 0.4 : 1.0;
    // the effective config of this command; worker count does not affect results
    rep.config = json::object();
    for (const char *k : {"grid", "seed", "tolerance", "out"})
      rep.config[k] = cfg[k];
    rep.config[section_name(command)] = cfg[section_name(command)];
    if (self_test)
      rep.config["self_test"] = true;

    if (command == "verify")
      cmd_verify(ctx, rep);
    else if (command == "figure1")
      cmd_figure1(ctx, rep);
    else if (command == "sweep")
      cmd_sweep(ctx, rep);
    else if (command == "mask")
      cmd_mask(ctx, rep);
    else if (command == "qubit")
      cmd_qubit(ctx, rep);
    else if (command == "finite-dim")
      cmd_finite_dim(ctx, rep);
    else if (command == "lqc")
      cmd_lqc(ctx, rep);
    else
      cmd_tightness(ctx, rep);

    const std::string dir = cfg["out"].get<std::string>();
    if (!dir.empty()) {
      std::filesystem::create_directories(dir);
      const auto base = std::filesystem::path(dir) / command;
      std::ofstream(base.string() + ".csv") << rep.csv();
      std::ofstream(base.string() + "_summary.txt") << rep.summary();
    }
    out << rep.summary();
  } catch (const ConfigError &e) {
    err << "chur: " << e.what() << '\n';
    return exit_config;
  } catch (const Error &e) {
    err << "chur: " << e.what() << '\n';
    return exit_config;
  } catch (const std::filesystem::filesystem_error &e) {
    err << "chur: " << e.what() << '\n';
    return exit_config;
  }
  return rep.holds ? exit_ok : exit_violation;
}

} // namespace chur::cli

#endif // CHUR_CLI_CLI_HPP
