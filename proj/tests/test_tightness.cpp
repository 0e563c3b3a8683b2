#include "catch_amalgamated.hpp"
#include "helpers.hpp"

using namespace chur;
using Catch::Approx;
using std::numbers::pi;

namespace {

TightnessQuery gaussian_query(double gamma) {
  TightnessQuery q;
  q.gamma = gamma;
  q.grid = testing::default_grid();
  q.max_evaluations = 400;
  return q;
}

double param(const TightnessResult &r, const std::string &name) {
  for (const auto &[k, v] : r.best_params)
    if (k == name)
      return v;
  FAIL("missing parameter " << name);
  return 0.0;
}

} // namespace

TEST_CASE("simplex minimizer") {
  auto rosen = [](const std::vector<double> &x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  SimplexOptions opt;
  opt.max_evaluations = 4000;
  const auto r = nelder_mead(rosen, {-1.2, 1.0}, {0.5, 0.5}, opt);
  CHECK(r.converged);
  CHECK(r.x[0] == Approx(1.0).margin(1e-5));
  CHECK(r.x[1] == Approx(1.0).margin(1e-5));
  CHECK(r.evaluations <= opt.max_evaluations);

  auto quad = [](const std::vector<double> &x) { return (x[0] - 3.0) * (x[0] - 3.0); };
  const auto q = nelder_mead(quad, {0.0}, {1.0});
  CHECK(q.x[0] == Approx(3.0).margin(1e-6));

  opt.max_evaluations = 20;
  const auto cut = nelder_mead(rosen, {-1.2, 1.0}, {0.5, 0.5}, opt);
  CHECK_FALSE(cut.converged);
  CHECK(cut.evaluations <= 20);
}

TEST_CASE("lambda split") {
  for (double g : {-2.0, 0.3, 5.0})
    for (double r : {0.25, 1.0, 3.0}) {
      const auto [lx, lp] = split_lambda(g, 0.7, r);
      CHECK(0.7 * lx * lp == Approx(g).epsilon(1e-14));
      CHECK(std::abs(lx / lp) == Approx(r * r).epsilon(1e-14));
    }
  const auto [zx, zp] = split_lambda(0.0, 1.0, 2.0);
  CHECK(zx == 0.0);
  CHECK(zp == 0.0);
}

TEST_CASE("Gaussian family maximum") {
  SECTION("interior optimum at gamma = 1") {
    // max over sigma of exp(-sigma^2) + exp(-1 / (4 sigma^2)) sits at sigma^2 = 1/2
    const auto r = maximize_lambda(gaussian_query(1.0));
    CHECK(r.best_lambda_big == Approx(2.0 * std::exp(-0.5)).margin(1e-9));
    CHECK(param(r, "sigma_x") == Approx(std::sqrt(0.5)).margin(1e-4));
    CHECK(r.bound == Approx(bound(1.0)).margin(1e-15));
    CHECK(r.gap == Approx(r.bound - r.best_lambda_big).margin(1e-15));
    CHECK(r.max_iterate_lambda <= r.bound + 1e-9);
    CHECK(r.iterate_violations == 0);
  }
  SECTION("small gamma closes the gap") {
    const auto r = maximize_lambda(gaussian_query(1e-4));
    CHECK(r.gap >= -1e-9);
    CHECK(r.gap <= 1e-6);
  }
  SECTION("gamma = pi approaches the bound of 1") {
    const auto sym = maximize_lambda(gaussian_query(pi));
    CHECK(sym.best_lambda_big <= 1.0 + 1e-9);
    CHECK(sym.best_lambda_big >= 0.99);
    TightnessQuery q = gaussian_query(pi);
    q.split = LambdaSplit::search;
    const auto srch = maximize_lambda(q);
    CHECK(srch.best_lambda_big >= sym.best_lambda_big);
    CHECK(srch.best_lambda_big <= 1.0 + 1e-9);
    CHECK(srch.max_iterate_lambda <= 1.0 + 1e-9);
    const double ratio = param(srch, "lambda_ratio");
    CHECK(ratio >= 1.0 / q.ratio_range);
    CHECK(ratio <= q.ratio_range);
  }
  SECTION("every result satisfies hbar lambda_x lambda_p = gamma") {
    for (auto split : {LambdaSplit::symmetric, LambdaSplit::fixed_ratio, LambdaSplit::search}) {
      TightnessQuery q = gaussian_query(2.2);
      q.split = split;
      q.ratio = 1.7;
      const auto r = maximize_lambda(q);
      CHECK(q.grid.hbar * r.lambda_x * r.lambda_p == Approx(2.2).epsilon(1e-12));
      CHECK(r.best_lambda_big <= r.bound + 1e-9);
    }
  }
}

TEST_CASE("tightness search is deterministic") {
  TightnessQuery q = gaussian_query(0.8);
  q.split = LambdaSplit::search;
  q.workers = 1;
  const auto a = maximize_lambda(q);
  q.workers = 4;
  const auto b = maximize_lambda(q);
  CHECK(a == b);
  q.seed = 99;
  const auto c = maximize_lambda(q);
  CHECK(c.best_lambda_big == Approx(a.best_lambda_big).margin(1e-8));
}

TEST_CASE("tightness argument validation") {
  TightnessQuery q = gaussian_query(1.0);
  q.max_evaluations = 16;
  CHECK_THROWS_AS(maximize_lambda(q), InvalidArgument);
  q = gaussian_query(1.0);
  q.restarts = 0;
  CHECK_THROWS_AS(maximize_lambda(q), InvalidArgument);
  q = gaussian_query(1.0);
  q.bounds = {{"a", 0.1, 1.0}, {"b", 0.1, 1.0}};
  CHECK_THROWS_AS(maximize_lambda(q), InvalidArgument);
  q = gaussian_query(1.0);
  q.split = LambdaSplit::fixed_ratio;
  q.ratio = 0.0;
  CHECK_THROWS_AS(maximize_lambda(q), InvalidArgument);
}

TEST_CASE("budget exhaustion is reported") {
  TightnessQuery q = gaussian_query(1.0);
  q.max_evaluations = 30;
  q.restarts = 2;
  const auto r = maximize_lambda(q);
  CHECK(r.budget_exhausted);
  CHECK(r.evaluations <= 30);
}

TEST_CASE("gap profile") {
  const auto templ = gaussian_query(0.0);
  CHECK(gap_profile({}, templ).empty());
  const auto prof = gap_profile({2.0, 0.5, 2.0 + 1e-13, 1.0}, templ);
  REQUIRE(prof.size() == 3);
  CHECK(prof[0].gamma == 0.5);
  CHECK(prof[1].gamma == 1.0);
  CHECK(prof[2].gamma == 2.0);
  for (const auto &r : prof) {
    CHECK(r.gap >= -1e-9);
    CHECK(r.bound == Approx(bound(r.gamma)).margin(1e-15));
  }
  // the Gaussian optimum 2 exp(-gamma / 2) decreases with gamma
  CHECK(prof[0].best_lambda_big > prof[1].best_lambda_big);
  CHECK(prof[1].best_lambda_big > prof[2].best_lambda_big);
}

TEST_CASE("comb family saturates the bound at gamma = 2 pi") {
  TightnessQuery q;
  q.gamma = 2.0 * pi;
  q.family = StateFamily::comb;
  q.grid = default_comb_grid();
  q.max_evaluations = 600;
  const auto r = maximize_lambda(q);
  CHECK(r.best_lambda_big >= 1.99);
  CHECK(r.best_lambda_big <= 2.0 + 1e-9);
  CHECK(r.iterate_violations == 0);
  CHECK(param(r, "half_teeth") >= 1.0);
  const double period = param(r, "period");
  const auto bounds = default_bounds(StateFamily::comb, q.grid);
  CHECK(period >= bounds[0].lo);
  CHECK(period <= bounds[0].hi);
}

TEST_CASE("comb teeth count") {
  const GridSpec g{131072, 280.0, 1.0, 0.0};
  CHECK(comb_half_teeth({1.0, 0.005, 0, 20.0}, g) == 59);
  CHECK(comb_half_teeth({1.0, 0.005, 0, 5.0}, g) == 20);
  // geometry caps a wide envelope
  const int k = comb_half_teeth({1.0, 0.005, 0, 30.0}, g);
  CHECK((2.0 * k + 1.0) * 1.0 + 8.0 * 30.0 <= g.length);
}
