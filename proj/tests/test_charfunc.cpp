#include "catch_amalgamated.hpp"
#include "helpers.hpp"

using namespace chur;
using Catch::Approx;

namespace {
const GridSpec grid = testing::default_grid();
const std::vector<double> lambdas = linspace(-5.0, 5.0, 21);
}

TEST_CASE("position characteristic function") {
  const StateVector gs = make_gaussian({1.0, 0.0, 0.0}, grid);
  const StateVector rnd = make_random({32, 1.0, 11}, grid);
  CHECK(std::abs(char_position(rnd, 0.0) - 1.0) < 1e-12);
  for (double sigma : {0.5, 1.0, 2.0}) {
    const StateVector g = make_gaussian({sigma, 0.0, 0.0}, grid);
    for (double l : lambdas)
      CHECK(std::abs(char_position(g, l)) ==
            Approx(std::exp(-0.5 * l * l * sigma * sigma)).margin(1e-10));
  }
  SECTION("hermiticity is exact") {
    for (double l : lambdas) {
      CHECK(char_position(rnd, -l) == std::conj(char_position(rnd, l)));
      CHECK(char_momentum(rnd, -l) == std::conj(char_momentum(rnd, l)));
    }
  }
  SECTION("mixtures average linearly") {
    const double w = 0.35;
    const MixedState m({{w, gs}, {1.0 - w, rnd}});
    for (double l : lambdas) {
      CHECK(std::abs(char_position(m, l) -
                     (w * char_position(gs, l) + (1.0 - w) * char_position(rnd, l))) < 1e-12);
      CHECK(std::abs(char_momentum(m, l) -
                     (w * char_momentum(gs, l) + (1.0 - w) * char_momentum(rnd, l))) < 1e-12);
    }
  }
}

TEST_CASE("momentum characteristic function") {
  const double sigma = GENERATE(0.7, 1.0);
  const StateVector g = make_gaussian({sigma, 0.0, 0.0}, grid);
  CHECK(std::abs(char_momentum(g, 0.0) - 1.0) < 1e-12);
  for (double l : lambdas)
    CHECK(std::abs(char_momentum(g, l)) ==
          Approx(std::exp(-l * l / (8.0 * sigma * sigma))).margin(1e-10));
}

TEST_CASE("narrow momentum packet has a pure phase") {
  // sigma_p = 1e-2 needs sigma_x = 50
  const GridSpec wide{8192, 1000.0, 1.0, 0.0};
  const double p0 = 0.8, sp = 1e-2;
  const StateVector g = make_gaussian({0.5 / sp, 0.0, p0}, wide);
  for (double l : {0.5, 1.0, 3.0}) {
    const cplx phi = char_momentum(g, l);
    CHECK(std::abs(phi) >= 1.0 - l * l * sp * sp);
    CHECK(std::abs(std::arg(phi * std::polar(1.0, -l * p0))) < 1e-9);
  }
}

TEST_CASE("autocorrelation form equals the Fourier sum") {
  CHECK(std::abs(char_momentum_autocorr(make_random({32, 1.0, 1}, grid), 0.0) - 1.0) < 1e-12);
  const StateVector gs = make_gaussian({1.0, 0.0, 0.0}, grid);
  CHECK(std::abs(char_momentum_autocorr(gs, 1.0) - char_position(gs, 1.0)) < 1e-8);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const StateVector rnd = make_random({32, 1.0, seed}, grid);
    double err = 0.0;
    for (double l : lambdas)
      err = std::max(err, std::abs(char_momentum_autocorr(rnd, l) - char_position(rnd, l)));
    CHECK(err < 1e-8);
  }
  CHECK_THROWS_AS(char_momentum_autocorr(gs, 0.3 * grid.momentum_span()), ShiftTooLarge);
}

TEST_CASE("displacement expectation") {
  const StateVector rnd = make_random({32, 1.0, 5}, grid);
  CHECK(std::abs(displacement_expectation(rnd, 0.0, 0.0) - 1.0) < 1e-12);
  for (double l : lambdas)
    CHECK(std::abs(displacement_expectation(rnd, l, 0.0) - std::conj(char_position(rnd, l))) <
          1e-12);

  SECTION("ground Gaussian against the closed form") {
    // <exp(-i a x) exp(i b p)> = exp(i hbar a b / 2) exp(-(a^2 s^2 + b^2 / (4 s^2)) / 2)
    const double s = 1.2;
    const StateVector g = make_gaussian({s, 0.0, 0.0}, grid);
    for (double a : {-1.5, 0.4, 2.0})
      for (double b : {-0.7, 1.0, 3.0}) {
        const cplx oracle = std::polar(std::exp(-0.5 * (a * a * s * s + b * b / (4.0 * s * s))),
                                       0.5 * a * b);
        CHECK(std::abs(displacement_expectation(g, a, b) - oracle) < 1e-10);
      }
  }

  SECTION("parity rule Omega(-a,-b) = exp(+i hbar a b) conj(Omega(a,b))") {
    double err = 0.0, modulus = 0.0;
    for (double a : linspace(-5.0, 5.0, 11))
      for (double b : linspace(-5.0, 5.0, 11)) {
        const cplx w = displacement_expectation(rnd, a, b);
        const cplx wm = displacement_expectation(rnd, -a, -b);
        err = std::max(err, std::abs(wm - std::polar(1.0, a * b) * std::conj(w)));
        modulus = std::max(modulus, std::abs(w));
      }
    CHECK(err < 1e-9);
    CHECK(modulus <= 1.0 + 1e-12);
  }
  CHECK_THROWS_AS(displacement_expectation(rnd, 1.0, 0.25 * grid.length), ShiftTooLarge);
}

TEST_CASE("variance lower bound on the real part") {
  const StateVector gs = make_gaussian({1.0, 0.0, 0.0}, grid);
  const auto zero = lower_bound_check(gs, 0.0, Representation::position);
  CHECK(zero.re_phi == Approx(1.0).margin(1e-12));
  CHECK(zero.bound == 1.0);
  CHECK(zero.holds);
  const auto one = lower_bound_check(gs, 1.0, Representation::position);
  CHECK(one.re_phi == Approx(std::exp(-0.5)).margin(1e-10));
  CHECK(one.bound == Approx(0.5).margin(1e-10));
  CHECK(one.holds);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StateVector rnd = make_random({32, 1.0, seed}, grid);
    for (double l : lambdas) {
      CHECK(lower_bound_check(rnd, l, Representation::position).holds);
      CHECK(lower_bound_check(rnd, l, Representation::momentum).holds);
    }
  }
}

TEST_CASE("char sweep and modulus bound") {
  const StateVector rnd = make_random({32, 1.0, 9}, grid);
  const auto xs = char_sweep(rnd, lambdas, Representation::position);
  const auto ps = char_sweep(rnd, lambdas, Representation::momentum);
  REQUIRE(xs.size() == lambdas.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(xs[i].lambda == lambdas[i]);
    CHECK(std::abs(xs[i].value) <= 1.0 + 1e-12);
    CHECK(std::abs(ps[i].value) <= 1.0 + 1e-12);
  }
}
