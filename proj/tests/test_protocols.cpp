#include "catch_amalgamated.hpp"
#include "helpers.hpp"

#include <random>

using namespace chur;
using Catch::Approx;
using std::numbers::pi;

namespace {
const GridSpec grid = testing::default_grid();
}

TEST_CASE("qubit readout of a Gaussian") {
  const double sigma = 1.0, p0 = 0.6;
  const StateVector g = make_gaussian({sigma, 0.0, p0}, grid);
  for (double l : linspace(-3.0, 3.0, 13)) {
    const auto r = qubit_exact(g, l);
    const cplx oracle = std::polar(std::exp(-l * l / (8.0 * sigma * sigma)), l * p0);
    CHECK(r.p_plus == Approx(0.5 * (1.0 + oracle.real())).margin(1e-12));
    CHECK(r.p_minus == Approx(0.5 * (1.0 - oracle.real())).margin(1e-12));
    CHECK(r.p_plus_i == Approx(0.5 * (1.0 + oracle.imag())).margin(1e-12));
    CHECK(r.p_minus_i == Approx(0.5 * (1.0 - oracle.imag())).margin(1e-12));
    CHECK(r.p_plus + r.p_minus == Approx(1.0).margin(1e-12));
    CHECK(std::abs(r.reconstructed - oracle) < 1e-10);
  }
}

TEST_CASE("qubit readout reproduces the momentum characteristic function") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const StateVector rnd = make_random({32, 1.0, seed}, grid);
    for (double l : linspace(-5.0, 5.0, 11))
      CHECK(std::abs(qubit_exact(rnd, l).reconstructed - char_momentum(rnd, l)) < 1e-12);
  }
  const MixedState m({{0.4, make_gaussian({1.0, 0.0, 0.0}, grid)},
                      {0.6, make_random({32, 1.0, 3}, grid)}});
  for (double l : {0.5, 2.0})
    CHECK(std::abs(qubit_exact(m, l).reconstructed - char_momentum(m, l)) < 1e-12);
  const cplx d = reconstruct_displacement(0.7, 0.3, 0.25, 0.75);
  CHECK(d.real() == Approx(0.4).margin(1e-15));
  CHECK(d.imag() == -0.5);
}

TEST_CASE("sampled qubit readout") {
  const StateVector g = make_gaussian({1.0, 0.0, 0.4}, grid);
  const double l = 1.3;
  const auto exact = qubit_exact(g, l);
  const auto a = qubit_sampled(g, l, 100001, 9);
  const auto b = qubit_sampled(g, l, 100001, 9);
  CHECK(a.reconstructed == b.reconstructed);
  CHECK(a.shots_x == 50001);
  CHECK(a.shots_y == 50000);
  CHECK(a.stderr_estimate() > 0.0);
  CHECK(std::abs(a.reconstructed.real() - exact.reconstructed.real()) < 5.0 * a.stderr_estimate());
  CHECK(std::abs(a.reconstructed.imag() - exact.reconstructed.imag()) < 5.0 * a.stderr_estimate());
  CHECK(a.prob_stderr_x == Approx(std::sqrt(a.p_plus * a.p_minus / 50001.0)));

  // the spread of repeated runs matches the reported standard error
  double s2 = 0.0;
  const int runs = 400;
  for (int i = 0; i < runs; ++i) {
    const double d = qubit_sampled(g, l, 2000, 1000 + i).reconstructed.real() -
                     exact.reconstructed.real();
    s2 += d * d;
  }
  const double predicted = 2.0 * std::sqrt(exact.p_plus * exact.p_minus / 1000.0);
  CHECK(std::sqrt(s2 / runs) == Approx(predicted).epsilon(0.15));

  CHECK_THROWS_AS(qubit_sampled(g, l, 1, 0), InvalidShots);
  CHECK_THROWS_AS(qubit_sampled(g, l, 0, 0), InvalidShots);
  CHECK_NOTHROW(qubit_sampled(g, l, 2, 0));
}

TEST_CASE("clock and shift pairs") {
  for (int d : {2, 3, 5, 8}) {
    const auto pair = clock_and_shift(d);
    CHECK(pair.commutation_defect() <= 1e-12);
    CHECK(pair.phase == Approx(2.0 * pi / d));
    const auto sweep = finite_dim_sweep(pair, 2000, 17);
    CHECK(sweep.violations == 0);
    CHECK(sweep.lhs_max <= sweep.bound + 1e-12);
    CHECK(sweep.bound == Approx(2.0 / (1.0 + std::sin(pi / d))).margin(1e-14));
    // a clock eigenstate has <U> on the unit circle and <W> = 0
    CVector e0 = CVector::Zero(d);
    e0(0) = 1.0;
    CHECK(finite_dim_chur(pair, e0).lhs == Approx(1.0).margin(1e-14));
  }

  SECTION("qubit Pauli pair") {
    const auto pair = clock_and_shift(2);
    CHECK(bound(pair.phase) == 1.0);
    // Bloch vector components along z and x
    std::mt19937_64 rng(3);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const CVector psi = random_unit_vector(2, rng);
      const double z = std::norm(psi(0)) - std::norm(psi(1));
      const double x = 2.0 * (std::conj(psi(0)) * psi(1)).real();
      worst = std::max(worst, std::abs(finite_dim_chur(pair, psi).lhs - (z * z + x * x)));
    }
    CHECK(worst < 1e-13);
    CVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK(finite_dim_chur(pair, plus).lhs == Approx(1.0).margin(1e-14));
  }

  SECTION("validation") {
    CMatrix u = CMatrix::Identity(2, 2);
    CMatrix bad = CMatrix::Identity(2, 2) * 1.1;
    CHECK_THROWS_AS(make_weyl_pair(u, bad, 0.0), NotUnitary);
    CHECK_THROWS_AS(make_weyl_pair(CMatrix::Identity(2, 3), u, 0.0), NotUnitary);
    const auto pair = clock_and_shift(3);
    CHECK_THROWS_AS(make_weyl_pair(pair.u_matrix, pair.w_matrix, 1.0), InvalidArgument);
    CHECK_NOTHROW(make_weyl_pair(u, u, 0.0));
    CHECK_THROWS_AS(clock_and_shift(1), InvalidArgument);
    CVector v = CVector::Zero(3);
    v(0) = 1.1;
    CHECK_THROWS_AS(finite_dim_chur(pair, v), NotUnitVector);
    CHECK_THROWS_AS(finite_dim_chur(pair, CVector::Zero(2)), InvalidArgument);
  }
}

TEST_CASE("LQC volume bound") {
  const double sigma = 1.0, q = 2.0, lb = 1.0;
  const StateVector vol = make_gaussian({sigma, 0.0, 0.0}, grid);
  const auto r = lqc_bound_check({q, lb, vol});
  const double hq = q * grid.hbar;
  CHECK(r.hbar_q == hq);
  CHECK(r.sigma_v == Approx(sigma).margin(1e-9));
  CHECK(std::abs(r.holonomy) == Approx(std::exp(-lb * lb * hq * hq / (8.0 * sigma * sigma))).margin(1e-10));
  CHECK(r.rhs == Approx(hq / pi * lb * std::abs(r.holonomy)).margin(1e-14));
  CHECK(r.holds);
  CHECK(r.lambda_v == Approx(pi / (hq * lb)));
  CHECK(r.bound_at_lambda_v == Approx(1.0).margin(1e-14));
  CHECK(std::abs(r.phi_v) == Approx(std::exp(-0.5 * r.lambda_v * r.lambda_v * sigma * sigma)).margin(1e-10));
  CHECK(r.chain_holds);

  for (std::uint64_t seed = 0; seed < 10; ++seed)
    for (double lam : {0.3, 1.0, 2.5}) {
      const auto rr = lqc_bound_check({1.5, lam, make_random({32, 1.0, seed}, grid)});
      CHECK(rr.holds);
      CHECK(rr.chain_holds);
    }

  CHECK_THROWS_AS(lqc_bound_check({0.0, 1.0, vol}), InvalidArgument);
  CHECK_THROWS_AS(lqc_bound_check({1.0, -1.0, vol}), InvalidArgument);
  std::vector<cplx> spike(grid.n_points, 0.0);
  spike[grid.n_points / 2] = 1.0;
  CHECK_THROWS_AS(lqc_bound_check({1.0, 1.0, StateVector(grid, spike).normalized()}), ZeroVariance);
}
