#include "catch_amalgamated.hpp"
#include "helpers.hpp"

#include <sstream>

using namespace chur;
using Catch::Approx;

TEST_CASE("state files round-trip exactly") {
  const GridSpec g{512, 17.3, 0.9, 1.25};
  const StateVector psi = make_random({16, 1.0, 4}, g);
  std::stringstream ss;
  io::write_state(ss, psi);
  const StateVector back = io::read_state(ss);
  CHECK(back.grid() == g);
  for (std::size_t j = 0; j < g.n_points; ++j)
    REQUIRE(back[j] == psi[j]);

  SECTION("momentum states are stored in position representation") {
    std::stringstream sm;
    io::write_state(sm, to_momentum(psi));
    const StateVector b = io::read_state(sm);
    CHECK(b.representation() == Representation::position);
    double err = 0.0;
    for (std::size_t j = 0; j < g.n_points; ++j)
      err = std::max(err, std::abs(b[j] - psi[j]));
    CHECK(err < 1e-13);
  }
  SECTION("truncated and malformed files") {
    std::istringstream bad("8 1.0 1.0 0.0\n1 0\n0 0\n");
    CHECK_THROWS_AS(io::read_state(bad), InvalidArgument);
    std::istringstream header("eight 1 1 0\n");
    CHECK_THROWS_AS(io::read_state(header), InvalidArgument);
    CHECK_THROWS_AS(io::load_state("/nonexistent/state.txt"), InvalidArgument);
  }
}

TEST_CASE("mask tables") {
  SECTION("two columns give a transmittance") {
    std::istringstream is("# x amplitude\n-1, 0\n-0.5, 0.5\n0, 1\n0.5, 0.5\n1, 0\n");
    const MaskSpec m = io::read_mask_table(is);
    CHECK(m.kind == MaskKind::tabulated);
    CHECK(m.is_real());
    CHECK(m.origin == -1.0);
    CHECK(m.step == Approx(0.5));
    CHECK(m.value(-0.5).real() == Approx(0.25));
    CHECK(m.value(0.0).real() == Approx(1.0));
  }
  SECTION("three columns keep the aperture phase") {
    std::istringstream is("0 0 0\n1 0 0.5\n2 0.6 0\n3 0 0\n");
    const MaskSpec m = io::read_mask_table(is, 2.0);
    CHECK(m.kappa == 2.0);
    CHECK(m.value(1.0).real() == Approx(0.25));
    CHECK(m.phase_profile[1] == Approx(std::numbers::pi / 2));
    std::istringstream again("0 0 0\n1 0 0.5\n2 0.6 0\n3 0 0\n");
    const MaskSpec c = io::read_mask_table(again, 1.0, true);
    CHECK_FALSE(c.is_real());
    CHECK(c.value(1.0) == cplx(0.0, 0.5));
  }
  SECTION("errors") {
    std::istringstream uneven("0 0\n1 1\n2.5 0\n");
    CHECK_THROWS_AS(io::read_mask_table(uneven), InvalidArgument);
    std::istringstream mixed("0 0\n1 1 0\n2 0\n");
    CHECK_THROWS_AS(io::read_mask_table(mixed), InvalidArgument);
    std::istringstream one("0 1\n");
    CHECK_THROWS_AS(io::read_mask_table(one), InvalidArgument);
    std::istringstream text("0 1\n1 x\n");
    CHECK_THROWS_AS(io::read_mask_table(text), InvalidArgument);
    std::istringstream decreasing("1 0\n0 1\n");
    CHECK_THROWS_AS(io::read_mask_table(decreasing), InvalidArgument);
  }
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    CHECK(std::stod(io::fmt(v)) == v);
  }
  CHECK(io::csv_row({1.0, 0.5}) == "1, 0.5");
}
