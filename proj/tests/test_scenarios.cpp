#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "ieqnls/dirk.hpp"
#include "ieqnls/errors.hpp"
#include "ieqnls/scenarios.hpp"
#include "oracles.hpp"

using namespace ieqnls;
using Catch::Approx;
using std::numbers::pi;

TEST_CASE("exact soliton", "[scenarios]") {
  const auto g = build_grid_1d(-20.0, 20.0, 256);
  const auto u0 = soliton_exact(g, 0.0);
  for (std::size_t j = 0; j < g.n; j += 17) {
    const Complex expect = std::polar(1.0 / std::cosh(g.nodes[j]), 2.0 * g.nodes[j]);
    CHECK(std::abs(u0[j] - expect) < 1e-15);
  }
  const double t = 0.75;
  const auto u = soliton_exact(g, t);
  double peak = 0.0, at = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    CHECK(std::abs(u[j]) == Approx(1.0 / std::cosh(g.nodes[j] - 4 * t)).margin(1e-15));
    if (std::abs(u[j]) > peak) {
      peak = std::abs(u[j]);
      at = g.nodes[j];
    }
  }
  CHECK(at == Approx(3.0).margin(g.h));
  CHECK(peak == Approx(1.0).margin(1e-2));
}

TEST_CASE("the exact soliton solves the semi-discrete equation", "[scenarios]") {
  // On [-10pi, 10pi] the carrier exp(2ix) is periodic and the sech tails are
  // below 1e-13, so the residual measures the spatial operator alone.
  const auto g = build_grid_1d(-10 * pi, 10 * pi, 512);
  const NlsProblem p(2.0, SpectralSpace(g));
  for (double t : {0.0, 0.3}) {
    const auto u = soliton_exact(g, t);
    const auto ut = soliton_exact_dt(g, t);
    const auto lap = p.space.laplacian(u);
    double res = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
      const Complex r = Complex(0.0, 1.0) * ut[j] + lap[j] + 2.0 * std::norm(u[j]) * u[j];
      res = std::max(res, std::abs(r));
    }
    CHECK(res <= 1e-10);
  }
}

TEST_CASE("soliton invariants do not depend on time", "[scenarios]") {
  const auto g = build_grid_1d(-7 * pi, 7 * pi, 256);
  const NlsProblem p(2.0, SpectralSpace(g));
  for (double t : {0.0, 1.0}) {
    const auto s = init_state(p, soliton_exact(g, t), t);
    CHECK(mass(p, s) == Approx(2.0).margin(1e-8));
    CHECK(energy_modified(p, s) == Approx(-11.0 / 3.0).margin(1e-6));
  }
}

TEST_CASE("long-time initial profile", "[scenarios]") {
  const auto& sc = scenario("longtime");
  const auto p = sc.make_problem();
  const auto u0 = sc.initial(p.space);
  const auto& g = p.space.axis(0);
  double peak = 0.0;
  std::size_t at = 0;
  for (std::size_t j = 0; j < g.n; ++j) {
    if (std::abs(u0[j]) > peak) {
      peak = std::abs(u0[j]);
      at = j;
    }
  }
  CHECK(peak == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
  CHECK(g.nodes[at] == Approx(25.0).margin(g.h));
  CHECK(mass(p, init_state(p, u0)) == Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK_THROWS_AS(longtime_init(build_grid_1d(-10.0, 10.0, 64)), ConfigError);
}

TEST_CASE("long-time soliton drifts with velocity -0.1", "[scenarios]") {
  const auto& sc = scenario("longtime");
  const auto p = sc.make_problem();
  const auto& g = p.space.axis(0);
  auto centre = [&](const IeqState& s) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
      num += g.nodes[j] * std::norm(s.u[j]);
      den += std::norm(s.u[j]);
    }
    return num / den;
  };
  const auto s0 = init_state(p, sc.initial(p.space));
  const auto s1 = integrate(p, s0, 2.0, 0.01, registry("dirk22"), SolverConfig{});
  CHECK((centre(s1) - centre(s0)) / 2.0 == Approx(-0.1).margin(2e-3));
}

TEST_CASE("2D blow-up initial data", "[scenarios]") {
  const auto& sc = scenario("blowup2d");
  CHECK(sc.dim == 2);
  CHECK(sc.beta == 1.0);
  const auto p = sc.make_problem(32);
  const auto u0 = sc.initial(p.space);
  const auto& gx = p.space.axis(0);
  // node 8 of 32 on [0, 2pi] is pi/2
  CHECK(gx.nodes[8] == Approx(pi / 2));
  CHECK(u0[8 * 32 + 8].real() == Approx(6.0));
  const auto s = init_state(p, u0);
  CHECK(mass(p, s) == Approx(27 * pi * pi).epsilon(1e-12));
  CHECK(energy_modified(p, s) == Approx(1166.00).margin(0.5));
  CHECK_THROWS_AS(blowup2d_init(build_grid_2d(0, 1, 0, 1, 8)), ConfigError);
}

TEST_CASE("scenario registry", "[scenarios]") {
  const std::vector<std::string> names = {"soliton", "longtime", "blowup2d"};
  CHECK(scenario_names() == names);
  CHECK_THROWS_AS(scenario("vortex"), LookupError);

  const auto& sol = scenario("soliton");
  CHECK(sol.beta == 2.0);
  CHECK(sol.n == 256);
  CHECK(sol.dt == 0.01);
  CHECK(sol.t_end == 3.0);
  CHECK(static_cast<bool>(sol.exact));
  CHECK_FALSE(static_cast<bool>(scenario("longtime").exact));

  const double beta = -1.0;
  const auto p = sol.make_problem(64, {-5.0, 5.0}, &beta);
  CHECK(p.beta == -1.0);
  CHECK(p.space.size() == 64);
  CHECK(p.space.axis(0).a == -5.0);
  CHECK_THROWS_AS(sol.make_problem(64, {1.0, 2.0, 3.0}), ConfigError);
}
