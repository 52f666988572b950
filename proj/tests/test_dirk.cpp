#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "ieqnls/dirk.hpp"
#include "ieqnls/errors.hpp"
#include "oracles.hpp"

using namespace ieqnls;
using Catch::Approx;
using std::numbers::pi;

namespace {

NlsProblem problem_1d(double a, double b, std::size_t n, double beta) {
  return NlsProblem(beta, SpectralSpace(build_grid_1d(a, b, n)));
}

double max_abs_real_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("tableau construction from weights", "[dirk]") {
  const auto mid = tableau_from_b({1.0}, 2, "mid");
  CHECK(mid.stages == 1);
  CHECK(mid.coeff(0, 0) == 0.5);
  CHECK(mid.c[0] == 0.5);

  const auto two = tableau_from_b({0.5, 0.5}, 2, "two");
  CHECK(two.coeff(0, 0) == 0.25);
  CHECK(two.coeff(0, 1) == 0.0);
  CHECK(two.coeff(1, 0) == 0.5);
  CHECK(two.coeff(1, 1) == 0.25);
  CHECK(two.c[0] == 0.25);
  CHECK(two.c[1] == 0.75);

  CHECK_THROWS_AS(tableau_from_b({1.0, 0.0}, 1, "bad"), ConfigError);
  CHECK_THROWS_AS(tableau_from_b({}, 1, "empty"), ConfigError);
  CHECK_THROWS_AS(make_tableau({1.0, 1.0}, {0.5, 0.1, 0.0, 0.5}, 1, "upper"), ConfigError);
}

TEST_CASE("conservation defect", "[dirk]") {
  CHECK(conservative_defect(tableau_from_b({1.0}, 2, "a")) == 0.0);
  CHECK(conservative_defect(tableau_from_b({0.5, 0.5}, 2, "b")) == 0.0);
  CHECK(conservative_defect(make_tableau({1.0}, {0.0}, 1, "euler")) == 1.0);
  CHECK(conservative_defect(lookup_tableau("explicit_euler")) == 1.0);
  CHECK(conservative_defect(lookup_tableau("backward_euler")) == 1.0);
}

TEST_CASE("registry contents", "[dirk]") {
  const std::vector<std::string> expected = {"dirk12", "dirk22", "dirk33", "dirk44_as_printed",
                                             "dirk44_corrected", "dirk54", "dirk65"};
  CHECK(registry_names() == expected);
  for (const auto& name : registry_names()) {
    const auto t = registry(name);
    CHECK(t.name == name);
    CHECK(conservative_defect(t) <= 1e-12);
  }
  CHECK(registry("dirk12").weight_sum() == 1.0);
  CHECK(registry("dirk22").weight_sum() == Approx(1.0).margin(1e-15));
  CHECK(registry("dirk33").weight_sum() == Approx(1.0).margin(1e-6));
  CHECK(registry("dirk44_corrected").weight_sum() == Approx(1.0).margin(1e-12));
  CHECK(registry("dirk54").weight_sum() == Approx(1.0).margin(1e-12));
  CHECK(registry("dirk65").weight_sum() == Approx(1.0).margin(1e-12));
  CHECK(registry("dirk44_as_printed").weight_sum() == Approx(6.40619).margin(1e-5));

  CHECK(registry("dirk12").claimed_order == 2);
  CHECK(registry("dirk33").claimed_order == 3);
  CHECK(registry("dirk54").claimed_order == 4);
  CHECK(registry("dirk65").claimed_order == 5);
  // symmetric weights give second order: sum b_i c_i = 1/2
  for (const char* name : {"dirk12", "dirk22", "dirk33", "dirk54", "dirk65"})
    CHECK(registry(name).weighted_abscissa_sum() == Approx(0.5).margin(1e-6));

  CHECK_THROWS_AS(registry("dirk99"), LookupError);
  CHECK_THROWS_AS(lookup_tableau("nope"), LookupError);
}

TEST_CASE("stage solver: zero state", "[dirk]") {
  const auto p = problem_1d(-10, 10, 32, 2.0);
  const ComplexField z(32);
  const RealField zr(32);
  const auto s = solve_stage(p, z, zr, 0.01, z, zr, SolverConfig{});
  CHECK(s.iterations == 1);
  CHECK(oracle::max_abs(s.u) == 0.0);
  CHECK(oracle::norm_inf(s.r) == 0.0);
}

TEST_CASE("stage solver: linear problem matches a Fourier-space solve", "[dirk]") {
  const auto p = problem_1d(0.0, 2 * pi, 32, 0.0);
  const auto& g = p.space.axis(0);
  ComplexField wave(32);
  for (std::size_t j = 0; j < 32; ++j) wave[j] = std::polar(1.0, 3.0 * g.mu * g.nodes[j]);
  const RealField r(32, 0.7);
  const double tau = 0.02;
  const auto s = solve_stage(p, wave, r, tau, wave, r, SolverConfig{});
  const double k2 = 9.0 * g.mu * g.mu;
  for (std::size_t j = 0; j < 32; ++j) {
    CHECK(std::abs(s.u[j] - wave[j] / Complex(1.0, tau * k2)) < 1e-12);
  }
}

TEST_CASE("stage solver agrees with a damped Newton root-find", "[dirk]") {
  std::mt19937_64 rng(31);
  const auto g = build_grid_1d(-4.0, 4.0, 8);
  const NlsProblem p(2.0, SpectralSpace(g));
  const auto tab = registry("dirk12");
  const double dt = 1e-3;
  const auto state = init_state(p, oracle::random_field(8, rng));

  IeqState next = state;
  StepTrace trace;
  step(p, next, dt, tab, SolverConfig{}, &trace);
  REQUIRE(trace.stages.size() == 1);

  const auto [u_ref, r_ref] =
      oracle::newton_stage(g.n, g.length, p.beta, dt * tab.coeff(0, 0), state.u, state.r);
  CHECK(oracle::max_abs_diff(trace.stages[0].u, u_ref) <= 1e-10);
  CHECK(max_abs_real_diff(trace.stages[0].r, r_ref) <= 1e-10);

  // plain Picard sweeps reach the same root
  SolverConfig picard;
  picard.linearized = false;
  picard.max_iters = 5000;
  const auto s = solve_stage(p, state.u, state.r, dt * tab.coeff(0, 0), state.u, state.r, picard);
  CHECK(oracle::max_abs_diff(s.u, u_ref) <= 1e-10);
}

TEST_CASE("stage solver failures", "[dirk]") {
  std::mt19937_64 rng(32);
  const auto p = problem_1d(-4.0, 4.0, 16, 2.0);
  const auto u = oracle::random_field(16, rng);
  const auto r = oracle::random_real(16, rng);
  SolverConfig tight;
  tight.max_iters = 1;
  try {
    solve_stage(p, u, r, 0.01, u, r, tight, 1.0, 2);
    FAIL("expected SolverError");
  } catch (const DivergenceError&) {
    FAIL("a short iteration budget is not a divergence");
  } catch (const SolverError& e) {
    CHECK(e.stage() == 2);
    CHECK(e.iterations() == 1);
    CHECK(e.last_increment() > 0.0);
  }

  SolverConfig picard;
  picard.linearized = false;
  CHECK_THROWS_AS(solve_stage(p, u, r, 50.0, u, r, picard), DivergenceError);
  CHECK_THROWS_AS(solve_stage(p, u, r, 0.0, u, r, SolverConfig{}), ConfigError);
}

TEST_CASE("one midpoint step on a linear plane wave", "[dirk]") {
  const auto p = problem_1d(0.0, 2 * pi, 16, 0.0);
  const auto& g = p.space.axis(0);
  ComplexField wave(16);
  for (std::size_t j = 0; j < 16; ++j) wave[j] = std::polar(1.0, g.mu * g.nodes[j]);
  auto s = init_state(p, wave);
  const double dt = 0.05;
  step(p, s, dt, registry("dirk12"), SolverConfig{});
  const double m2 = g.mu * g.mu;
  const Complex factor = Complex(1.0, -dt * m2 / 2) / Complex(1.0, dt * m2 / 2);
  for (std::size_t j = 0; j < 16; ++j) CHECK(std::abs(s.u[j] - factor * wave[j]) < 1e-13);
  CHECK(s.t == dt);
}

TEST_CASE("steps keep a zero state at zero", "[dirk]") {
  const auto p = problem_1d(-10, 10, 32, 2.0);
  auto s = init_state(p, ComplexField(32));
  step(p, s, 0.1, registry("dirk33"), SolverConfig{});
  CHECK(oracle::max_abs(s.u) == 0.0);
  CHECK(oracle::norm_inf(s.r) == 0.0);
}

TEST_CASE("every registry method conserves mass and modified energy per step", "[dirk]") {
  std::mt19937_64 rng(33);
  const auto p = problem_1d(-8.0, 8.0, 64, 2.0);
  const auto s0 = init_state(p, oracle::random_field(64, rng, 0.5));
  const double m0 = mass(p, s0), e0 = energy_modified(p, s0);
  for (const auto& name : registry_names()) {
    auto s = s0;
    for (int k = 0; k < 3; ++k) step(p, s, 1e-3, registry(name), SolverConfig{});
    INFO(name);
    CHECK(std::abs(mass(p, s) - m0) <= 1e-11 * (1.0 + m0));
    CHECK(std::abs(energy_modified(p, s) - e0) <= 1e-10 * (1.0 + std::abs(e0)));
  }
}

TEST_CASE("the update is the weighted sum of stage slopes", "[dirk]") {
  std::mt19937_64 rng(34);
  const auto p = problem_1d(-8.0, 8.0, 32, -1.0);
  const auto s0 = init_state(p, oracle::random_field(32, rng));
  auto s = s0;
  StepTrace trace;
  const double dt = 2e-3;
  const auto tab = registry("dirk54");
  step(p, s, dt, tab, SolverConfig{}, &trace);
  REQUIRE(trace.stages.size() == tab.stages);
  for (std::size_t q = 0; q < 32; ++q) {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < tab.stages; ++i) sum += tab.b[i] * trace.stages[i].f[q];
    CHECK(std::abs(s.u[q] - (s0.u[q] + dt * sum)) <= 1e-14 * (1.0 + std::abs(s.u[q])));
  }
}

TEST_CASE("non-conservative tableaux need an explicit opt-in", "[dirk]") {
  std::mt19937_64 rng(35);
  const auto p = problem_1d(-8.0, 8.0, 32, 2.0);
  auto s = init_state(p, oracle::random_field(32, rng, 0.5));
  CHECK_THROWS_AS(step(p, s, 1e-3, lookup_tableau("explicit_euler"), SolverConfig{}), ConfigError);

  SolverConfig cfg;
  cfg.allow_nonconservative = true;
  const double m0 = mass(p, s);
  double previous = 0.0;
  for (int block = 0; block < 3; ++block) {
    s = integrate(p, s, s.t + 0.01, 1e-3, lookup_tableau("explicit_euler"), cfg);
    const double drift = std::abs(mass(p, s) - m0);
    CHECK(drift > previous);
    previous = drift;
  }
  CHECK(previous > 1e-8);
}

TEST_CASE("integrate bookkeeping", "[dirk]") {
  std::mt19937_64 rng(36);
  const auto p = problem_1d(-8.0, 8.0, 32, 2.0);
  const auto s0 = init_state(p, oracle::random_field(32, rng, 0.5), 1.0);

  std::size_t calls = 0;
  const auto same = integrate(p, s0, 1.0, 0.01, registry("dirk22"), SolverConfig{},
                              [&](std::size_t, const IeqState&, const InvariantRecord&,
                                  const StepReport&) { ++calls; });
  CHECK(calls == 0);
  CHECK(same.u == s0.u);

  std::vector<std::size_t> steps;
  std::vector<double> times;
  const auto end = integrate(p, s0, 1.1, 0.01, registry("dirk22"), SolverConfig{},
                             [&](std::size_t k, const IeqState& st, const InvariantRecord& rec,
                                 const StepReport& rep) {
                               steps.push_back(k);
                               times.push_back(st.t);
                               CHECK(rec.t == st.t);
                               CHECK(rep.stage_iterations.size() == 2);
                             });
  REQUIRE(steps.size() == 10);
  CHECK(steps.front() == 1);
  CHECK(steps.back() == 10);
  CHECK(end.t == 1.1);
  CHECK(times[4] == Approx(1.05).margin(1e-15));

  CHECK(step_count(0.0, 3.0, 0.01) == 300);
  CHECK(step_count(0.0, std::ldexp(1.0, -5), std::ldexp(1.0, -9)) == 16);
  CHECK_THROWS_AS(step_count(0.0, 1.0, 0.3), ConfigError);
  CHECK_THROWS_AS(integrate(p, s0, 2.0, 0.3, registry("dirk22"), SolverConfig{}), ConfigError);
}

TEST_CASE("solver errors carry the step index", "[dirk]") {
  std::mt19937_64 rng(37);
  const auto p = problem_1d(-8.0, 8.0, 32, 2.0);
  const auto s0 = init_state(p, oracle::random_field(32, rng));
  SolverConfig cfg;
  cfg.max_iters = 2;
  try {
    integrate(p, s0, 0.05, 0.01, registry("dirk33"), cfg);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.step() == 1);
  }
}
