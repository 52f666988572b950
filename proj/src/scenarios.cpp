#include "ieqnls/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "ieqnls/errors.hpp"

namespace ieqnls {

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b)); }

}  // namespace

ComplexField soliton_exact(const Grid1D& grid, double t) {
  ComplexField u(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double x = grid.nodes[j];
    u[j] = sech(x - 4.0 * t) * std::polar(1.0, 2.0 * x - 3.0 * t);
  }
  return u;
}

ComplexField soliton_exact_dt(const Grid1D& grid, double t) {
  ComplexField ut(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double x = grid.nodes[j];
    const double xi = x - 4.0 * t;
    const Complex amp(4.0 * sech(xi) * std::tanh(xi), -3.0 * sech(xi));
    ut[j] = amp * std::polar(1.0, 2.0 * x - 3.0 * t);
  }
  return ut;
}

ComplexField longtime_init(const Grid1D& grid) {
  if (!(grid.a <= 25.0 && 25.0 < grid.b)) {
    throw ConfigError("longtime scenario needs x = 25 inside the domain");
  }
  const double a = 1.0 / std::numbers::sqrt2;
  ComplexField u(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double x = grid.nodes[j];
    u[j] = a * sech(a * (x - 25.0)) * std::polar(1.0, -x / 20.0);
  }
  return u;
}

ComplexField blowup2d_init(const Grid2D& grid) {
  const double two_pi = 2.0 * std::numbers::pi;
  if (!near(grid.x.a, 0.0) || !near(grid.x.b, two_pi) || !near(grid.y.a, 0.0) ||
      !near(grid.y.b, two_pi)) {
    throw ConfigError("blowup2d scenario is defined on [0, 2pi]^2 only");
  }
  const std::size_t n = grid.x.n;
  ComplexField u(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      u[j * n + k] = (1.0 + std::sin(grid.x.nodes[j])) * (2.0 + std::sin(grid.y.nodes[k]));
    }
  }
  return u;
}

NlsProblem Scenario::make_problem(std::size_t n_override,
                                  const std::vector<double>& domain_override,
                                  const double* beta_override) const {
  const std::size_t nodes = n_override != 0 ? n_override : n;
  const auto& d = domain_override.empty() ? domain : domain_override;
  const double b = beta_override != nullptr ? *beta_override : beta;
  if (dim == 1) {
    if (d.size() != 2) throw ConfigError("1D domain needs two values a,b");
    return NlsProblem(b, SpectralSpace(build_grid_1d(d[0], d[1], nodes)));
  }
  if (d.size() != 4) throw ConfigError("2D domain needs four values ax,bx,ay,by");
  return NlsProblem(b, SpectralSpace(build_grid_2d(d[0], d[1], d[2], d[3], nodes)));
}

namespace {

std::vector<Scenario> make_scenarios() {
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<Scenario> out;

  Scenario soliton;
  soliton.name = "soliton";
  soliton.dim = 1;
  soliton.beta = 2.0;
  soliton.domain = {-20.0, 60.0};
  soliton.n = 256;
  soliton.dt = 0.01;
  soliton.t_end = 3.0;
  soliton.default_tableau = "dirk22";
  soliton.initial = [](const SpectralSpace& s) { return soliton_exact(s.axis(0), 0.0); };
  soliton.exact = [](const SpectralSpace& s, double t) { return soliton_exact(s.axis(0), t); };
  out.push_back(std::move(soliton));

  Scenario longtime;
  longtime.name = "longtime";
  longtime.dim = 1;
  longtime.beta = 2.0;
  longtime.domain = {0.0, 50.0};
  longtime.n = 256;
  longtime.dt = 0.01;
  longtime.t_end = 1000.0;
  longtime.default_tableau = "dirk22";
  longtime.default_record_every = 100;
  longtime.initial = [](const SpectralSpace& s) { return longtime_init(s.axis(0)); };
  out.push_back(std::move(longtime));

  Scenario blowup;
  blowup.name = "blowup2d";
  blowup.dim = 2;
  blowup.beta = 1.0;
  blowup.domain = {0.0, two_pi, 0.0, two_pi};
  blowup.n = 128;
  blowup.dt = 1e-4;
  blowup.t_end = 0.108;
  blowup.default_tableau = "dirk33";
  blowup.default_record_every = 10;
  blowup.initial = [](const SpectralSpace& s) {
    return blowup2d_init(Grid2D{s.axis(0), s.axis(1)});
  };
  out.push_back(std::move(blowup));

  return out;
}

const std::vector<Scenario>& all_scenarios() {
  static const std::vector<Scenario> scenarios = make_scenarios();
  return scenarios;
}

}  // namespace

const Scenario& scenario(std::string_view name) {
  for (const auto& s : all_scenarios()) {
    if (s.name == name) return s;
  }
  throw LookupError("unknown scenario '" + std::string(name) + "'");
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : all_scenarios()) out.push_back(s.name);
    return out;
  }();
  return names;
}

}  // namespace ieqnls
