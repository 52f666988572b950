#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ieqnls/ieq.hpp"

namespace ieqnls {

/// u(x, t) = sech(x - 4t) exp(i(2x - 3t)), exact for beta = 2.
ComplexField soliton_exact(const Grid1D& grid, double t);

/// Time derivative of soliton_exact, in closed form.
ComplexField soliton_exact_dt(const Grid1D& grid, double t);

/// u0 = sech((x - 25)/sqrt2)/sqrt2 * exp(-i x/20). ConfigError if 25 is outside the domain.
ComplexField longtime_init(const Grid1D& grid);

/// u0 = (1 + sin x)(2 + sin y) on [0, 2pi]^2. ConfigError on any other domain.
ComplexField blowup2d_init(const Grid2D& grid);

/// Named experiment with its default parameters.
struct Scenario {
  std::string name;
  int dim = 1;
  double beta = 0.0;
  std::vector<double> domain;   ///< {a, b} or {ax, bx, ay, by}
  std::size_t n = 0;
  double dt = 0.0;
  double t_end = 0.0;
  std::string default_tableau;
  std::size_t default_record_every = 1;

  std::function<ComplexField(const SpectralSpace&)> initial;
  /// Empty when no closed form is known.
  std::function<ComplexField(const SpectralSpace&, double)> exact;

  /// Builds the problem for this scenario; overrides replace the defaults when set.
  NlsProblem make_problem(std::size_t n_override = 0,
                          const std::vector<double>& domain_override = {},
                          const double* beta_override = nullptr) const;
};

/// "soliton", "longtime" or "blowup2d"; LookupError otherwise.
const Scenario& scenario(std::string_view name);
const std::vector<std::string>& scenario_names();

}  // namespace ieqnls
