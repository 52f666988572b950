#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ieqnls/diagnostics.hpp"
#include "ieqnls/ieq.hpp"

namespace ieqnls {

/// Butcher tableau of a diagonally implicit RK method. `a` is row-major s*s.
struct Tableau {
  std::string name;
  std::size_t stages = 0;
  std::vector<double> b;
  std::vector<double> a;
  std::vector<double> c;
  int claimed_order = 0;

  double coeff(std::size_t i, std::size_t j) const { return a[i * stages + j]; }
  double weight_sum() const;
  /// sum_i b_i c_i
  double weighted_abscissa_sum() const;
};

/// Quadratic-invariant-preserving DIRK: a_ii = b_i/2, a_ij = b_j for j < i.
/// Throws ConfigError if any b_i is zero.
Tableau tableau_from_b(std::vector<double> b, int claimed_order, std::string name);

/// Arbitrary lower-triangular tableau, e.g. for non-conservative baselines.
Tableau make_tableau(std::vector<double> b, std::vector<double> a, int claimed_order,
                     std::string name);

/// max_ij |b_i a_ij + b_j a_ji - b_i b_j|
double conservative_defect(const Tableau& t);

/// Registry names in declaration order.
const std::vector<std::string>& registry_names();

/// Throws LookupError for unknown names.
Tableau registry(std::string_view name);

/// Tableau lookup accepting registry names plus the non-conservative
/// baselines "explicit_euler" and "backward_euler".
Tableau lookup_tableau(std::string_view name);

struct SolverConfig {
  double tol = 1e-13;          ///< increment tolerance, scaled by 1 + ||u^n||_inf
  std::size_t max_iters = 500;
  bool linearized = true;      ///< invert the dispersive part exactly in each sweep
  bool allow_nonconservative = false;
};

struct StageSolution {
  ComplexField u;
  RealField r;
  ComplexField f;
  RealField g;
  std::size_t iterations = 0;
  double residual = 0.0;   ///< max of the f and g consistency residuals
};

/// Solves U = rhs_u + tau f(U, R), R = rhs_r + tau g(U, R) by fixed-point
/// iteration to the increment tolerance cfg.tol * tol_scale (max norm).
/// On success f and g are recovered from the stage relations.
StageSolution solve_stage(const NlsProblem& problem, std::span<const Complex> rhs_u,
                          std::span<const double> rhs_r, double tau,
                          std::span<const Complex> guess_u, std::span<const double> guess_r,
                          const SolverConfig& cfg, double tol_scale = 1.0,
                          std::size_t stage = 0);

struct StepReport {
  std::vector<std::size_t> stage_iterations;
  double max_residual = 0.0;

  std::size_t max_iterations() const;
};

/// Optional per-stage record of a step, for inspection in tests and tools.
struct StepTrace {
  std::vector<StageSolution> stages;
};

/// One DIRK step. Stages are solved in order; stage 1 is warm-started from
/// (u^n, r^n) and stage i from stage i-1.
StepReport step(const NlsProblem& problem, IeqState& state, double dt, const Tableau& tableau,
                const SolverConfig& cfg, StepTrace* trace = nullptr);

using StepObserver = std::function<void(std::size_t step, const IeqState&,
                                        const InvariantRecord&, const StepReport&)>;

/// Advances to t_end with a fixed step. (t_end - t0)/dt must be an integer up
/// to round-off. The observer, when set, sees every accepted step.
IeqState integrate(const NlsProblem& problem, IeqState state, double t_end, double dt,
                   const Tableau& tableau, const SolverConfig& cfg,
                   const StepObserver& observer = {});

/// Number of fixed steps covering [t0, t_end]; ConfigError if not integral.
std::size_t step_count(double t0, double t_end, double dt);

}  // namespace ieqnls
