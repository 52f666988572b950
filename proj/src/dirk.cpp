#include "ieqnls/dirk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ieqnls/errors.hpp"

namespace ieqnls {

double Tableau::weight_sum() const {
  double s = 0.0;
  for (double x : b) s += x;
  return s;
}

double Tableau::weighted_abscissa_sum() const {
  double s = 0.0;
  for (std::size_t i = 0; i < stages; ++i) s += b[i] * c[i];
  return s;
}

Tableau make_tableau(std::vector<double> b, std::vector<double> a, int claimed_order,
                     std::string name) {
  const std::size_t s = b.size();
  if (s == 0) throw ConfigError("tableau needs at least one stage");
  if (a.size() != s * s) throw ConfigError("tableau matrix must be s x s");
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      if (a[i * s + j] != 0.0) {
        throw ConfigError("tableau '" + name + "' is not diagonally implicit");
      }
    }
  }
  Tableau t;
  t.name = std::move(name);
  t.stages = s;
  t.b = std::move(b);
  t.a = std::move(a);
  t.c.assign(s, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j <= i; ++j) t.c[i] += t.a[i * s + j];
  }
  t.claimed_order = claimed_order;
  return t;
}

Tableau tableau_from_b(std::vector<double> b, int claimed_order, std::string name) {
  const std::size_t s = b.size();
  if (s == 0) throw ConfigError("tableau needs at least one stage");
  for (std::size_t i = 0; i < s; ++i) {
    if (b[i] == 0.0 || !std::isfinite(b[i])) {
      throw ConfigError("tableau '" + name + "': weight b_" + std::to_string(i + 1) +
                        " must be finite and nonzero");
    }
  }
  std::vector<double> a(s * s, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < i; ++j) a[i * s + j] = b[j];
    a[i * s + i] = b[i] / 2.0;
  }
  return make_tableau(std::move(b), std::move(a), claimed_order, std::move(name));
}

double conservative_defect(const Tableau& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.stages; ++i) {
    for (std::size_t j = 0; j < t.stages; ++j) {
      const double mij = t.b[i] * t.coeff(i, j) + t.b[j] * t.coeff(j, i) - t.b[i] * t.b[j];
      m = std::max(m, std::abs(mij));
    }
  }
  return m;
}

namespace {

struct RegistryEntry {
  const char* name;
  int order;
  std::vector<double> b;
};

const std::vector<RegistryEntry>& registry_table() {
  static const std::vector<RegistryEntry> entries = [] {
    const double b1 = 2.70309412, b2 = -0.53652708, b3 = 2.37893931;
    return std::vector<RegistryEntry>{
        {"dirk12", 2, {1.0}},
        {"dirk22", 2, {0.5, 0.5}},
        {"dirk33", 3, {1.351207, 1.351207, -1.702414}},
        {"dirk44_as_printed", 4, {b1, b2, b3, 1.8606818856}},
        // last weight chosen so that the weights sum to one
        {"dirk44_corrected", 4, {b1, b2, b3, 1.0 - (b1 + b2 + b3)}},
        {"dirk54", 4,
         {-2.150611289942181, 1.452223059167718, 2.3967764615489258, 1.452223059167718,
          -2.150611289942181}},
        {"dirk65", 5,
         {0.5080048194000274, 1.360107162294827, 2.0192933591817224, 0.5685658926458251,
          -1.4598520495864393, -1.9961191839359627}},
    };
  }();
  return entries;
}

}  // namespace

const std::vector<std::string>& registry_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : registry_table()) out.emplace_back(e.name);
    return out;
  }();
  return names;
}

Tableau registry(std::string_view name) {
  for (const auto& e : registry_table()) {
    if (name == e.name) return tableau_from_b(e.b, e.order, e.name);
  }
  throw LookupError("unknown tableau '" + std::string(name) + "'");
}

Tableau lookup_tableau(std::string_view name) {
  if (name == "explicit_euler") return make_tableau({1.0}, {0.0}, 1, "explicit_euler");
  if (name == "backward_euler") return make_tableau({1.0}, {1.0}, 1, "backward_euler");
  return registry(name);
}

namespace {

double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

double consistency_residual(const NlsProblem& problem, const StageSolution& s) {
  const ComplexField f = f_rhs(problem, s.u, s.r);
  const RealField g = g_rhs(s.u, s.f);
  double rf = 0.0, rg = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    rf = std::max(rf, std::abs(s.f[j] - f[j]));
    rg = std::max(rg, std::abs(s.g[j] - g[j]));
  }
  return std::max(rf, rg);
}

}  // namespace

StageSolution solve_stage(const NlsProblem& problem, std::span<const Complex> rhs_u,
                          std::span<const double> rhs_r, double tau,
                          std::span<const Complex> guess_u, std::span<const double> guess_r,
                          const SolverConfig& cfg, double tol_scale, std::size_t stage) {
  const auto& space = problem.space;
  space.check_size(rhs_u.size(), "solve_stage rhs_u");
  space.check_size(rhs_r.size(), "solve_stage rhs_r");
  space.check_size(guess_u.size(), "solve_stage guess_u");
  space.check_size(guess_r.size(), "solve_stage guess_r");
  if (tau == 0.0 || !std::isfinite(tau)) {
    throw ConfigError("solve_stage requires a finite nonzero diagonal coefficient");
  }
  if (!(cfg.tol > 0.0) || cfg.max_iters < 1) {
    throw ConfigError("solver tolerance must be positive and max_iters >= 1");
  }

  const std::size_t n = rhs_u.size();
  const double tol = cfg.tol * tol_scale;
  const Complex i_tau_beta(0.0, tau * problem.beta);

  StageSolution s;
  s.u.assign(guess_u.begin(), guess_u.end());
  s.r.assign(guess_r.begin(), guess_r.end());
  ComplexField work(n);
  double increment = 0.0;

  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    ComplexField u_next;
    if (cfg.linearized) {
      // (I - i tau L) U' = rhs_u + i tau beta R U
      for (std::size_t j = 0; j < n; ++j) work[j] = rhs_u[j] + i_tau_beta * s.r[j] * s.u[j];
      u_next = space.solve_shifted(work, tau);
    } else {
      const ComplexField f = f_rhs(problem, s.u, s.r);
      u_next.resize(n);
      for (std::size_t j = 0; j < n; ++j) u_next[j] = rhs_u[j] + tau * f[j];
    }
    const ComplexField f_next = f_rhs(problem, u_next, s.r);
    const RealField g_next = g_rhs(u_next, f_next);

    increment = 0.0;
    bool finite = true;
    for (std::size_t j = 0; j < n; ++j) {
      const double r_next = rhs_r[j] + tau * g_next[j];
      increment = std::max({increment, std::abs(u_next[j] - s.u[j]), std::abs(r_next - s.r[j])});
      finite = finite && std::isfinite(r_next) && std::isfinite(u_next[j].real()) &&
               std::isfinite(u_next[j].imag());
      s.r[j] = r_next;
    }
    s.u = std::move(u_next);
    if (!finite || !std::isfinite(increment)) {
      throw DivergenceError("stage " + std::to_string(stage + 1) +
                                ": non-finite value in fixed-point iteration",
                            stage, k, increment);
    }
    if (increment <= tol) {
      s.iterations = k;
      s.f.resize(n);
      s.g.resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        s.f[j] = (s.u[j] - rhs_u[j]) / tau;
        s.g[j] = (s.r[j] - rhs_r[j]) / tau;
      }
      s.residual = consistency_residual(problem, s);
      return s;
    }
  }
  throw SolverError("stage " + std::to_string(stage + 1) + ": no convergence after " +
                        std::to_string(cfg.max_iters) + " iterations (increment " +
                        std::to_string(increment) + ")",
                    stage, cfg.max_iters, increment);
}

std::size_t StepReport::max_iterations() const {
  std::size_t m = 0;
  for (auto k : stage_iterations) m = std::max(m, k);
  return m;
}

StepReport step(const NlsProblem& problem, IeqState& state, double dt, const Tableau& tableau,
                const SolverConfig& cfg, StepTrace* trace) {
  const auto& space = problem.space;
  space.check_size(state.u.size(), "step u");
  space.check_size(state.r.size(), "step r");
  if (dt == 0.0 || !std::isfinite(dt)) throw ConfigError("time step must be finite and nonzero");
  if (!cfg.allow_nonconservative && conservative_defect(tableau) > 1e-10) {
    throw ConfigError("tableau '" + tableau.name +
                      "' does not preserve quadratic invariants; set allow_nonconservative "
                      "to run it anyway");
  }

  const std::size_t n = state.u.size();
  const std::size_t s = tableau.stages;
  const double tol_scale = 1.0 + max_abs(state.u);

  std::vector<StageSolution> stages;
  stages.reserve(s);
  StepReport report;
  report.stage_iterations.reserve(s);

  for (std::size_t i = 0; i < s; ++i) {
    ComplexField rhs_u = state.u;
    RealField rhs_r = state.r;
    for (std::size_t j = 0; j < i; ++j) {
      const double w = dt * tableau.coeff(i, j);
      if (w == 0.0) continue;
      for (std::size_t q = 0; q < n; ++q) {
        rhs_u[q] += w * stages[j].f[q];
        rhs_r[q] += w * stages[j].g[q];
      }
    }
    const double tau = dt * tableau.coeff(i, i);
    StageSolution sol;
    if (tau == 0.0) {
      sol.f = f_rhs(problem, rhs_u, rhs_r);
      sol.g = g_rhs(rhs_u, sol.f);
      sol.u = std::move(rhs_u);
      sol.r = std::move(rhs_r);
    } else {
      const ComplexField& gu = i == 0 ? state.u : stages[i - 1].u;
      const RealField& gr = i == 0 ? state.r : stages[i - 1].r;
      sol = solve_stage(problem, rhs_u, rhs_r, tau, gu, gr, cfg, tol_scale, i);
    }
    report.stage_iterations.push_back(sol.iterations);
    report.max_residual = std::max(report.max_residual, sol.residual);
    stages.push_back(std::move(sol));
  }

  for (std::size_t i = 0; i < s; ++i) {
    const double w = dt * tableau.b[i];
    for (std::size_t q = 0; q < n; ++q) {
      state.u[q] += w * stages[i].f[q];
      state.r[q] += w * stages[i].g[q];
    }
  }
  state.t += dt;
  if (trace != nullptr) trace->stages = std::move(stages);
  return report;
}

std::size_t step_count(double t0, double t_end, double dt) {
  if (dt == 0.0 || !std::isfinite(dt)) throw ConfigError("time step must be finite and nonzero");
  const double ratio = (t_end - t0) / dt;
  if (ratio < -1e-9) throw ConfigError("t_end lies behind t0 for the given step sign");
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-8 * std::max(1.0, steps)) {
    throw ConfigError("(t_end - t0) / dt = " + std::to_string(ratio) +
                      " is not an integer number of steps");
  }
  return static_cast<std::size_t>(steps);
}

IeqState integrate(const NlsProblem& problem, IeqState state, double t_end, double dt,
                   const Tableau& tableau, const SolverConfig& cfg,
                   const StepObserver& observer) {
  const double t0 = state.t;
  const std::size_t steps = step_count(t0, t_end, dt);
  InvariantRecord reference;
  if (observer) reference = initial_record(problem, state);
  for (std::size_t k = 1; k <= steps; ++k) {
    StepReport report;
    try {
      report = step(problem, state, dt, tableau, cfg);
    } catch (SolverError& e) {
      e.set_step(k);
      throw;
    }
    state.t = (k == steps) ? t_end : t0 + static_cast<double>(k) * dt;
    if (observer) observer(k, state, record_invariants(problem, state, reference), report);
  }
  return state;
}

}  // namespace ieqnls
