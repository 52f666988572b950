#include "ieqnls/ieq.hpp"

#include <cmath>

#include "ieqnls/errors.hpp"

namespace ieqnls {

NlsProblem::NlsProblem(double beta_, SpectralSpace space_)
    : beta(beta_), space(std::move(space_)) {
  if (!std::isfinite(beta)) throw ConfigError("beta must be finite");
}

IeqState init_state(const NlsProblem& problem, ComplexField u0, double t0) {
  problem.space.check_size(u0.size(), "init_state");
  IeqState s;
  s.r.resize(u0.size());
  for (std::size_t i = 0; i < u0.size(); ++i) s.r[i] = std::norm(u0[i]);
  s.u = std::move(u0);
  s.t = t0;
  return s;
}

ComplexField f_rhs(const NlsProblem& problem, std::span<const Complex> u,
                   std::span<const double> r) {
  problem.space.check_size(r.size(), "f_rhs r");
  ComplexField f = problem.space.laplacian(u);
  const Complex i(0.0, 1.0);
  for (std::size_t j = 0; j < f.size(); ++j) {
    f[j] = i * (f[j] + problem.beta * r[j] * u[j]);
  }
  return f;
}

RealField g_rhs(std::span<const Complex> u, std::span<const Complex> f) {
  if (u.size() != f.size()) throw DimensionError("g_rhs: u and f lengths differ");
  RealField g(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    g[j] = 2.0 * (u[j].real() * f[j].real() + u[j].imag() * f[j].imag());
  }
  return g;
}

double mass(const NlsProblem& problem, const IeqState& state) {
  return problem.space.norm2(state.u);
}

namespace {

double gradient_energy(const NlsProblem& problem, std::span<const Complex> u) {
  double s = 0.0;
  for (int axis = 0; axis < problem.space.dim(); ++axis) {
    s += problem.space.norm2(problem.space.derivative(u, axis));
  }
  return -0.5 * s;
}

}  // namespace

double energy_modified(const NlsProblem& problem, const IeqState& state) {
  problem.space.check_size(state.r.size(), "energy_modified r");
  return gradient_energy(problem, state.u) +
         0.25 * problem.beta * problem.space.inner(state.r, state.r);
}

double energy_original(const NlsProblem& problem, const IeqState& state) {
  double quartic = 0.0;
  for (const auto& z : state.u) quartic += std::norm(z) * std::norm(z);
  return gradient_energy(problem, state.u) +
         0.25 * problem.beta * problem.space.weight() * quartic;
}

double s_quadratic_form(const NlsProblem& problem, std::span<const Complex> u,
                        std::span<const double> r) {
  problem.space.check_size(r.size(), "s_quadratic_form r");
  const ComplexField lu = problem.space.laplacian(u);
  // u^H (L/2) u is real because L is symmetric; take the real part of the round-off
  Complex uhlu = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) uhlu += std::conj(u[j]) * lu[j];
  double rr = 0.0;
  for (double x : r) rr += x * x;
  return problem.space.weight() * (0.5 * uhlu.real() + 0.25 * problem.beta * rr);
}

double energy_flux_defect(const NlsProblem& problem, std::span<const Complex> u,
                          std::span<const double> r) {
  const ComplexField f = f_rhs(problem, u, r);
  const RealField g = g_rhs(u, f);
  ComplexField ubar(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) ubar[j] = std::conj(u[j]);
  const ComplexField lubar = problem.space.laplacian(ubar);
  Complex flu = 0.0;
  double gr = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    flu += f[j] * lubar[j];
    gr += g[j] * r[j];
  }
  return std::abs(0.5 * flu.real() + 0.25 * problem.beta * gr);
}

}  // namespace ieqnls
