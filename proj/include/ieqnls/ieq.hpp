#pragma once

#include <span>

#include "ieqnls/spectral.hpp"

namespace ieqnls {

/// Quadratized NLS unknowns: wave field u and auxiliary r (= |u|^2 initially).
struct IeqState {
  ComplexField u;
  RealField r;
  double t = 0.0;
};

/// i u_t + Lap u + beta |u|^2 u = 0 on a periodic grid.
struct NlsProblem {
  double beta = 0.0;
  SpectralSpace space;

  NlsProblem(double beta_, SpectralSpace space_);
};

IeqState init_state(const NlsProblem& problem, ComplexField u0, double t0 = 0.0);

/// f(u, r) = i L u + i beta r.u
ComplexField f_rhs(const NlsProblem& problem, std::span<const Complex> u,
                   std::span<const double> r);

/// g = 2 Re(conj(u) f), evaluated in real arithmetic so r stays exactly real.
RealField g_rhs(std::span<const Complex> u, std::span<const Complex> f);

/// ||u||^2
double mass(const NlsProblem& problem, const IeqState& state);

/// -1/2 sum_axes ||D u||^2 + beta/4 ||r||^2
double energy_modified(const NlsProblem& problem, const IeqState& state);

/// -1/2 sum_axes ||D u||^2 + beta/4 * weight * sum |u|^4
double energy_original(const NlsProblem& problem, const IeqState& state);

/// Grid-weighted (u, r)^H S (u, r) with S = blockdiag(L/2, beta/4 I).
/// Equal to energy_modified; computed through L instead of D1.
double s_quadratic_form(const NlsProblem& problem, std::span<const Complex> u,
                        std::span<const double> r);

/// |1/2 Re(f^T L conj(u)) + beta/4 g^T r| with f = f_rhs(u, r), g = g_rhs(u, f).
/// Vanishes for every complex u and real r.
double energy_flux_defect(const NlsProblem& problem, std::span<const Complex> u,
                          std::span<const double> r);

}  // namespace ieqnls
