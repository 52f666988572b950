#pragma once

#include <span>
#include <vector>

#include "ieqnls/ieq.hpp"

namespace ieqnls {

struct InvariantRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy_modified = 0.0;
  double energy_original = 0.0;
  double mass_drift = 0.0;     ///< mass - mass at t0
  double energy_drift = 0.0;   ///< energy_modified - energy_modified at t0
};

/// Reference record for a run; drifts are zero.
InvariantRecord initial_record(const NlsProblem& problem, const IeqState& state);

InvariantRecord record_invariants(const NlsProblem& problem, const IeqState& state,
                                  const InvariantRecord& reference);

/// sqrt(weight * sum |a - b|^2)
double l2_error(const SpectralSpace& space, std::span<const Complex> numeric,
                std::span<const Complex> exact);
double linf_error(std::span<const Complex> numeric, std::span<const Complex> exact);

struct ConvergenceRow {
  double dt = 0.0;
  double l2_error = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;   ///< dt strictly decreasing
};

/// log(e_k / e_{k+1}) / log(dt_k / dt_{k+1}) for each adjacent pair.
std::vector<double> pairwise_orders(const ConvergenceTable& table);

/// Least-squares slope of log(error) against log(dt). Needs at least three
/// rows; throws DataError on non-positive values.
double fit_order(const ConvergenceTable& table);

/// Drops rows whose error sits below `floor` before fitting.
ConvergenceTable above_floor(const ConvergenceTable& table, double floor);

}  // namespace ieqnls
