#include "ieqnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "ieqnls/errors.hpp"

namespace ieqnls {

InvariantRecord initial_record(const NlsProblem& problem, const IeqState& state) {
  InvariantRecord rec;
  rec.t = state.t;
  rec.mass = mass(problem, state);
  rec.energy_modified = energy_modified(problem, state);
  rec.energy_original = energy_original(problem, state);
  return rec;
}

InvariantRecord record_invariants(const NlsProblem& problem, const IeqState& state,
                                  const InvariantRecord& reference) {
  InvariantRecord rec = initial_record(problem, state);
  rec.mass_drift = rec.mass - reference.mass;
  rec.energy_drift = rec.energy_modified - reference.energy_modified;
  return rec;
}

double l2_error(const SpectralSpace& space, std::span<const Complex> numeric,
                std::span<const Complex> exact) {
  space.check_size(numeric.size(), "l2_error");
  space.check_size(exact.size(), "l2_error");
  double s = 0.0;
  for (std::size_t i = 0; i < numeric.size(); ++i) s += std::norm(numeric[i] - exact[i]);
  return std::sqrt(space.weight() * s);
}

double linf_error(std::span<const Complex> numeric, std::span<const Complex> exact) {
  if (numeric.size() != exact.size()) throw DimensionError("linf_error: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    m = std::max(m, std::abs(numeric[i] - exact[i]));
  }
  return m;
}

namespace {

void validate(const ConvergenceTable& table, std::size_t min_rows) {
  if (table.rows.size() < min_rows) {
    throw DataError("convergence table needs at least " + std::to_string(min_rows) + " rows");
  }
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& row = table.rows[k];
    if (!(row.dt > 0.0) || !(row.l2_error > 0.0) || !std::isfinite(row.l2_error)) {
      throw DataError("convergence table requires positive finite dt and errors");
    }
    if (k > 0 && !(row.dt < table.rows[k - 1].dt)) {
      throw DataError("convergence table dt values must be strictly decreasing");
    }
  }
}

}  // namespace

std::vector<double> pairwise_orders(const ConvergenceTable& table) {
  validate(table, 2);
  std::vector<double> orders;
  for (std::size_t k = 0; k + 1 < table.rows.size(); ++k) {
    const auto& p = table.rows[k];
    const auto& q = table.rows[k + 1];
    orders.push_back(std::log(p.l2_error / q.l2_error) / std::log(p.dt / q.dt));
  }
  return orders;
}

double fit_order(const ConvergenceTable& table) {
  validate(table, 3);
  const double n = static_cast<double>(table.rows.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& row : table.rows) {
    const double x = std::log(row.dt);
    const double y = std::log(row.l2_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceTable above_floor(const ConvergenceTable& table, double floor) {
  ConvergenceTable out;
  std::copy_if(table.rows.begin(), table.rows.end(), std::back_inserter(out.rows),
               [floor](const ConvergenceRow& r) { return r.l2_error >= floor; });
  return out;
}

}  // namespace ieqnls
