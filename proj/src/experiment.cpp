#include "ieqnls/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ieqnls/errors.hpp"
#include "ieqnls/scenarios.hpp"
#include "json.hpp"

namespace ieqnls {

namespace fs = std::filesystem;

namespace {

constexpr const char* kInvariantsSchema = "# ieqnls invariants v1";
constexpr const char* kProfileSchema = "# ieqnls profile v1";
constexpr const char* kErrorSchema = "# ieqnls error v1";
constexpr const char* kConvergenceSchema = "# ieqnls convergence v1";

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.npos
                                                                             : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_plain(const std::string& token, std::string_view key) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size() || !std::isfinite(v)) {
    throw ConfigError("invalid number '" + token + "' for " + std::string(key));
  }
  return v;
}

// Accepts plain reals plus the forms "2^-9", "pi", "-7pi", "2pi".
double parse_real(const std::string& token, std::string_view key) {
  if (token.size() >= 2 && token.compare(token.size() - 2, 2, "pi") == 0) {
    const std::string coeff = token.substr(0, token.size() - 2);
    double c = 1.0;
    if (coeff == "-") {
      c = -1.0;
    } else if (!coeff.empty() && coeff != "+") {
      c = parse_plain(coeff, key);
    }
    return c * std::numbers::pi;
  }
  if (const auto caret = token.find('^'); caret != std::string::npos) {
    return std::pow(parse_plain(token.substr(0, caret), key),
                    parse_plain(token.substr(caret + 1), key));
  }
  return parse_plain(token, key);
}

std::size_t parse_count(const std::string& token, std::string_view key) {
  const double v = parse_plain(token, key);
  if (v < 0.0 || v != std::floor(v)) {
    throw ConfigError("invalid count '" + token + "' for " + std::string(key));
  }
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& token, std::string_view key) {
  if (token == "1" || token == "true" || token == "yes" || token == "on") return true;
  if (token == "0" || token == "false" || token == "no" || token == "off") return false;
  throw ConfigError("invalid boolean '" + token + "' for " + std::string(key));
}

std::vector<double> parse_real_list(std::string_view value, std::string_view key) {
  std::vector<double> out;
  for (const auto& t : split_list(value)) out.push_back(parse_real(t, key));
  return out;
}

double max_abs(const ComplexField& u, std::size_t* where = nullptr) {
  double m = 0.0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::abs(u[i]);
    if (a > m) {
      m = a;
      at = i;
    }
  }
  if (where != nullptr) *where = at;
  return m;
}

std::vector<double> node_location(const SpectralSpace& space, std::size_t index) {
  if (space.dim() == 1) return {space.axis(0).nodes[index]};
  const std::size_t n = space.points_per_axis();
  return {space.axis(0).nodes[index / n], space.axis(1).nodes[index % n]};
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void write_profile(const fs::path& path, const NlsProblem& problem, const IeqState& state) {
  auto out = open_csv(path);
  out << kProfileSchema << "\n";
  const auto& space = problem.space;
  if (space.dim() == 1) {
    out << "index,x,re_u,im_u,abs_u,r\n";
    for (std::size_t j = 0; j < state.u.size(); ++j) {
      out << j << ',' << format_real(space.axis(0).nodes[j]) << ','
          << format_real(state.u[j].real()) << ',' << format_real(state.u[j].imag()) << ','
          << format_real(std::abs(state.u[j])) << ',' << format_real(state.r[j]) << '\n';
    }
    return;
  }
  const std::size_t n = space.points_per_axis();
  out << "index_x,index_y,x,y,re_u,im_u,abs_u,r\n";
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t q = j * n + k;
      out << j << ',' << k << ',' << format_real(space.axis(0).nodes[j]) << ','
          << format_real(space.axis(1).nodes[k]) << ',' << format_real(state.u[q].real())
          << ',' << format_real(state.u[q].imag()) << ',' << format_real(std::abs(state.u[q]))
          << ',' << format_real(state.r[q]) << '\n';
    }
  }
}

void write_invariant_row(std::ostream& out, std::size_t step, const InvariantRecord& rec,
                         std::size_t iters, double residual) {
  out << step << ',' << format_real(rec.t) << ',' << format_real(rec.mass) << ','
      << format_real(rec.energy_modified) << ',' << format_real(rec.energy_original) << ','
      << format_real(rec.mass_drift) << ',' << format_real(rec.energy_drift) << ',' << iters
      << ',' << format_real(residual) << '\n';
}

nlohmann::json summary_json(const RunSummary& s, const RunConfig& cfg, const NlsProblem& problem,
                            double dt, double t_end) {
  nlohmann::json j;
  j["scenario"] = s.scenario;
  j["tableau"] = s.tableau;
  j["n"] = problem.space.points_per_axis();
  j["dim"] = problem.space.dim();
  j["beta"] = problem.beta;
  j["dt"] = dt;
  j["t_end"] = t_end;
  j["steps"] = s.steps;
  j["steps_completed"] = s.steps_completed;
  j["status"] = s.success ? "ok" : "failed";
  if (!s.success) j["failure"] = s.failure;
  j["mass0"] = s.mass0;
  j["energy0"] = s.energy0;
  j["max_abs_mass_drift"] = s.max_abs_mass_drift;
  j["max_abs_energy_drift"] = s.max_abs_energy_drift;
  j["initial_peak_amplitude"] = s.initial_peak_amplitude;
  j["final_peak_amplitude"] = s.final_peak_amplitude;
  j["final_peak_location"] = s.final_peak_location;
  j["max_stage_iterations"] = s.max_stage_iterations;
  j["max_residual"] = s.max_residual;
  if (s.l2_error) j["l2_error"] = *s.l2_error;
  if (s.linf_error) j["linf_error"] = *s.linf_error;
  j["record_every"] = cfg.record_every;
  return j;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

SolverConfig solver_config(const RunConfig& cfg) {
  SolverConfig sc;
  if (cfg.tol) sc.tol = *cfg.tol;
  if (cfg.max_iters) sc.max_iters = *cfg.max_iters;
  sc.allow_nonconservative = cfg.allow_nonconservative;
  if (!(sc.tol > 0.0) || sc.max_iters < 1) {
    throw ConfigError("solver tol must be positive and max_iters >= 1");
  }
  return sc;
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

void apply_setting(RunConfig& cfg, std::string_view key_in, std::string_view value_in) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  if (key == "scenario") {
    cfg.scenario = value;
  } else if (key == "tableau") {
    cfg.tableau = value;
  } else if (key == "N" || key == "n") {
    cfg.n = parse_count(value, key);
  } else if (key == "dt") {
    cfg.dt = parse_real(value, key);
  } else if (key == "t_end" || key == "T") {
    cfg.t_end = parse_real(value, key);
  } else if (key == "beta") {
    cfg.beta = parse_real(value, key);
  } else if (key == "domain") {
    cfg.domain = parse_real_list(value, key);
    if (cfg.domain.size() != 2 && cfg.domain.size() != 4) {
      throw ConfigError("domain takes 2 (1D) or 4 (2D) values");
    }
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else if (key == "record_every") {
    cfg.record_every = parse_count(value, key);
  } else if (key == "snapshot_times") {
    cfg.snapshot_times = parse_real_list(value, key);
  } else if (key == "tol") {
    cfg.tol = parse_real(value, key);
  } else if (key == "max_iters") {
    cfg.max_iters = parse_count(value, key);
  } else if (key == "allow_nonconservative") {
    cfg.allow_nonconservative = parse_bool(value, key);
  } else if (key == "tableaux") {
    cfg.tableaux = split_list(value);
  } else if (key == "dts") {
    cfg.dts = parse_real_list(value, key);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

RunConfig parse_config_text(std::string_view text, RunConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(base, std::string_view(line).substr(0, eq),
                  std::string_view(line).substr(eq + 1));
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

std::string default_output_dir() {
  if (const char* env = std::getenv("IEQNLS_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

RunSummary run_experiment(const RunConfig& cfg_in, std::ostream* log) {
  RunConfig cfg = cfg_in;
  if (cfg.scenario.empty()) cfg.scenario = "soliton";
  const Scenario& sc = scenario(cfg.scenario);
  const Tableau tableau =
      lookup_tableau(cfg.tableau.empty() ? sc.default_tableau : cfg.tableau);
  const NlsProblem problem =
      sc.make_problem(cfg.n, cfg.domain, cfg.beta ? &*cfg.beta : nullptr);
  const double dt = cfg.dt.value_or(sc.dt);
  const double t_end = cfg.t_end.value_or(sc.t_end);
  const std::size_t steps = step_count(0.0, t_end, dt);
  if (cfg.record_every == 0) cfg.record_every = sc.default_record_every;
  const SolverConfig solver = solver_config(cfg);
  if (!solver.allow_nonconservative && conservative_defect(tableau) > 1e-10) {
    throw ConfigError("tableau '" + tableau.name +
                      "' is not conservative; pass allow_nonconservative to run it");
  }

  std::vector<std::size_t> snapshot_steps;
  for (double ts : cfg.snapshot_times) {
    if (ts < -1e-12 || ts > t_end * (1.0 + 1e-12) + 1e-12) {
      throw ConfigError("snapshot time " + format_real(ts) + " outside [0, t_end]");
    }
    snapshot_steps.push_back(step_count(0.0, ts, dt));
  }
  std::sort(snapshot_steps.begin(), snapshot_steps.end());

  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());

  IeqState state = init_state(problem, sc.initial(problem.space), 0.0);
  const InvariantRecord reference = initial_record(problem, state);

  RunSummary summary;
  summary.scenario = sc.name;
  summary.tableau = tableau.name;
  summary.steps = steps;
  summary.mass0 = reference.mass;
  summary.energy0 = reference.energy_modified;
  summary.initial_peak_amplitude = max_abs(state.u);

  auto inv = open_csv(dir / "invariants.csv");
  inv << kInvariantsSchema << "\n"
      << "step,t,mass,energy_modified,energy_original,mass_drift,energy_drift,"
         "stage_iters_max,residual_max\n";
  write_invariant_row(inv, 0, reference, 0, 0.0);

  auto snapshot_name = [](std::size_t k) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "snapshot_%06zu.csv", k);
    return std::string(buf);
  };
  if (std::binary_search(snapshot_steps.begin(), snapshot_steps.end(), std::size_t{0})) {
    write_profile(dir / snapshot_name(0), problem, state);
  }

  IeqState last = state;
  const std::size_t log_every = std::max<std::size_t>(1, steps / 10);
  auto observer = [&](std::size_t k, const IeqState& s, const InvariantRecord& rec,
                      const StepReport& report) {
    summary.steps_completed = k;
    summary.max_abs_mass_drift = std::max(summary.max_abs_mass_drift, std::abs(rec.mass_drift));
    summary.max_abs_energy_drift =
        std::max(summary.max_abs_energy_drift, std::abs(rec.energy_drift));
    summary.max_stage_iterations = std::max(summary.max_stage_iterations, report.max_iterations());
    summary.max_residual = std::max(summary.max_residual, report.max_residual);
    if (k % cfg.record_every == 0 || k == steps) {
      write_invariant_row(inv, k, rec, report.max_iterations(), report.max_residual);
    }
    if (std::binary_search(snapshot_steps.begin(), snapshot_steps.end(), k)) {
      write_profile(dir / snapshot_name(k), problem, s);
    }
    if (log != nullptr && k % log_every == 0) {
      *log << "step " << k << "/" << steps << "  t=" << s.t << "  mass_drift=" << rec.mass_drift
           << "  energy_drift=" << rec.energy_drift << "\n";
    }
    last = s;
  };

  try {
    state = integrate(problem, std::move(state), t_end, dt, tableau, solver, observer);
  } catch (const SolverError& e) {
    inv << "# FAILED step=" << e.step() << " stage=" << (e.stage() + 1) << " reason=" << e.what()
        << "\n";
    inv.flush();
    summary.success = false;
    summary.failure = e.what();
    std::size_t where = 0;
    summary.final_peak_amplitude = max_abs(last.u, &where);
    summary.final_peak_location = node_location(problem.space, where);
    write_profile(dir / "final_profile.csv", problem, last);
    write_json(dir / "summary.json", summary_json(summary, cfg, problem, dt, t_end));
    throw;
  }
  inv.flush();

  std::size_t where = 0;
  summary.final_peak_amplitude = max_abs(state.u, &where);
  summary.final_peak_location = node_location(problem.space, where);
  write_profile(dir / "final_profile.csv", problem, state);

  if (sc.exact) {
    const ComplexField exact = sc.exact(problem.space, t_end);
    summary.l2_error = l2_error(problem.space, state.u, exact);
    summary.linf_error = linf_error(state.u, exact);
    auto err = open_csv(dir / "error.csv");
    err << kErrorSchema << "\n"
        << "t_end,l2_error,linf_error\n"
        << format_real(t_end) << ',' << format_real(*summary.l2_error) << ','
        << format_real(*summary.linf_error) << '\n';
  }
  write_json(dir / "summary.json", summary_json(summary, cfg, problem, dt, t_end));
  return summary;
}

RunSummary run_longtime(RunConfig cfg, std::ostream* log) {
  if (cfg.scenario.empty()) cfg.scenario = "longtime";
  if (cfg.scenario != "longtime") {
    throw ConfigError("longtime command runs the 'longtime' scenario only");
  }
  return run_experiment(cfg, log);
}

std::vector<ConvergenceResult> run_convergence(RunConfig cfg, std::ostream* log) {
  if (cfg.scenario.empty()) cfg.scenario = "soliton";
  const Scenario& sc = scenario(cfg.scenario);
  if (!sc.exact) {
    throw ConfigError("scenario '" + sc.name + "' has no exact solution to converge against");
  }
  if (cfg.tableaux.empty()) {
    cfg.tableaux = {"dirk12", "dirk22", "dirk33", "dirk44_as_printed", "dirk44_corrected",
                    "dirk54", "dirk65"};
  }
  if (cfg.dts.empty()) {
    for (int e = 6; e <= 9; ++e) cfg.dts.push_back(std::ldexp(1.0, -e));
  }
  std::sort(cfg.dts.begin(), cfg.dts.end(), std::greater<>());
  if (std::adjacent_find(cfg.dts.begin(), cfg.dts.end()) != cfg.dts.end()) {
    throw ConfigError("convergence time steps must be distinct");
  }
  if (cfg.domain.empty() && sc.name == "soliton") {
    cfg.domain = {-7.0 * std::numbers::pi, 7.0 * std::numbers::pi};
  }
  const std::size_t n = cfg.n != 0 ? cfg.n : 256;
  const double t_end = cfg.t_end.value_or(std::ldexp(1.0, -5));
  const NlsProblem problem = sc.make_problem(n, cfg.domain, cfg.beta ? &*cfg.beta : nullptr);
  const SolverConfig solver = solver_config(cfg);

  std::vector<Tableau> tableaux;
  for (const auto& name : cfg.tableaux) tableaux.push_back(lookup_tableau(name));
  for (double dt : cfg.dts) step_count(0.0, t_end, dt);

  const ComplexField u0 = sc.initial(problem.space);
  const ComplexField exact = sc.exact(problem.space, t_end);

  // Each (tableau, dt) case is an independent integration.
  std::vector<std::future<double>> cases;
  for (const auto& tab : tableaux) {
    for (double dt : cfg.dts) {
      cases.push_back(std::async(std::launch::async, [&, dt, tab]() {
        IeqState s = integrate(problem, init_state(problem, u0), t_end, dt, tab, solver);
        return l2_error(problem.space, s.u, exact);
      }));
    }
  }

  std::vector<ConvergenceResult> results;
  std::size_t idx = 0;
  for (const auto& tab : tableaux) {
    ConvergenceResult res;
    res.tableau = tab.name;
    for (double dt : cfg.dts) res.table.rows.push_back({dt, cases[idx++].get()});
    res.pairwise = pairwise_orders(res.table);
    const ConvergenceTable fit_rows = above_floor(res.table, 1e-12);
    res.fitted_order = fit_rows.rows.size() >= 3 ? fit_order(fit_rows) : std::nan("");
    if (log != nullptr) {
      *log << res.tableau << ": fitted order " << res.fitted_order << "\n";
    }
    results.push_back(std::move(res));
  }

  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
  auto out = open_csv(dir / "convergence.csv");
  out << kConvergenceSchema << "\n" << "tableau,dt,l2_error,pairwise_order,fitted_order\n";
  for (const auto& res : results) {
    for (std::size_t k = 0; k < res.table.rows.size(); ++k) {
      out << res.tableau << ',' << format_real(res.table.rows[k].dt) << ','
          << format_real(res.table.rows[k].l2_error) << ','
          << (k == 0 ? std::string() : format_real(res.pairwise[k - 1])) << ','
          << format_real(res.fitted_order) << '\n';
    }
  }
  return results;
}

std::string tableau_report(std::string_view name) {
  std::vector<Tableau> list;
  if (name == "all") {
    for (const auto& n : registry_names()) list.push_back(registry(n));
  } else {
    list.push_back(lookup_tableau(name));
  }
  std::ostringstream out;
  auto row = [&out](const char* label, const std::vector<double>& v, std::size_t from,
                    std::size_t count) {
    out << "  " << label;
    for (std::size_t i = 0; i < count; ++i) out << ' ' << format_real(v[from + i]);
    out << '\n';
  };
  for (const auto& t : list) {
    out << "tableau " << t.name << "  stages " << t.stages << "  claimed order "
        << t.claimed_order << '\n';
    row("b  ", t.b, 0, t.stages);
    row("c  ", t.c, 0, t.stages);
    for (std::size_t i = 0; i < t.stages; ++i) row(i == 0 ? "A  " : "   ", t.a, i * t.stages, t.stages);
    out << "  sum(b)     " << format_real(t.weight_sum()) << '\n';
    out << "  sum(b*c)   " << format_real(t.weighted_abscissa_sum()) << '\n';
    out << "  m-defect   " << format_real(conservative_defect(t)) << '\n';
    if (std::abs(t.weight_sum() - 1.0) > 1e-6) {
      out << "  WARNING: weights sum to " << format_real(t.weight_sum())
          << ", not 1; the method is inconsistent\n";
    }
    if (conservative_defect(t) > 1e-10) {
      out << "  WARNING: not conservative (b_i a_ij + b_j a_ji != b_i b_j)\n";
    }
  }
  return out.str();
}

}  // namespace ieqnls
