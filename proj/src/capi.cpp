#include "ieqnls/ieqnls.h"

#include <cstring>
#include <ostream>
#include <sstream>
#include <streambuf>
#include <string>

#include "ieqnls/dirk.hpp"
#include "ieqnls/errors.hpp"
#include "ieqnls/experiment.hpp"
#include "ieqnls/scenarios.hpp"

struct ieqnls_tableau {
  ieqnls::Tableau impl;
};

struct ieqnls_problem {
  ieqnls::NlsProblem impl;
};

struct ieqnls_state {
  ieqnls::IeqState impl;
};

struct ieqnls_run_config {
  ieqnls::RunConfig impl;
};

namespace {

thread_local std::string last_error;

ieqnls_status fail(ieqnls_status code, const char* what) {
  last_error = what;
  return code;
}

template <class F>
ieqnls_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return IEQNLS_OK;
  } catch (const ieqnls::DivergenceError& e) {
    return fail(IEQNLS_ERR_DIVERGED, e.what());
  } catch (const ieqnls::SolverError& e) {
    return fail(IEQNLS_ERR_SOLVER, e.what());
  } catch (const ieqnls::ConfigError& e) {
    return fail(IEQNLS_ERR_CONFIG, e.what());
  } catch (const ieqnls::DimensionError& e) {
    return fail(IEQNLS_ERR_DIMENSION, e.what());
  } catch (const ieqnls::LookupError& e) {
    return fail(IEQNLS_ERR_LOOKUP, e.what());
  } catch (const ieqnls::DataError& e) {
    return fail(IEQNLS_ERR_DATA, e.what());
  } catch (const std::exception& e) {
    return fail(IEQNLS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(IEQNLS_ERR_INTERNAL, "unknown exception");
  }
}

// Forwards each completed line to a C callback.
class CallbackBuf : public std::streambuf {
public:
  CallbackBuf(ieqnls_log_callback cb, void* user) : cb_(cb), user_(user) {}
  ~CallbackBuf() override { flush_line(); }

protected:
  int_type overflow(int_type ch) override {
    if (ch == traits_type::eof()) return ch;
    if (ch == '\n') {
      flush_line();
    } else {
      line_.push_back(static_cast<char>(ch));
    }
    return ch;
  }

private:
  void flush_line() {
    if (!line_.empty() && cb_ != nullptr) cb_(line_.c_str(), user_);
    line_.clear();
  }

  ieqnls_log_callback cb_;
  void* user_;
  std::string line_;
};

ieqnls::SolverConfig to_cpp(const ieqnls_solver_config* cfg) {
  ieqnls::SolverConfig out;
  if (cfg != nullptr) {
    out.tol = cfg->tol;
    out.max_iters = cfg->max_iters;
    out.linearized = cfg->linearized != 0;
    out.allow_nonconservative = cfg->allow_nonconservative != 0;
  }
  return out;
}

ieqnls::ComplexField from_interleaved(const double* u, std::size_t size) {
  ieqnls::ComplexField out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = {u[2 * i], u[2 * i + 1]};
  return out;
}

void log_summary(std::ostream& log, const ieqnls::RunSummary& s) {
  log << "summary scenario=" << s.scenario << " tableau=" << s.tableau
      << " steps=" << s.steps_completed << "/" << s.steps
      << " max|mass_drift|=" << ieqnls::format_real(s.max_abs_mass_drift)
      << " max|energy_drift|=" << ieqnls::format_real(s.max_abs_energy_drift)
      << " peak=" << ieqnls::format_real(s.final_peak_amplitude);
  if (s.l2_error) log << " l2_error=" << ieqnls::format_real(*s.l2_error);
  log << "\n";
}

#define IEQNLS_REQUIRE(cond)                                                      \
  do {                                                                            \
    if (!(cond)) return fail(IEQNLS_ERR_INVALID_ARGUMENT, "null or invalid argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* ieqnls_version(void) { return "1.0.0"; }

const char* ieqnls_last_error(void) { return last_error.c_str(); }

size_t ieqnls_tableau_registry_count(void) { return ieqnls::registry_names().size(); }

const char* ieqnls_tableau_registry_name(size_t index) {
  const auto& names = ieqnls::registry_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

ieqnls_status ieqnls_tableau_create(const char* name, ieqnls_tableau** out) {
  IEQNLS_REQUIRE(name != nullptr && out != nullptr);
  return guarded([&] { *out = new ieqnls_tableau{ieqnls::lookup_tableau(name)}; });
}

ieqnls_status ieqnls_tableau_from_b(const double* b, size_t stages, int claimed_order,
                                    const char* name, ieqnls_tableau** out) {
  IEQNLS_REQUIRE(b != nullptr && out != nullptr && stages > 0);
  return guarded([&] {
    *out = new ieqnls_tableau{ieqnls::tableau_from_b(std::vector<double>(b, b + stages),
                                                     claimed_order, name ? name : "custom")};
  });
}

void ieqnls_tableau_destroy(ieqnls_tableau* t) { delete t; }

ieqnls_status ieqnls_tableau_stages(const ieqnls_tableau* t, size_t* stages) {
  IEQNLS_REQUIRE(t != nullptr && stages != nullptr);
  *stages = t->impl.stages;
  return IEQNLS_OK;
}

ieqnls_status ieqnls_tableau_order(const ieqnls_tableau* t, int* order) {
  IEQNLS_REQUIRE(t != nullptr && order != nullptr);
  *order = t->impl.claimed_order;
  return IEQNLS_OK;
}

ieqnls_status ieqnls_tableau_coefficients(const ieqnls_tableau* t, double* b, double* a,
                                          double* c) {
  IEQNLS_REQUIRE(t != nullptr);
  const auto& tab = t->impl;
  if (b != nullptr) std::copy(tab.b.begin(), tab.b.end(), b);
  if (a != nullptr) std::copy(tab.a.begin(), tab.a.end(), a);
  if (c != nullptr) std::copy(tab.c.begin(), tab.c.end(), c);
  return IEQNLS_OK;
}

ieqnls_status ieqnls_tableau_defect(const ieqnls_tableau* t, double* defect) {
  IEQNLS_REQUIRE(t != nullptr && defect != nullptr);
  *defect = ieqnls::conservative_defect(t->impl);
  return IEQNLS_OK;
}

ieqnls_status ieqnls_tableau_report(const char* name, char* buf, size_t capacity,
                                    size_t* needed) {
  IEQNLS_REQUIRE(name != nullptr);
  return guarded([&] {
    const std::string text = ieqnls::tableau_report(name);
    if (needed != nullptr) *needed = text.size() + 1;
    if (buf != nullptr && capacity > 0) {
      const std::size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

ieqnls_status ieqnls_problem_create_1d(double a, double b, size_t n, double beta,
                                       ieqnls_problem** out) {
  IEQNLS_REQUIRE(out != nullptr);
  return guarded([&] {
    *out = new ieqnls_problem{
        ieqnls::NlsProblem(beta, ieqnls::SpectralSpace(ieqnls::build_grid_1d(a, b, n)))};
  });
}

ieqnls_status ieqnls_problem_create_2d(double ax, double bx, double ay, double by, size_t n,
                                       double beta, ieqnls_problem** out) {
  IEQNLS_REQUIRE(out != nullptr);
  return guarded([&] {
    *out = new ieqnls_problem{ieqnls::NlsProblem(
        beta, ieqnls::SpectralSpace(ieqnls::build_grid_2d(ax, bx, ay, by, n)))};
  });
}

ieqnls_status ieqnls_problem_create_scenario(const char* scenario, size_t n,
                                             ieqnls_problem** out) {
  IEQNLS_REQUIRE(scenario != nullptr && out != nullptr);
  return guarded(
      [&] { *out = new ieqnls_problem{ieqnls::scenario(scenario).make_problem(n)}; });
}

void ieqnls_problem_destroy(ieqnls_problem* p) { delete p; }

ieqnls_status ieqnls_problem_size(const ieqnls_problem* p, size_t* size) {
  IEQNLS_REQUIRE(p != nullptr && size != nullptr);
  *size = p->impl.space.size();
  return IEQNLS_OK;
}

ieqnls_status ieqnls_problem_dim(const ieqnls_problem* p, int* dim) {
  IEQNLS_REQUIRE(p != nullptr && dim != nullptr);
  *dim = p->impl.space.dim();
  return IEQNLS_OK;
}

ieqnls_status ieqnls_problem_nodes(const ieqnls_problem* p, int axis, double* nodes,
                                   size_t len) {
  IEQNLS_REQUIRE(p != nullptr && nodes != nullptr);
  if (axis < 0 || axis >= p->impl.space.dim()) {
    return fail(IEQNLS_ERR_DIMENSION, "axis out of range");
  }
  const auto& x = p->impl.space.axis(axis).nodes;
  if (len < x.size()) return fail(IEQNLS_ERR_INVALID_ARGUMENT, "node buffer too short");
  std::copy(x.begin(), x.end(), nodes);
  return IEQNLS_OK;
}

ieqnls_status ieqnls_state_create(const ieqnls_problem* p, const double* u, size_t size,
                                  double t0, ieqnls_state** out) {
  IEQNLS_REQUIRE(p != nullptr && u != nullptr && out != nullptr);
  return guarded([&] {
    *out = new ieqnls_state{ieqnls::init_state(p->impl, from_interleaved(u, size), t0)};
  });
}

ieqnls_status ieqnls_state_create_scenario(const ieqnls_problem* p, const char* scenario,
                                           ieqnls_state** out) {
  IEQNLS_REQUIRE(p != nullptr && scenario != nullptr && out != nullptr);
  return guarded([&] {
    const auto& sc = ieqnls::scenario(scenario);
    if (sc.dim != p->impl.space.dim()) {
      throw ieqnls::ConfigError("scenario dimension does not match the problem");
    }
    *out = new ieqnls_state{ieqnls::init_state(p->impl, sc.initial(p->impl.space), 0.0)};
  });
}

void ieqnls_state_destroy(ieqnls_state* s) { delete s; }

ieqnls_status ieqnls_state_time(const ieqnls_state* s, double* t) {
  IEQNLS_REQUIRE(s != nullptr && t != nullptr);
  *t = s->impl.t;
  return IEQNLS_OK;
}

ieqnls_status ieqnls_state_get_u(const ieqnls_state* s, double* u, size_t size) {
  IEQNLS_REQUIRE(s != nullptr && u != nullptr);
  if (size < s->impl.u.size()) return fail(IEQNLS_ERR_INVALID_ARGUMENT, "u buffer too short");
  for (std::size_t i = 0; i < s->impl.u.size(); ++i) {
    u[2 * i] = s->impl.u[i].real();
    u[2 * i + 1] = s->impl.u[i].imag();
  }
  return IEQNLS_OK;
}

ieqnls_status ieqnls_state_get_r(const ieqnls_state* s, double* r, size_t size) {
  IEQNLS_REQUIRE(s != nullptr && r != nullptr);
  if (size < s->impl.r.size()) return fail(IEQNLS_ERR_INVALID_ARGUMENT, "r buffer too short");
  std::copy(s->impl.r.begin(), s->impl.r.end(), r);
  return IEQNLS_OK;
}

ieqnls_status ieqnls_compute_invariants(const ieqnls_problem* p, const ieqnls_state* s,
                                        ieqnls_invariants* out) {
  IEQNLS_REQUIRE(p != nullptr && s != nullptr && out != nullptr);
  return guarded([&] {
    const auto rec = ieqnls::initial_record(p->impl, s->impl);
    *out = {rec.mass, rec.energy_modified, rec.energy_original};
  });
}

void ieqnls_solver_config_default(ieqnls_solver_config* cfg) {
  if (cfg == nullptr) return;
  const ieqnls::SolverConfig d;
  *cfg = {d.tol, d.max_iters, d.linearized ? 1 : 0, d.allow_nonconservative ? 1 : 0};
}

ieqnls_status ieqnls_step(const ieqnls_problem* p, ieqnls_state* s, const ieqnls_tableau* t,
                          double dt, const ieqnls_solver_config* cfg,
                          ieqnls_step_report* report) {
  IEQNLS_REQUIRE(p != nullptr && s != nullptr && t != nullptr);
  return guarded([&] {
    // step mutates in place; work on a copy so a failure leaves the state intact
    ieqnls::IeqState next = s->impl;
    const auto rep = ieqnls::step(p->impl, next, dt, t->impl, to_cpp(cfg));
    s->impl = std::move(next);
    if (report != nullptr) *report = {rep.max_iterations(), rep.max_residual};
  });
}

ieqnls_status ieqnls_integrate(const ieqnls_problem* p, ieqnls_state* s, const ieqnls_tableau* t,
                               double t_end, double dt, const ieqnls_solver_config* cfg,
                               ieqnls_step_callback cb, void* user) {
  IEQNLS_REQUIRE(p != nullptr && s != nullptr && t != nullptr);
  return guarded([&] {
    ieqnls::StepObserver observer;
    if (cb != nullptr) {
      observer = [&](std::size_t k, const ieqnls::IeqState& st,
                     const ieqnls::InvariantRecord& rec, const ieqnls::StepReport& rep) {
        const ieqnls_invariants inv{rec.mass, rec.energy_modified, rec.energy_original};
        const ieqnls_step_report r{rep.max_iterations(), rep.max_residual};
        cb(k, st.t, &inv, &r, user);
      };
    }
    s->impl = ieqnls::integrate(p->impl, s->impl, t_end, dt, t->impl, to_cpp(cfg), observer);
  });
}

ieqnls_status ieqnls_run_config_create(ieqnls_run_config** out) {
  IEQNLS_REQUIRE(out != nullptr);
  return guarded([&] {
    auto* cfg = new ieqnls_run_config{};
    cfg->impl.output_dir = ieqnls::default_output_dir();
    *out = cfg;
  });
}

void ieqnls_run_config_destroy(ieqnls_run_config* cfg) { delete cfg; }

ieqnls_status ieqnls_run_config_set(ieqnls_run_config* cfg, const char* key, const char* value) {
  IEQNLS_REQUIRE(cfg != nullptr && key != nullptr && value != nullptr);
  return guarded([&] { ieqnls::apply_setting(cfg->impl, key, value); });
}

ieqnls_status ieqnls_run_config_load(ieqnls_run_config* cfg, const char* path) {
  IEQNLS_REQUIRE(cfg != nullptr && path != nullptr);
  return guarded([&] { cfg->impl = ieqnls::load_config_file(path, cfg->impl); });
}

ieqnls_status ieqnls_cmd_run(const ieqnls_run_config* cfg, ieqnls_log_callback log, void* user) {
  IEQNLS_REQUIRE(cfg != nullptr);
  return guarded([&] {
    CallbackBuf buf(log, user);
    std::ostream out(&buf);
    log_summary(out, ieqnls::run_experiment(cfg->impl, &out));
  });
}

ieqnls_status ieqnls_cmd_longtime(const ieqnls_run_config* cfg, ieqnls_log_callback log,
                                  void* user) {
  IEQNLS_REQUIRE(cfg != nullptr);
  return guarded([&] {
    CallbackBuf buf(log, user);
    std::ostream out(&buf);
    log_summary(out, ieqnls::run_longtime(cfg->impl, &out));
  });
}

ieqnls_status ieqnls_cmd_converge(const ieqnls_run_config* cfg, ieqnls_log_callback log,
                                  void* user) {
  IEQNLS_REQUIRE(cfg != nullptr);
  return guarded([&] {
    CallbackBuf buf(log, user);
    std::ostream out(&buf);
    ieqnls::run_convergence(cfg->impl, &out);
  });
}

}  // extern "C"
