// ieqnls command-line driver. All numerical work goes through the C API in
// libieqnls; this file only parses arguments and maps status codes to exit codes.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ieqnls/ieqnls.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitConfig = 3;

int exit_code(ieqnls_status st) {
  switch (st) {
    case IEQNLS_OK:
      return kExitOk;
    case IEQNLS_ERR_SOLVER:
    case IEQNLS_ERR_DIVERGED:
      return kExitNumerical;
    case IEQNLS_ERR_INTERNAL:
      return kExitInternal;
    default:
      return kExitConfig;
  }
}

int report(ieqnls_status st) {
  if (st != IEQNLS_OK) std::fprintf(stderr, "ieqnls: error: %s\n", ieqnls_last_error());
  return exit_code(st);
}

void print_line(const char* line, void*) {
  std::printf("%s\n", line);
  std::fflush(stdout);
}

// Settings collected from flags, kept as text so the library parses every value
// (e.g. "2^-9", "-7pi") the same way it parses a config file.
struct Settings {
  std::string config_file;
  std::map<std::string, std::string> values;
  bool allow_nonconservative = false;
};

void add_run_flags(CLI::App* cmd, Settings& s) {
  cmd->add_option("--config", s.config_file, "key = value config file; flags override it")
      ->check(CLI::ExistingFile);
  const std::vector<std::pair<std::string, std::string>> keys = {
      {"--scenario", "scenario"},
      {"--tableau", "tableau"},
      {"-N,--N", "N"},
      {"--dt", "dt"},
      {"-T,--t-end", "t_end"},
      {"--beta", "beta"},
      {"--domain", "domain"},
      {"-o,--output-dir", "output_dir"},
      {"--record-every", "record_every"},
      {"--snapshot-times", "snapshot_times"},
      {"--tol", "tol"},
      {"--max-iters", "max_iters"},
  };
  for (const auto& [flag, key] : keys) {
    cmd->add_option_function<std::string>(
        flag, [&s, key = key](const std::string& v) { s.values[key] = v; },
        "sets '" + key + "' (comma-separated lists where applicable)");
  }
  cmd->add_flag("--allow-nonconservative", s.allow_nonconservative,
                "permit tableaux that do not conserve the invariants");
}

void add_converge_flags(CLI::App* cmd, Settings& s) {
  cmd->add_option_function<std::string>(
      "--tableaux", [&s](const std::string& v) { s.values["tableaux"] = v; },
      "comma-separated tableau names (default: whole registry)");
  cmd->add_option_function<std::string>(
      "--dts", [&s](const std::string& v) { s.values["dts"] = v; },
      "comma-separated step sizes (default: 2^-6,2^-7,2^-8,2^-9)");
}

ieqnls_status build_config(const Settings& s, ieqnls_run_config** out) {
  ieqnls_status st = ieqnls_run_config_create(out);
  if (st != IEQNLS_OK) return st;
  if (!s.config_file.empty()) {
    st = ieqnls_run_config_load(*out, s.config_file.c_str());
    if (st != IEQNLS_OK) return st;
  }
  for (const auto& [key, value] : s.values) {
    st = ieqnls_run_config_set(*out, key.c_str(), value.c_str());
    if (st != IEQNLS_OK) return st;
  }
  if (s.allow_nonconservative) st = ieqnls_run_config_set(*out, "allow_nonconservative", "true");
  return st;
}

using Command = ieqnls_status (*)(const ieqnls_run_config*, ieqnls_log_callback, void*);

int run_command(const Settings& s, Command command) {
  ieqnls_run_config* cfg = nullptr;
  ieqnls_status st = build_config(s, &cfg);
  if (st == IEQNLS_OK) st = command(cfg, print_line, nullptr);
  ieqnls_run_config_destroy(cfg);
  return report(st);
}

int run_tableau(const std::string& name) {
  std::size_t needed = 0;
  ieqnls_status st = ieqnls_tableau_report(name.c_str(), nullptr, 0, &needed);
  if (st != IEQNLS_OK) return report(st);
  std::string text(needed, '\0');
  st = ieqnls_tableau_report(name.c_str(), text.data(), text.size(), &needed);
  if (st != IEQNLS_OK) return report(st);
  text.resize(needed - 1);
  std::fputs(text.c_str(), stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservative IEQ-DIRK solver for the nonlinear Schroedinger equation"};
  app.set_version_flag("--version", ieqnls_version());
  app.require_subcommand(1);

  std::string tableau_name = "all";
  auto* tableau = app.add_subcommand("tableau", "print Butcher tableaux and conservation checks");
  tableau->add_option("name", tableau_name, "tableau name or 'all'");

  Settings run_settings;
  auto* run = app.add_subcommand("run", "integrate one scenario and write CSV diagnostics");
  add_run_flags(run, run_settings);

  Settings longtime_settings;
  auto* longtime = app.add_subcommand("longtime", "long-time soliton run (records every 100 steps)");
  add_run_flags(longtime, longtime_settings);

  Settings converge_settings;
  auto* converge = app.add_subcommand("converge", "temporal convergence study; writes convergence.csv");
  add_run_flags(converge, converge_settings);
  add_converge_flags(converge, converge_settings);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (tableau->parsed()) return run_tableau(tableau_name);
  if (run->parsed()) return run_command(run_settings, ieqnls_cmd_run);
  if (longtime->parsed()) return run_command(longtime_settings, ieqnls_cmd_longtime);
  if (converge->parsed()) return run_command(converge_settings, ieqnls_cmd_converge);
  return kExitConfig;
}
