// Command-line front end: synth | reconstruct | verify | report | sweep.
// Exit codes: 0 success, 1 verification failure, 2 input error, 3 solver failure.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matmi/cli_commands.hpp"
#include "matmi/errors.hpp"
#include "matmi/version.hpp"

using namespace matmi;

namespace {

// Flat key = value config file; flags given on the command line win.
cli::RunSettings settings_from_config(const std::string& config_path) {
  if (config_path.empty()) return {};
  return cli::RunSettings::from_manifest(Manifest::read(config_path));
}

void add_settings_flags(CLI::App* cmd, cli::RunSettings& s) {
  cmd->add_option("--algorithm", s.algorithm, "quasi-newton | landweber");
  cmd->add_option("--mu", s.mu, "Landweber step size (0: power-method default)");
  cmd->add_option("--max-iterations", s.max_iterations);
  cmd->add_option("--residual-tol", s.residual_tol);
  cmd->add_option("--morozov-factor", s.morozov_factor);
  cmd->add_option("--stall-ratio", s.stall_ratio);
  cmd->add_option("--eps", s.eps, "transport diffusion (negative: c_eps*h^2*max|v|)");
  cmd->add_option("--c-eps", s.c_eps);
  cmd->add_option("--tau-scale", s.tau_scale);
  cmd->add_option("--solver-tol", s.solver_tol);
  cmd->add_option("--seed", s.seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-property factor reconstruction from magneto-acoustic internal data"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate synthetic internal data for a phantom");
  cli::SynthOptions sopt;
  synth->add_option("--phantom", sopt.phantom, "phantom name")->capture_default_str();
  synth->add_option("--n", sopt.n, "cells per direction")->capture_default_str();
  synth->add_option("--delta", sopt.delta, "relative noise level");
  synth->add_option("--seed", sopt.seed, "noise seed");
  synth->add_option("--oracle-mesh", sopt.oracle_mesh,
                    "synthesize on this mesh size, then interpolate (inverse-crime control)");
  synth->add_option("--out", sopt.out_dir, "output directory")->required();
  synth->add_flag("--csv", sopt.csv, "also write CSV twins");
  synth->add_option("--solver-tol", sopt.solver_tol)->capture_default_str();

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "Run an inversion on a synth directory");
  cli::ReconstructOptions ropt;
  std::string rec_config;
  rec->add_option("--data", ropt.data_dir, "directory written by synth")->required();
  rec->add_option("--out", ropt.out_dir, "output directory")->required();
  rec->add_flag("--csv", ropt.csv, "also write CSV twins");
  rec->add_option("--config", rec_config, "key = value settings file");
  add_settings_flags(rec, ropt.settings);

  // verify
  auto* ver = app.add_subcommand("verify", "Run the property-check suites");
  std::string level = "quick";
  bool json = false;
  ver->add_option("--level", level, "quick | full")->capture_default_str();
  ver->add_flag("--json", json, "machine-readable JSON report");

  // report
  auto* rep = app.add_subcommand("report", "Plot-ready tables from run logs");
  std::string rep_log, rep_sweep, rep_out;
  rep->add_option("--log", rep_log, "iterations.csv of a single run");
  rep->add_option("--sweep-dir", rep_sweep, "directory written by sweep");
  rep->add_option("--out", rep_out, "output CSV")->required();

  // sweep
  auto* swp = app.add_subcommand("sweep", "Reconstructions across noise levels");
  cli::SweepOptions wopt;
  std::string swp_config, deltas_str = "0,0.06,0.12,0.24";
  swp->add_option("--phantom", wopt.phantom)->capture_default_str();
  swp->add_option("--n", wopt.n)->capture_default_str();
  swp->add_option("--deltas", deltas_str, "comma-separated noise levels")
      ->capture_default_str();
  swp->add_option("--noise-seed", wopt.seed);
  swp->add_option("--out", wopt.out_dir, "output directory")->required();
  swp->add_flag("--csv", wopt.csv);
  swp->add_option("--config", swp_config, "key = value settings file");
  add_settings_flags(swp, wopt.settings);

  // Apply config files before parsing so explicit flags override them.
  try {
    for (int i = 1; i < argc - 1; ++i)
      if (std::string(argv[i]) == "--config") {
        ropt.settings = settings_from_config(argv[i + 1]);
        wopt.settings = settings_from_config(argv[i + 1]);
      }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      cli::cmd_synth(sopt);
    } else if (*rec) {
      Manifest m = cli::cmd_reconstruct(ropt);
      std::printf("stop: %s  iterations: %s  final_error: %s\n",
                  m.get_or("stop_reason", "?").c_str(), m.get_or("iterations", "?").c_str(),
                  m.get_or("final_error", "n/a").c_str());
    } else if (*ver) {
      if (!cli::cmd_verify(level, json).all_pass()) return 1;
    } else if (*rep) {
      if (rep_log.empty() == rep_sweep.empty())
        throw InputError("report: give exactly one of --log or --sweep-dir");
      if (!rep_log.empty())
        cli::cmd_report(rep_log, rep_out);
      else
        cli::cmd_report_sweep(rep_sweep, rep_out);
    } else if (*swp) {
      wopt.deltas.clear();
      std::stringstream ss(deltas_str);
      std::string tok;
      while (std::getline(ss, tok, ',')) wopt.deltas.push_back(std::stod(tok));
      if (wopt.deltas.empty()) throw InputError("sweep: no noise levels given");
      cli::cmd_sweep(wopt);
    }
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 2;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
