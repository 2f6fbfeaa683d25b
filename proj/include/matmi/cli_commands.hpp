#ifndef MATMI_CLI_COMMANDS_HPP
#define MATMI_CLI_COMMANDS_HPP

#include <string>
#include <vector>

#include "matmi/field_file.hpp"
#include "matmi/verify.hpp"

namespace matmi::cli {

// Shared algorithm settings, mirrored one-to-one in manifests and config
// files (flat key = value text).
struct RunSettings {
  std::string algorithm = "quasi-newton";  // or "landweber"
  double mu = 0;
  int max_iterations = 50;
  double residual_tol = 1e-6;
  double morozov_factor = 1.1;
  double stall_ratio = 0.9;
  double eps = -1;
  double c_eps = 0.5;
  double tau_scale = 1.0;
  double solver_tol = 1e-8;
  std::uint64_t seed = 1;

  void apply_to_manifest(Manifest& m) const;
  static RunSettings from_manifest(const Manifest& m);
  static RunSettings from_manifest(const Manifest& m, const RunSettings& base);
  ReconstructionConfig to_config(double noise_delta) const;
};

struct SynthOptions {
  std::string phantom = "paper-phantom";
  int n = 256;
  double delta = 0;
  std::uint64_t seed = 1;
  int oracle_mesh = 0;  // > 0: synthesize on that mesh, interpolate to n
  std::string out_dir;
  bool csv = false;
  double solver_tol = 1e-10;
};

// Writes sigma_true.field, tensor.field, data.field (and data_noisy.field
// when delta > 0) plus manifest.txt into out_dir. Returns the manifest.
Manifest cmd_synth(const SynthOptions& opt);

struct ReconstructOptions {
  std::string data_dir;
  std::string out_dir;
  bool csv = false;
  RunSettings settings;
};

// Reads a synth directory, runs the selected driver, writes sigma_rec.field,
// iterations.csv and manifest.txt into out_dir.
Manifest cmd_reconstruct(const ReconstructOptions& opt);

// Property suites; prints one line per check to stdout. Returns the report.
verify::Report cmd_verify(const std::string& level, bool json);

// Error-vs-iteration table from a single run log, or an error-vs-delta
// summary from a sweep directory.
void cmd_report(const std::string& log_path, const std::string& out_path);
void cmd_report_sweep(const std::string& sweep_dir, const std::string& out_path);

struct SweepOptions {
  std::string phantom = "paper-phantom";
  int n = 128;
  std::vector<double> deltas{0.0, 0.06, 0.12, 0.24};
  std::uint64_t seed = 1;
  std::string out_dir;
  bool csv = false;
  RunSettings settings;
  int threads = 0;  // 0: one per delta
};

// Fans out synth + reconstruct per noise level, then writes summary.csv.
void cmd_sweep(const SweepOptions& opt);

}  // namespace matmi::cli

#endif
