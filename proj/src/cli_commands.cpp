#include "matmi/cli_commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "matmi/errors.hpp"
#include "matmi/experiments.hpp"
#include "matmi/forward.hpp"
#include "matmi/version.hpp"

namespace fs = std::filesystem;

namespace matmi::cli {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir + ": cannot create directory (" + ec.message() + ")");
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// P1 interpolation between unit-square meshes (point location is closed form
// on the structured grid).
ScalarField interpolate_to_square(const ScalarField& coarse, const Mesh& fine) {
  const Mesh& cm = coarse.mesh();
  if (cm.domain != DomainKind::UnitSquare || fine.domain != DomainKind::UnitSquare)
    throw InputError("oracle-mesh interpolation requires unit-square meshes");
  const int m = cm.n_cells;
  Eigen::VectorXd out(fine.vertex_count());
  for (int i = 0; i < fine.vertex_count(); ++i) {
    const Vec2& x = fine.vertices[i];
    const int ci = std::min(static_cast<int>(x.x() * m), m - 1);
    const int cj = std::min(static_cast<int>(x.y() * m), m - 1);
    const double xi = x.x() * m - ci, eta = x.y() * m - cj;
    const int cell = 2 * (cj * m + ci);
    const int elem = (xi >= eta) ? cell : cell + 1;
    out[i] = coarse.at_point(elem, x);
  }
  return ScalarField(fine, std::move(out));
}

ForwardProblem forward_for(const Mesh& mesh, const Phantom& p, double tol) {
  return ForwardProblem{&mesh, &p.D, Gauge{},
                        tol, CoefficientBounds{p.S.c1, p.S.c2, p.S.lambda}};
}

}  // namespace

void RunSettings::apply_to_manifest(Manifest& m) const {
  m.set("algorithm", algorithm);
  m.set_double("mu", mu);
  m.set_int("max_iterations", max_iterations);
  m.set_double("residual_tol", residual_tol);
  m.set_double("morozov_factor", morozov_factor);
  m.set_double("stall_ratio", stall_ratio);
  m.set_double("eps", eps);
  m.set_double("c_eps", c_eps);
  m.set_double("tau_scale", tau_scale);
  m.set_double("solver_tol", solver_tol);
  m.set_int("seed", static_cast<long long>(seed));
}

RunSettings RunSettings::from_manifest(const Manifest& m) {
  return from_manifest(m, RunSettings{});
}

RunSettings RunSettings::from_manifest(const Manifest& m, const RunSettings& base) {
  RunSettings s = base;
  s.algorithm = m.get_or("algorithm", base.algorithm);
  s.mu = m.get_double("mu", base.mu);
  s.max_iterations = static_cast<int>(m.get_int("max_iterations", base.max_iterations));
  s.residual_tol = m.get_double("residual_tol", base.residual_tol);
  s.morozov_factor = m.get_double("morozov_factor", base.morozov_factor);
  s.stall_ratio = m.get_double("stall_ratio", base.stall_ratio);
  s.eps = m.get_double("eps", base.eps);
  s.c_eps = m.get_double("c_eps", base.c_eps);
  s.tau_scale = m.get_double("tau_scale", base.tau_scale);
  s.solver_tol = m.get_double("solver_tol", base.solver_tol);
  s.seed = static_cast<std::uint64_t>(m.get_int("seed", static_cast<long long>(base.seed)));
  return s;
}

ReconstructionConfig RunSettings::to_config(double noise_delta) const {
  ReconstructionConfig cfg;
  if (algorithm == "quasi-newton")
    cfg.algorithm = Algorithm::QuasiNewton;
  else if (algorithm == "landweber")
    cfg.algorithm = Algorithm::Landweber;
  else
    throw InputError("unknown algorithm: " + algorithm);
  cfg.mu = mu;
  cfg.max_iterations = max_iterations;
  cfg.residual_tol = residual_tol;
  cfg.noise_delta = noise_delta;
  cfg.morozov_factor = morozov_factor;
  cfg.stall_ratio = stall_ratio;
  cfg.eps = eps;
  cfg.c_eps = c_eps;
  cfg.tau_scale = tau_scale;
  cfg.solver_tol = solver_tol;
  cfg.seed = seed;
  return cfg;
}

Manifest cmd_synth(const SynthOptions& opt) {
  if (opt.out_dir.empty()) throw InputError("synth: output directory required");
  Mesh mesh = build_unit_square_mesh(opt.n);
  Phantom p = make_phantom(opt.phantom, mesh);

  ScalarField g = ScalarField::zero(mesh);
  if (opt.oracle_mesh > 0) {
    Mesh oracle = build_unit_square_mesh(opt.oracle_mesh);
    Phantom po = make_phantom(opt.phantom, oracle);
    ScalarField go = internal_data(forward_for(oracle, po, opt.solver_tol), po.sigma_true);
    g = interpolate_to_square(go, mesh);
  } else {
    g = internal_data(forward_for(mesh, p, opt.solver_tol), p.sigma_true);
  }

  ensure_dir(opt.out_dir);
  write_scalar_field(join(opt.out_dir, "sigma_true.field"), p.sigma_true, opt.csv);
  write_tensor_field(join(opt.out_dir, "tensor.field"), p.D, opt.csv);
  write_scalar_field(join(opt.out_dir, "data.field"), g, opt.csv);
  if (opt.delta > 0) {
    ScalarField gd = add_noise(g, opt.delta, opt.seed);
    write_scalar_field(join(opt.out_dir, "data_noisy.field"), gd, opt.csv);
  }

  Manifest m;
  m.set("phantom", opt.phantom);
  m.set_int("n", opt.n);
  m.set_double("delta", opt.delta);
  m.set_int("seed", static_cast<long long>(opt.seed));
  m.set_int("oracle_mesh", opt.oracle_mesh);
  m.set_double("synth_solver_tol", opt.solver_tol);
  m.set("data_file", opt.delta > 0 ? "data_noisy.field" : "data.field");
  m.set("sigma_true_file", "sigma_true.field");
  m.set("tensor_file", "tensor.field");
  m.set_double("admissible_c1", p.S.c1);
  m.set_double("admissible_c2", p.S.c2);
  m.set_double("admissible_c3", p.S.c3);
  m.set_double("admissible_K", p.S.K);
  m.set_double("admissible_L", p.S.L);
  m.set_double("tensor_lambda", p.S.lambda);
  m.set_double("tensor_eta", p.S.eta);
  m.set_double("sigma0_const", 0.2);
  m.set("software_version", kVersion);
  m.set("created", utc_timestamp());
  m.write(join(opt.out_dir, "manifest.txt"));
  return m;
}

Manifest cmd_reconstruct(const ReconstructOptions& opt) {
  if (opt.data_dir.empty() || opt.out_dir.empty())
    throw InputError("reconstruct: data and output directories required");
  Manifest data_manifest = Manifest::read(join(opt.data_dir, "manifest.txt"));

  // Read everything before writing anything.
  LoadedField data = read_field(join(opt.data_dir, data_manifest.get_or("data_file", "data.field")));
  LoadedField tensor =
      read_field(join(opt.data_dir, data_manifest.get_or("tensor_file", "tensor.field")));
  std::optional<LoadedField> truth_file;
  const std::string truth_path =
      join(opt.data_dir, data_manifest.get_or("sigma_true_file", "sigma_true.field"));
  if (fs::exists(truth_path)) truth_file = read_field(truth_path);

  Mesh mesh = mesh_from_header(data.header);
  if (!header_matches(tensor.header, mesh))
    throw InputError("reconstruct: tensor and data files disagree on the mesh");
  ScalarField g = data.as_scalar(mesh);
  TensorField D = tensor.as_tensor(mesh);
  std::optional<ScalarField> truth;
  if (truth_file) truth = truth_file->as_scalar(mesh);

  AdmissibleSet S;
  S.sigma0 = ScalarField::constant(mesh, data_manifest.get_double("sigma0_const", 0.2));
  S.c1 = data_manifest.get_double("admissible_c1", S.c1);
  S.c2 = data_manifest.get_double("admissible_c2", S.c2);
  S.c3 = data_manifest.get_double("admissible_c3", S.c3);
  S.K = data_manifest.get_double("admissible_K", S.K);
  S.L = data_manifest.get_double("admissible_L", S.L);
  S.lambda = data_manifest.get_double("tensor_lambda", S.lambda);
  S.eta = data_manifest.get_double("tensor_eta", S.eta);

  const double delta = data_manifest.get_double("delta", 0.0);
  ReconstructionConfig cfg = opt.settings.to_config(delta);
  ForwardProblem fp{&mesh, &D, Gauge{}, cfg.solver_tol,
                    CoefficientBounds{S.c1, S.c2, S.lambda}};

  ReconstructionResult res = reconstruct(fp, g, S, cfg, truth ? &*truth : nullptr);

  ensure_dir(opt.out_dir);
  write_scalar_field(join(opt.out_dir, "sigma_rec.field"), res.sigma, opt.csv);
  write_iteration_log(join(opt.out_dir, "iterations.csv"), res.log);

  Manifest m = data_manifest;
  opt.settings.apply_to_manifest(m);
  m.set("data_dir", opt.data_dir);
  m.set_double("mu_used", res.log.mu_used);
  m.set_double("eps_used", res.log.eps_used);
  m.set("stop_reason", res.log.stop_reason);
  m.set_int("iterations", static_cast<long long>(res.log.records.size()));
  if (!res.log.records.empty()) {
    m.set_double("final_error", res.log.records.back().error);
    m.set_double("final_residual", res.log.records.back().residual);
  }
  m.set_int("warnings", static_cast<long long>(res.log.warnings.size()));
  m.set("software_version", kVersion);
  m.set("created", utc_timestamp());
  m.write(join(opt.out_dir, "manifest.txt"));
  return m;
}

verify::Report cmd_verify(const std::string& level, bool json) {
  verify::Report rep = verify::run(level);
  if (json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rep.rows)
      j.push_back({{"name", r.name},
                   {"pass", r.pass},
                   {"measured", r.measured},
                   {"detail", r.detail}});
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    for (const auto& r : rep.rows)
      std::printf("[%s] %-32s measured=%.6e  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                  r.measured, r.detail.c_str());
    std::printf("%s\n", rep.all_pass() ? "all checks passed" : "CHECKS FAILED");
  }
  return rep;
}

void cmd_report(const std::string& log_path, const std::string& out_path) {
  std::vector<IterationRecord> records = read_iteration_log(log_path);
  std::ofstream os(out_path);
  if (!os) throw IoError(out_path + ": cannot open for writing");
  os << "k,rel_error\n";
  char buf[40];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.error);
    os << r.k << ',' << buf << "\n";
  }
}

void cmd_report_sweep(const std::string& sweep_dir, const std::string& out_path) {
  std::vector<std::pair<double, double>> rows;  // delta -> final error
  if (!fs::is_directory(sweep_dir)) throw IoError(sweep_dir + ": not a directory");
  for (const auto& entry : fs::directory_iterator(sweep_dir)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("delta_", 0) != 0) continue;
    Manifest m = Manifest::read((entry.path() / "manifest.txt").string());
    rows.emplace_back(m.get_double("delta", 0.0), m.get_double("final_error", 0.0));
  }
  if (rows.empty()) throw IoError(sweep_dir + ": no delta_* run directories found");
  std::sort(rows.begin(), rows.end());
  std::ofstream os(out_path);
  if (!os) throw IoError(out_path + ": cannot open for writing");
  os << "delta,final_error\n";
  char buf[40];
  for (const auto& [d, e] : rows) {
    os << d << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", e);
    os << buf << "\n";
  }
}

void cmd_sweep(const SweepOptions& opt) {
  if (opt.out_dir.empty()) throw InputError("sweep: output directory required");
  ensure_dir(opt.out_dir);

  std::vector<std::exception_ptr> errors(opt.deltas.size());
  auto run_one = [&](size_t idx) {
    try {
      const double delta = opt.deltas[idx];
      char name[32];
      std::snprintf(name, sizeof(name), "delta_%.2f", delta);
      const std::string dir = join(opt.out_dir, name);
      SynthOptions synth;
      synth.phantom = opt.phantom;
      synth.n = opt.n;
      synth.delta = delta;
      synth.seed = opt.seed;
      synth.out_dir = dir;
      synth.csv = opt.csv;
      cmd_synth(synth);
      ReconstructOptions rec;
      rec.data_dir = dir;
      rec.out_dir = dir;
      rec.csv = opt.csv;
      rec.settings = opt.settings;
      cmd_reconstruct(rec);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };

  std::vector<std::thread> workers;
  for (size_t i = 0; i < opt.deltas.size(); ++i) workers.emplace_back(run_one, i);
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  cmd_report_sweep(opt.out_dir, join(opt.out_dir, "summary.csv"));
}

}  // namespace matmi::cli
