// rcslab: simulations, flocking certificates, limit scans and constants.
//
// Exit codes: 0 success or check passed, 1 checked condition failed,
// 2 usage or configuration error, 3 numerical abort.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rcslab/classical_limit.hpp"
#include "rcslab/config.hpp"
#include "rcslab/diagnostics.hpp"
#include "rcslab/integrator.hpp"
#include "rcslab/io.hpp"
#include "rcslab/meanfield.hpp"
#include "rcslab/relativistic.hpp"

namespace fs = std::filesystem;
using namespace rcs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAbort = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

RunConfig load(const Common& common) {
  RunConfig cfg = parse_config(common.config);
  if (common.seed) cfg.sim.seed = *common.seed;
  return cfg;
}

fs::path prepare_out_dir(const std::string& out) {
  const fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

void finish_manifest(RunManifest& m, const fs::path& dir) {
  m.finished = utc_timestamp();
  write_json(to_json(m), dir / "manifest.json");
}

RunManifest start_manifest(const std::string& command, const RunConfig& cfg) {
  RunManifest m;
  m.command = command;
  m.config_hash = config_hash(cfg);
  m.parameters = serialize_config(cfg);
  m.seed = cfg.sim.seed;
  m.started = utc_timestamp();
  return m;
}

int cmd_simulate(const Common& common, const std::string& model_name) {
  RunConfig cfg = load(common);
  if (!model_name.empty()) cfg.sim.model = model_from_string(model_name);
  if (common.out.empty()) throw ConfigError("--out", "an output directory is required");

  RunManifest manifest = start_manifest("simulate", cfg);
  const EnsembleState init = build_initial(cfg, cfg.sim.model);
  const FlockingCertificate cert = flocking_certificate(init, cfg.params);
  const Trajectory traj = simulate(init, cfg.params, cfg.sim);

  const fs::path dir = prepare_out_dir(common.out);
  write_trajectory_csv(traj, dir / "trajectory.csv", manifest.config_hash);
  manifest.files.push_back({"trajectory.csv", "trajectory_csv"});

  Json report = report_envelope("simulate", manifest.config_hash);
  report["model"] = to_string(cfg.sim.model);
  report["certificate"] = to_json(cert);
  report["satisfied"] = cert.satisfied;
  report["health"] = to_json(run_health(traj));
  if (cert.satisfied && traj.samples.size() >= 3)
    report["sddi"] = to_json(check_sddi(traj, cert.lambda));
  report["diagnostics"] = to_json(compute_diagnostics(traj));
  write_json(report, dir / "diagnostics.json");
  manifest.files.push_back({"diagnostics.json", "report_json"});

  finish_manifest(manifest, dir);
  std::cout << "wrote " << traj.samples.size() << " samples to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_flock_cert(const Common& common) {
  const RunConfig cfg = load(common);
  const EnsembleState init = build_initial(cfg, Model::rcs);
  const FlockingCertificate cert = flocking_certificate(init, cfg.params);
  Json j = report_envelope("flock_cert", config_hash(cfg));
  j.update(to_json(cert));
  check_finite(j);
  std::cout << j.dump(2) << "\n";
  return cert.satisfied ? kExitOk : kExitCheckFailed;
}

bool fit_in_band(const std::optional<LineFit>& fit, const SlopeBand& band, double r2_min) {
  return fit && band.contains(fit->slope) && fit->r_squared >= r2_min;
}

void report_fit(const std::optional<LineFit>& fit, const SlopeBand& band) {
  if (!fit) {
    std::cout << "slope undefined: fewer than 3 positive sup values\n";
    return;
  }
  std::cout << "slope = " << fit->slope << " (r^2 = " << fit->r_squared << ", band ["
            << band.lo << ", " << band.hi << "])\n";
}

int cmd_climit(const Common& common, std::vector<double> c_list, std::optional<double> K,
               const std::string& rel_model) {
  RunConfig cfg = load(common);
  if (c_list.empty()) c_list = cfg.scenario.c_list;
  if (c_list.size() < 3) throw ConfigError("--c-list", "need at least 3 values");
  const double k = K ? *K : cfg.scenario.K;
  if (!(k >= 0.0)) throw ConfigError("--K", "must be >= 0");

  LimitScanOptions options;
  options.relativistic_side = model_from_string(rel_model);
  const EnsembleState base = build_initial(cfg, Model::cs);
  const LimitScanResult result = c_scan(base, cfg.params, cfg.sim, c_list, k, options);

  const bool pass = fit_in_band(result.fit, cfg.scenario.climit_band, cfg.scenario.r2_min);
  if (!common.out.empty()) {
    RunManifest manifest = start_manifest("climit", cfg);
    const fs::path dir = prepare_out_dir(common.out);
    Json j = report_envelope("climit", manifest.config_hash);
    j["band"] = {cfg.scenario.climit_band.lo, cfg.scenario.climit_band.hi};
    j["r2_min"] = cfg.scenario.r2_min;
    j["passed"] = pass;
    j["result"] = to_json(result);
    write_json(j, dir / "climit.json");
    manifest.files.push_back({"climit.json", "report_json"});
    finish_manifest(manifest, dir);
  }
  report_fit(result.fit, cfg.scenario.climit_band);
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_meanfield_scan(const Common& common, const std::vector<double>& c_list,
                       const std::vector<std::size_t>& n_list) {
  const RunConfig cfg = load(common);
  if (c_list.empty() == n_list.empty())
    throw ConfigError("--c-list/--n-list", "give exactly one of the two lists");
  if (cfg.scenario.init_kind == "explicit")
    throw ConfigError("init.kind", "meanfield scans need a sampled initial measure");

  Json body;
  bool pass = false;
  std::string kind;
  if (!c_list.empty()) {
    if (c_list.size() < 3) throw ConfigError("--c-list", "need at least 3 values");
    kind = "kinetic_limit";
    const KineticScanResult result = kinetic_limit_scan(
        cfg.scenario.measure, cfg.params.size(), c_list, cfg.params, cfg.sim, cfg.sim.seed);
    bool coupling = true;
    for (const auto& r : result.runs) coupling = coupling && r.coupling_bound_holds;
    pass = coupling && fit_in_band(result.fit, cfg.scenario.kinetic_band, cfg.scenario.r2_min);
    body = to_json(result);
    body["band"] = {cfg.scenario.kinetic_band.lo, cfg.scenario.kinetic_band.hi};
    report_fit(result.fit, cfg.scenario.kinetic_band);
    if (!coupling) std::cout << "coupling bound violated\n";
  } else {
    if (n_list.size() < 3) throw ConfigError("--n-list", "need at least 3 values");
    kind = "meanfield_convergence";
    const MeanfieldScanResult result =
        meanfield_convergence_scan(cfg.scenario.measure, n_list, cfg.params, cfg.sim, cfg.sim.seed);
    pass = result.decreasing_trend;
    body = to_json(result);
    std::cout << "decreasing trend: " << (pass ? "yes" : "no") << "\n";
  }

  if (!common.out.empty()) {
    RunManifest manifest = start_manifest("meanfield-scan", cfg);
    const fs::path dir = prepare_out_dir(common.out);
    Json j = report_envelope(kind, manifest.config_hash);
    j["passed"] = pass;
    j["result"] = std::move(body);
    write_json(j, dir / "meanfield.json");
    manifest.files.push_back({"meanfield.json", "report_json"});
    finish_manifest(manifest, dir);
  }
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_constants(const Common& common, double W, double dx_inf) {
  const RunConfig cfg = load(common);
  if (!(W >= 0.0) || !std::isfinite(W)) throw ConfigError("--W", "must be a finite value >= 0");
  if (!(dx_inf >= 0.0) || !std::isfinite(dx_inf))
    throw ConfigError("--dx-inf", "must be a finite value >= 0");
  const ModelParams& p = cfg.params;
  const RelConstants rc = rel_constants(W, dx_inf, p);
  const double gamma = gamma_from_w(W, p, 0);

  Json j = report_envelope("constants", config_hash(cfg));
  j["W"] = W;
  j["c"] = p.c;
  j.update(to_json(rc));
  j["Gamma"] = gamma;
  j["F"] = F_of_gamma(gamma, p, 0);
  check_finite(j);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_wasserstein(const std::string& a_path, const std::string& b_path) {
  const PointCloud6D a = read_cloud_csv(a_path);
  const PointCloud6D b = read_cloud_csv(b_path);
  Json j = report_envelope("wasserstein", "");
  j["N_a"] = a.size();
  j["N_b"] = b.size();
  if (a.size() == b.size()) {
    const W1Result r = wasserstein1_exact(a, b);
    j["W1"] = r.distance;
    j["permutation"] = r.plan.permutation;
  } else {
    j["W1"] = wasserstein1_uniform(a, b);
  }
  check_finite(j);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

void add_common(CLI::App* sub, Common& common, bool need_config = true) {
  if (need_config)
    sub->add_option("--config", common.config, "run configuration file")->required();
  sub->add_option("--seed", common.seed, "override the config seed");
  sub->add_option("--out", common.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rcslab: relativistic Cucker-Smale simulations and limit scans"};
  app.require_subcommand(1);

  Common common;

  std::string model_name;
  auto* sim = app.add_subcommand("simulate", "integrate one run and write CSV, JSON and a manifest");
  add_common(sim, common);
  sim->add_option("--model", model_name, "override the config model")
      ->check(CLI::IsMember({"rcs", "cs"}));

  auto* cert = app.add_subcommand("flock-cert", "print the flocking certificate as JSON");
  add_common(cert, common);

  std::vector<double> c_list;
  std::optional<double> K;
  std::string rel_model = "rcs";
  auto* climit = app.add_subcommand("climit", "classical-limit rate scan over c");
  add_common(climit, common);
  climit->add_option("--c-list", c_list, "speeds of light, comma separated")->delimiter(',');
  climit->add_option("--K", K, "initial deviation scale");
  climit->add_option("--rel-model", rel_model, "model on the relativistic side")
      ->check(CLI::IsMember({"rcs", "cs"}));

  std::vector<double> mf_c_list;
  std::vector<std::size_t> n_list;
  auto* mf = app.add_subcommand("meanfield-scan", "kinetic W1 rate scan or N-convergence scan");
  add_common(mf, common);
  mf->add_option("--c-list", mf_c_list, "speeds of light, comma separated")->delimiter(',');
  mf->add_option("--n-list", n_list, "ensemble sizes, comma separated")->delimiter(',');

  double W = 0.0;
  double dx_inf = 1.0;
  auto* constants = app.add_subcommand("constants", "print Lambda_0, Lambda_1, Lambda_2, F, Gamma and lambda");
  add_common(constants, common);
  constants->add_option("--W", W, "momentum bound")->required();
  constants->add_option("--dx-inf", dx_inf, "position diameter bound for lambda");

  std::string a_path, b_path;
  auto* wass = app.add_subcommand("wasserstein", "exact W1 between two 6-column CSV clouds");
  add_common(wass, common, false);
  wass->add_option("a", a_path, "first cloud")->required();
  wass->add_option("b", b_path, "second cloud")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(common, model_name);
    if (cert->parsed()) return cmd_flock_cert(common);
    if (climit->parsed()) return cmd_climit(common, c_list, K, rel_model);
    if (mf->parsed()) return cmd_meanfield_scan(common, mf_c_list, n_list);
    if (constants->parsed()) return cmd_constants(common, W, dx_inf);
    if (wass->parsed()) return cmd_wasserstein(a_path, b_path);
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitAbort;
  } catch (const CertificateFailure& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
