#include "rcslab/classical_limit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rcslab/parallel.hpp"

namespace rcs {

double delta_c(const EnsembleState& relativistic, const EnsembleState& classical) {
  if (relativistic.size() != classical.size())
    throw std::invalid_argument("delta_c: ensembles have different sizes");
  if (std::abs(relativistic.t - classical.t) > 1e-12 * std::max(1.0, std::abs(classical.t)))
    throw std::invalid_argument("delta_c: states are at different times");
  if (relativistic.size() == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t a = 0; a < relativistic.size(); ++a) {
    sum += (relativistic.x[a] - classical.x[a]).squaredNorm();
    sum += (relativistic.w[a] - classical.w[a]).squaredNorm();
  }
  return sum / static_cast<double>(relativistic.size());
}

EnsembleState perturb_initial(const EnsembleState& base, double c, double K,
                              std::uint64_t seed) {
  if (!(K >= 0.0)) throw std::invalid_argument("perturb_initial: K must be >= 0");
  if (!(c > 0.0)) throw std::invalid_argument("perturb_initial: c must be > 0");
  EnsembleState out = base;
  if (K == 0.0 || base.size() == 0) return out;

  const std::size_t n = base.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vec3> dx(n), dw(n);
  for (std::size_t a = 0; a < n; ++a) {
    dx[a] = Vec3(normal(rng), normal(rng), normal(rng));
    dw[a] = Vec3(normal(rng), normal(rng), normal(rng));
  }
  project_zero_sum(dw);

  double raw = 0.0;
  for (std::size_t a = 0; a < n; ++a) raw += dx[a].squaredNorm() + dw[a].squaredNorm();
  raw /= static_cast<double>(n);
  if (!(raw > 0.0)) return out;  // N = 1 with a degenerate draw cannot happen in practice

  const double target = K / (c * c * c * c);
  const double scale = std::sqrt(target / raw);
  for (std::size_t a = 0; a < n; ++a) {
    out.x[a] += scale * dx[a];
    out.w[a] += scale * dw[a];
  }
  return out;
}

LimitScanResult c_scan(const EnsembleState& base_init, const ModelParams& params_template,
                       const SimConfig& config, const std::vector<double>& c_values,
                       double K, const LimitScanOptions& options) {
  if (c_values.size() < 3) throw std::invalid_argument("c_scan: need at least 3 c values");
  for (std::size_t i = 1; i < c_values.size(); ++i)
    if (!(c_values[i] > c_values[i - 1]))
      throw std::invalid_argument("c_scan: c values must be strictly increasing");

  const ModelParams base_params = params_template.resized(base_init.size());

  LimitScanResult result;
  result.c_values = c_values;
  result.K = K;
  result.runs.resize(c_values.size());

  // Certificates first, so a failure aborts before any simulation.
  std::vector<EnsembleState> inits(c_values.size());
  for (std::size_t i = 0; i < c_values.size(); ++i) {
    const ModelParams p = base_params.with_c(c_values[i]);
    inits[i] = perturb_initial(base_init, c_values[i], K, config.seed);
    const FlockingCertificate cert = flocking_certificate(inits[i], p);
    if (!cert.satisfied) {
      std::ostringstream msg;
      msg << "flocking certificate not satisfied at c = " << c_values[i]
          << " (lhs " << cert.condition_lhs << " vs Dx_inf " << cert.condition_rhs << ")";
      throw CertificateFailure(msg.str());
    }
    result.runs[i].c = c_values[i];
    result.runs[i].lambda_cert = cert.lambda;
    result.runs[i].Dx_inf = cert.Dx_inf;
  }

  SimConfig cfg = config;
  if (options.extend_t_end)
    cfg.t_end = std::max(cfg.t_end, 10.0 / result.runs.front().lambda_cert);
  result.t_end = cfg.t_end;

  parallel_for(c_values.size(), [&](std::size_t i) {
    const ModelParams p = base_params.with_c(c_values[i]);
    SimConfig rel_cfg = cfg;
    rel_cfg.model = options.relativistic_side;
    SimConfig cl_cfg = cfg;
    cl_cfg.model = Model::cs;
    const Trajectory rel = simulate(inits[i], p, rel_cfg);
    const Trajectory cl = simulate(base_init, p, cl_cfg);

    LimitRun& run = result.runs[i];
    run.health_relativistic = run_health(rel);
    run.health_classical = run_health(cl);
    for (std::size_t k = 0; k < rel.samples.size(); ++k) {
      const double d = delta_c(rel.samples[k], cl.samples[k]);
      if (k == 0) run.delta0 = d;
      run.sup_delta = std::max(run.sup_delta, d);
      if (options.keep_series) {
        run.t.push_back(rel.samples[k].t);
        run.delta.push_back(d);
      }
    }
  });

  std::vector<double> fit_c, fit_d;
  for (const auto& run : result.runs) {
    result.sup_delta.push_back(run.sup_delta);
    if (run.sup_delta > 0.0) {
      fit_c.push_back(run.c);
      fit_d.push_back(run.sup_delta);
    }
  }
  for (std::size_t i = 1; i < result.sup_delta.size(); ++i)
    if (result.sup_delta[i] > 1.05 * result.sup_delta[i - 1]) ++result.inversions;
  if (fit_c.size() >= 3) result.fit = fit_loglog(fit_c, fit_d);
  return result;
}

}  // namespace rcs
