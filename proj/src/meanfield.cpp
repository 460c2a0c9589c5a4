#include "rcslab/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rcslab/assignment.hpp"
#include "rcslab/diagnostics.hpp"
#include "rcslab/parallel.hpp"

namespace rcs {

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::uniform_box:
      return "uniform_box";
    case MeasureKind::gaussian_truncated:
      return "gaussian_truncated";
    case MeasureKind::two_cluster:
      return "two_cluster";
  }
  return "uniform_box";
}

MeasureKind measure_kind_from_string(const std::string& name) {
  if (name == "uniform_box") return MeasureKind::uniform_box;
  if (name == "gaussian_truncated") return MeasureKind::gaussian_truncated;
  if (name == "two_cluster") return MeasureKind::two_cluster;
  throw std::invalid_argument("unknown measure kind '" + name + "'");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PointCloud6D to_cloud(const EnsembleState& state) {
  PointCloud6D cloud;
  cloud.points.resize(state.size());
  for (std::size_t a = 0; a < state.size(); ++a) {
    for (int k = 0; k < 3; ++k) {
      cloud.points[a][k] = state.x[a][k];
      cloud.points[a][k + 3] = state.w[a][k];
    }
  }
  return cloud;
}

EnsembleState to_state(const PointCloud6D& cloud, double t) {
  EnsembleState s;
  s.t = t;
  s.x.resize(cloud.size());
  s.w.resize(cloud.size());
  for (std::size_t a = 0; a < cloud.size(); ++a) {
    const auto& p = cloud.points[a];
    s.x[a] = Vec3(p[0], p[1], p[2]);
    s.w[a] = Vec3(p[3], p[4], p[5]);
  }
  return s;
}

namespace {

void check_spec(const MeasureSpec& spec) {
  if (!(spec.x_scale >= 0.0) || !(spec.w_scale >= 0.0))
    throw std::invalid_argument("sample_cloud: scales must be >= 0");
  if (spec.kind == MeasureKind::gaussian_truncated && !(spec.truncation > 0.0))
    throw std::invalid_argument("sample_cloud: truncation must be > 0");
  if (spec.kind == MeasureKind::two_cluster && !(spec.separation >= 0.0))
    throw std::invalid_argument("sample_cloud: separation must be >= 0");
}

double truncated_normal(std::mt19937_64& rng, double sigma, double cut) {
  if (sigma == 0.0) return 0.0;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    const double z = normal(rng);
    if (std::abs(z) <= cut) return sigma * z;
  }
}

double uniform(std::mt19937_64& rng, double half_width) {
  if (half_width == 0.0) return 0.0;
  std::uniform_real_distribution<double> dist(-half_width, half_width);
  return dist(rng);
}

}  // namespace

SampledCloud sample_cloud(const MeasureSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_cloud: N must be >= 1");
  check_spec(spec);
  std::mt19937_64 rng(seed);
  EnsembleState s;
  s.x.resize(n);
  s.w.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    Vec3 x, w;
    switch (spec.kind) {
      case MeasureKind::uniform_box:
        for (int k = 0; k < 3; ++k) x[k] = uniform(rng, spec.x_scale);
        for (int k = 0; k < 3; ++k) w[k] = uniform(rng, spec.w_scale);
        break;
      case MeasureKind::gaussian_truncated:
        for (int k = 0; k < 3; ++k) x[k] = truncated_normal(rng, spec.x_scale, spec.truncation);
        for (int k = 0; k < 3; ++k) w[k] = truncated_normal(rng, spec.w_scale, spec.truncation);
        break;
      case MeasureKind::two_cluster: {
        const double sign = a % 2 == 0 ? 1.0 : -1.0;
        for (int k = 0; k < 3; ++k) x[k] = uniform(rng, spec.x_scale);
        for (int k = 0; k < 3; ++k) w[k] = uniform(rng, spec.w_scale);
        x[0] += sign * 0.5 * spec.separation;
        w[0] += sign * spec.w_scale;
        break;
      }
    }
    s.x[a] = x;
    s.w[a] = w;
  }
  project_zero_sum(s.w);

  SampledCloud out;
  out.cloud = to_cloud(s);
  const Diameters d = diameters(s);
  out.Dx0 = d.Dx;
  out.Dw0 = d.Dw;
  out.state = std::move(s);
  return out;
}

namespace {

double distance6(const Point6& a, const Point6& b) {
  double s = 0.0;
  for (int k = 0; k < 6; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

W1Result wasserstein1_exact(const PointCloud6D& a, const PointCloud6D& b) {
  if (a.size() != b.size()) {
    std::ostringstream msg;
    msg << "wasserstein1_exact: clouds have different sizes (" << a.size() << " vs "
        << b.size() << ")";
    throw std::invalid_argument(msg.str());
  }
  const std::size_t n = a.size();
  if (n == 0) throw std::invalid_argument("wasserstein1_exact: empty clouds");
  if (n > kMaxAtoms) throw std::invalid_argument("wasserstein1_exact: N exceeds the atom cap");

  CostMatrix cost(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) cost(r, c) = distance6(a.points[r], b.points[c]);
  const Assignment asg = solve_assignment(cost);

  W1Result out;
  out.plan.permutation = asg.row_to_col;
  out.plan.cost = asg.total_cost / static_cast<double>(n);
  out.distance = out.plan.cost;
  return out;
}

namespace {

PointCloud6D replicate(const PointCloud6D& c, std::size_t times) {
  PointCloud6D out;
  out.points.reserve(c.size() * times);
  for (const auto& p : c.points)
    for (std::size_t k = 0; k < times; ++k) out.points.push_back(p);
  return out;
}

}  // namespace

double wasserstein1_uniform(const PointCloud6D& a, const PointCloud6D& b) {
  if (a.size() == 0 || b.size() == 0)
    throw std::invalid_argument("wasserstein1_uniform: empty clouds");
  if (a.size() == b.size()) return wasserstein1_exact(a, b).distance;
  const std::size_t l = std::lcm(a.size(), b.size());
  if (l > kMaxAtoms)
    throw std::invalid_argument("wasserstein1_uniform: lcm of sizes exceeds the atom cap");
  return wasserstein1_exact(replicate(a, l / a.size()), replicate(b, l / b.size())).distance;
}

double wasserstein2_coupling_bound(const Trajectory& relativistic, const Trajectory& classical,
                                   std::size_t sample) {
  if (relativistic.samples.size() != classical.samples.size())
    throw std::invalid_argument("wasserstein2_coupling_bound: trajectories have different lengths");
  if (sample >= relativistic.samples.size())
    throw std::out_of_range("wasserstein2_coupling_bound: sample index out of range");
  return std::sqrt(delta_c(relativistic.samples[sample], classical.samples[sample]));
}

KineticScanResult kinetic_limit_scan(const MeasureSpec& spec, std::size_t n,
                                     const std::vector<double>& c_values,
                                     const ModelParams& params_template,
                                     const SimConfig& config, std::uint64_t seed,
                                     const KineticScanOptions& options) {
  if (c_values.size() < 3) throw std::invalid_argument("kinetic_limit_scan: need at least 3 c values");
  for (std::size_t i = 1; i < c_values.size(); ++i)
    if (!(c_values[i] > c_values[i - 1]))
      throw std::invalid_argument("kinetic_limit_scan: c values must be strictly increasing");
  if (n > kMaxAtoms) throw std::invalid_argument("kinetic_limit_scan: N exceeds the atom cap");
  if (!(options.K2 >= 0.0)) throw std::invalid_argument("kinetic_limit_scan: K2 must be >= 0");

  const SampledCloud sampled = sample_cloud(spec, n, seed);
  const ModelParams base_params = params_template.resized(n);

  KineticScanResult result;
  result.c_values = c_values;
  result.Dx0 = sampled.Dx0;
  result.Dw0 = sampled.Dw0;
  result.runs.resize(c_values.size());

  std::vector<EnsembleState> inits(c_values.size());
  for (std::size_t i = 0; i < c_values.size(); ++i) {
    const ModelParams p = base_params.with_c(c_values[i]);
    inits[i] = perturb_initial(sampled.state, c_values[i], options.K2 * options.K2,
                               derive_seed(seed, 1));
    const FlockingCertificate cert = flocking_certificate(inits[i], p, Regime::kinetic);
    if (!cert.satisfied) {
      std::ostringstream msg;
      msg << "kinetic flocking certificate not satisfied at c = " << c_values[i];
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
    const Trajectory cl = simulate(sampled.state, p, cl_cfg);

    KineticRun& run = result.runs[i];
    run.health_relativistic = run_health(rel);
    run.health_classical = run_health(cl);
    const Diameters d0 = diameters(rel.samples.front());
    for (std::size_t k = 0; k < rel.samples.size(); ++k) {
      const double w1 =
          wasserstein1_exact(to_cloud(rel.samples[k]), to_cloud(cl.samples[k])).distance;
      const double bound = wasserstein2_coupling_bound(rel, cl, k);
      run.sup_w1 = std::max(run.sup_w1, w1);
      run.sup_coupling = std::max(run.sup_coupling, bound);
      const double gap = w1 - bound;
      if (k == 0 || gap > run.max_gap) run.max_gap = gap;
      if (gap > 1e-12) run.coupling_bound_holds = false;

      const Diameters d = diameters(rel.samples[k]);
      const double envelope = d0.Dw * std::exp(-run.lambda_cert * rel.samples[k].t);
      if (!(d.Dx < run.Dx_inf) || d.Dw > envelope * 1.05) run.flocking_ok = false;
    }
  });

  std::vector<double> fit_c, fit_w;
  for (const auto& run : result.runs) {
    result.sup_w1.push_back(run.sup_w1);
    if (run.sup_w1 > 0.0) {
      fit_c.push_back(run.c);
      fit_w.push_back(run.sup_w1);
    }
  }
  if (fit_c.size() >= 3) result.fit = fit_loglog(fit_c, fit_w);
  return result;
}

double flow_distance(const PointCloud6D& a, const PointCloud6D& b,
                     const ModelParams& params_template, const SimConfig& config) {
  const Trajectory ta = simulate(to_state(a), params_template.resized(a.size()), config);
  const Trajectory tb = simulate(to_state(b), params_template.resized(b.size()), config);
  if (ta.samples.size() != tb.samples.size())
    throw std::logic_error("flow_distance: sample grids differ");
  double sup = 0.0;
  for (std::size_t k = 0; k < ta.samples.size(); ++k)
    sup = std::max(sup, wasserstein1_uniform(to_cloud(ta.samples[k]), to_cloud(tb.samples[k])));
  return sup;
}

MeanfieldScanResult meanfield_convergence_scan(const MeasureSpec& spec,
                                               const std::vector<std::size_t>& n_values,
                                               const ModelParams& params_template,
                                               const SimConfig& config, std::uint64_t seed) {
  if (n_values.size() < 3)
    throw std::invalid_argument("meanfield_convergence_scan: need at least 3 N values");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] == 0) throw std::invalid_argument("meanfield_convergence_scan: N must be >= 1");
    if (i > 0 && !(n_values[i] > n_values[i - 1]))
      throw std::invalid_argument("meanfield_convergence_scan: N values must be increasing");
  }
  if (2 * n_values.back() > kMaxAtoms)
    throw std::invalid_argument("meanfield_convergence_scan: 2N exceeds the atom cap");

  MeanfieldScanResult result;
  result.n_values = n_values;
  result.sup_w1.assign(n_values.size(), 0.0);
  parallel_for(n_values.size(), [&](std::size_t i) {
    const std::size_t n = n_values[i];
    const SampledCloud small = sample_cloud(spec, n, derive_seed(seed, 2 * i));
    const SampledCloud large = sample_cloud(spec, 2 * n, derive_seed(seed, 2 * i + 1));
    result.sup_w1[i] = flow_distance(small.cloud, large.cloud, params_template, config);
  });

  result.decreasing_trend = result.sup_w1.back() < result.sup_w1.front();
  result.monotone = true;
  for (std::size_t i = 1; i < result.sup_w1.size(); ++i)
    if (!(result.sup_w1[i] < result.sup_w1[i - 1])) result.monotone = false;
  return result;
}

}  // namespace rcs
