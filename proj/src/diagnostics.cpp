#include "rcslab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rcslab/relativistic.hpp"

namespace rcs {

Diameters diameters(const EnsembleState& state) {
  Diameters d;
  const std::size_t n = state.size();
  double dx2 = 0.0, dw2 = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      dx2 = std::max(dx2, (state.x[a] - state.x[b]).squaredNorm());
      dw2 = std::max(dw2, (state.w[a] - state.w[b]).squaredNorm());
    }
  }
  d.Dx = std::sqrt(dx2);
  d.Dw = std::sqrt(dw2);
  return d;
}

LyapunovValue lyapunov(const EnsembleState& state) {
  LyapunovValue out;
  const std::size_t n = state.size();
  if (n == 0) return out;
  const double nd = static_cast<double>(n);
  double sq = 0.0, wmax = 0.0;
  for (const auto& w : state.w) {
    sq += w.squaredNorm();
    wmax = std::max(wmax, w.norm());
  }
  out.value = sq / nd;
  double pair = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) pair += (state.w[a] - state.w[b]).squaredNorm();
  out.double_sum = pair / (2.0 * nd * nd);
  out.zero_sum_ok = state.momentum_sum().norm() <= 1e-10 * std::max(1.0, wmax);
  return out;
}

double agent_energy(const Vec3& w, const ModelParams& params, std::size_t agent) {
  const auto& a = params.agents.at(agent);
  const double thermal = (a.dof + 2.0) * params.k_B * params.T_star / (2.0 * a.mass);
  const LorentzState st = lorentz_state_from_w(w.norm(), species(params, agent));
  // Gamma^2 - log Gamma = 1 + (Gamma^2 - 1) - log1p(Gamma - 1)
  const double shape = 1.0 + st.u * st.u - std::log1p(st.gamma_minus_one);
  return params.c * params.c * st.gamma_minus_one + thermal * shape;
}

double total_energy(const EnsembleState& state, const ModelParams& params, Model model) {
  double sum = 0.0;
  for (std::size_t a = 0; a < state.size(); ++a) {
    if (model == Model::rcs) {
      sum += agent_energy(state.w[a], params, a);
    } else {
      const auto& ag = params.agents.at(a);
      sum += 0.5 * state.w[a].squaredNorm() +
             (ag.dof + 2.0) * params.k_B * params.T_star / (2.0 * ag.mass);
    }
  }
  return sum / static_cast<double>(state.size());
}

double max_speed(const EnsembleState& state, const ModelParams& params, Model model) {
  double out = 0.0;
  for (std::size_t a = 0; a < state.size(); ++a) {
    const double s = model == Model::cs ? state.w[a].norm()
                                        : v_from_w(state.w[a], params, a).norm();
    out = std::max(out, s);
  }
  return out;
}

DiagnosticsSeries compute_diagnostics(const Trajectory& traj) {
  DiagnosticsSeries series;
  series.reserve(traj.samples.size());
  const Model model = traj.config.model;
  for (const auto& s : traj.samples) {
    DiagnosticsRecord r;
    r.t = s.t;
    const Diameters d = diameters(s);
    r.Dx = d.Dx;
    r.Dw = d.Dw;
    r.L = lyapunov(s).value;
    r.momentum_norm = s.momentum_sum().norm();
    r.E_total = total_energy(s, traj.params, model);
    r.max_speed = max_speed(s, traj.params, model);
    series.push_back(r);
  }
  return series;
}

FlockingCertificate evaluate_certificate(double Dx0, double Dw0, double Dx_inf,
                                         const ModelParams& params, Regime regime) {
  FlockingCertificate cert;
  cert.regime = regime;
  cert.Dx0 = Dx0;
  cert.Dw0 = Dw0;
  cert.Lambda2 = lambda2_ensemble(Dw0, params);
  cert.Dx_inf = Dx_inf;
  cert.condition_rhs = Dx_inf;

  const double c2 = params.c * params.c;
  const double phi = kernel_eval(params.kernel, Dx_inf);
  const double denom = c2 * phi - 2.0 * cert.Lambda2;
  const double tfac = regime == Regime::particle ? params.T_star : 1.0;
  cert.lambda = regime == Regime::particle ? particle_decay_rate(Dx_inf, Dw0, params)
                                           : kinetic_decay_rate(Dx_inf, Dw0, params);
  if (denom > 0.0) {
    const double corr = c2 * c2 * tfac * Dw0 / ((c2 + 1.0) * denom);
    cert.condition_lhs = Dx0 + corr;
    cert.printed_condition_lhs = Dx0 + 0.5 * corr;
  } else {
    cert.condition_lhs = std::numeric_limits<double>::infinity();
    cert.printed_condition_lhs = std::numeric_limits<double>::infinity();
  }
  cert.satisfied = denom > 0.0 && cert.lambda > 0.0 && cert.condition_lhs < cert.condition_rhs;
  cert.printed_satisfied = denom > 0.0 && cert.printed_condition_lhs < cert.condition_rhs;
  return cert;
}

FlockingCertificate flocking_certificate(const EnsembleState& init,
                                         const ModelParams& params, Regime regime) {
  const Diameters d = diameters(init);
  const double base = d.Dx > 0.0 ? d.Dx : 1.0;

  FlockingCertificate best;
  bool have_best = false;
  double best_margin = std::numeric_limits<double>::infinity();
  // multipliers 1.1, 1.2, ..., 1000.0
  for (int k = 11; k <= 10000; ++k) {
    const double Dx_inf = base * (static_cast<double>(k) / 10.0);
    FlockingCertificate cert = evaluate_certificate(d.Dx, d.Dw, Dx_inf, params, regime);
    if (cert.satisfied) return cert;
    const double margin = cert.condition_lhs - cert.condition_rhs;
    if (!have_best || margin < best_margin) {
      best = cert;
      best_margin = margin;
      have_best = true;
    }
  }
  return best;
}

namespace {

double second_diff_tol(std::span<const double> d, std::size_t k, double h) {
  return std::abs(d[k + 1] - 2.0 * d[k] + d[k - 1]) / (2.0 * h);
}

}  // namespace

SddiReport check_sddi(const Trajectory& traj, double lambda) {
  SddiReport rep;
  const auto series = compute_diagnostics(traj);
  const std::size_t n = series.size();
  if (n < 3) throw std::invalid_argument("check_sddi: need at least 3 samples");

  const double c2 = traj.params.c * traj.params.c;
  const double kx = traj.config.model == Model::rcs ? c2 / (c2 + 1.0) : 1.0;
  const double dt = traj.config.dt;
  const double scale = series.front().Dx + series.front().Dw;

  std::vector<double> Dx(n), Dw(n), gx(n), gw(n);
  for (std::size_t k = 0; k < n; ++k) {
    Dx[k] = series[k].Dx;
    Dw[k] = series[k].Dw;
    gx[k] = kx * Dw[k];
    gw[k] = -lambda * Dw[k];
  }

  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h = 0.5 * (series[k + 1].t - series[k - 1].t);
    if (!(h > 0.0)) continue;
    ++rep.samples_checked;
    const double base_tol = dt * dt * scale;

    const double qx = (Dx[k + 1] - Dx[k - 1]) / (2.0 * h);
    const double tolx = 10.0 * (base_tol + second_diff_tol(Dx, k, h) +
                                0.5 * std::abs(gx[k + 1] - gx[k - 1]));
    const double vx = qx - gx[k] - tolx;

    const double qw = (Dw[k + 1] - Dw[k - 1]) / (2.0 * h);
    const double tolw = 10.0 * (base_tol + second_diff_tol(Dw, k, h) +
                                0.5 * std::abs(gw[k + 1] - gw[k - 1]));
    const double vw = qw - gw[k] - tolw;

    if (rep.samples_checked == 1) {
      rep.max_violation_x = vx;
      rep.max_violation_w = vw;
    } else {
      rep.max_violation_x = std::max(rep.max_violation_x, vx);
      rep.max_violation_w = std::max(rep.max_violation_w, vw);
    }
    if (vx > 0.0) ++rep.violations_x;
    if (vw > 0.0) ++rep.violations_w;
  }
  return rep;
}

BoundCheck check_exponential_bound(std::span<const double> t, std::span<const double> y,
                                   double y0, double rate, double slack) {
  if (t.size() != y.size()) throw std::invalid_argument("check_exponential_bound: size mismatch");
  BoundCheck out;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double envelope = y0 * std::exp(-rate * t[k]);
    double ratio;
    if (envelope > 0.0) {
      ratio = y[k] / envelope;
    } else {
      ratio = y[k] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    if (k == 0 || ratio > out.worst) {
      out.worst = ratio;
      out.worst_index = k;
    }
    if (y[k] > envelope * (1.0 + slack)) out.passed = false;
  }
  return out;
}

BoundCheck check_nonincreasing(std::span<const double> values, double tol) {
  BoundCheck out;
  out.worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double inc = values[k] - values[k - 1];
    if (inc > out.worst) {
      out.worst = inc;
      out.worst_index = k;
    }
    if (inc > tol) out.passed = false;
  }
  if (values.size() < 2) out.worst = 0.0;
  return out;
}

RunHealth run_health(const Trajectory& traj) {
  RunHealth h;
  if (traj.samples.empty()) return h;
  const auto& init = traj.samples.front();
  double wmax = 0.0;
  for (const auto& w : init.w) wmax = std::max(wmax, w.norm());
  const double scale = static_cast<double>(init.size()) * wmax;
  double prevE = 0.0;
  h.max_energy_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto& s = traj.samples[k];
    h.max_momentum_norm = std::max(h.max_momentum_norm, s.momentum_sum().norm());
    const double E = total_energy(s, traj.params, traj.config.model);
    if (k > 0) h.max_energy_increase = std::max(h.max_energy_increase, E - prevE);
    prevE = E;
  }
  if (traj.samples.size() < 2) h.max_energy_increase = 0.0;
  h.momentum_ratio = scale > 0.0 ? h.max_momentum_norm / scale : 0.0;
  return h;
}

BoundCheck check_strict_upper(std::span<const double> values, double bound) {
  BoundCheck out;
  out.worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] > out.worst) {
      out.worst = values[k];
      out.worst_index = k;
    }
    if (!(values[k] < bound)) out.passed = false;
  }
  return out;
}

}  // namespace rcs
