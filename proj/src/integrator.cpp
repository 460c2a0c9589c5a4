#include "rcslab/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace rcs {

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be > 0");
  if (dt > t_end) throw std::invalid_argument("dt must not exceed t_end");
  if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
}

std::size_t SimConfig::total_steps() const {
  const double ratio = t_end / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio))
    return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(ratio));
}

double default_dt(const ModelParams& params) {
  const double phi0 = kernel_eval(params.kernel, 0.0);
  return std::min(1e-2, 0.1 * params.T_star / phi0);
}

NumericalAbort::NumericalAbort(std::size_t step_, std::size_t agent_)
    : std::runtime_error("non-finite state at step " + std::to_string(step_) +
                         ", agent " + std::to_string(agent_)),
      step(step_),
      agent(agent_) {}

namespace {

EnsembleState axpy(const EnsembleState& s, double h, const Derivative& k) {
  EnsembleState out = s;
  for (std::size_t a = 0; a < s.size(); ++a) {
    out.x[a] += h * k.dx[a];
    out.w[a] += h * k.dw[a];
  }
  return out;
}

}  // namespace

EnsembleState rk4_step(const EnsembleState& state, double dt, const RhsFn& rhs) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be > 0");
  const Derivative k1 = rhs(state);
  const Derivative k2 = rhs(axpy(state, 0.5 * dt, k1));
  const Derivative k3 = rhs(axpy(state, 0.5 * dt, k2));
  const Derivative k4 = rhs(axpy(state, dt, k3));

  EnsembleState out = state;
  const double h6 = dt / 6.0;
  for (std::size_t a = 0; a < state.size(); ++a) {
    out.x[a] += h6 * (k1.dx[a] + 2.0 * k2.dx[a] + 2.0 * k3.dx[a] + k4.dx[a]);
    out.w[a] += h6 * (k1.dw[a] + 2.0 * k2.dw[a] + 2.0 * k3.dw[a] + k4.dw[a]);
  }
  out.t = state.t + dt;
  return out;
}

Trajectory simulate(const EnsembleState& init, const ModelParams& params,
                    const SimConfig& config) {
  config.validate();
  params.validate();
  if (init.size() == 0 || init.x.size() != init.w.size())
    throw std::invalid_argument("simulate: malformed initial state");
  if (init.size() != params.size())
    throw std::invalid_argument("simulate: initial state does not match agent table");

  Trajectory traj;
  traj.config = config;
  traj.params = params;
  const std::size_t steps = config.total_steps();
  traj.samples.reserve(steps / static_cast<std::size_t>(config.sample_every) + 2);
  traj.samples.push_back(init);

  const Model model = config.model;
  const RhsFn rhs = [&](const EnsembleState& s) { return model_rhs(model, s, params); };

  auto first_bad = [](const EnsembleState& s) {
    for (std::size_t a = 0; a < s.size(); ++a)
      if (!s.x[a].allFinite() || !s.w[a].allFinite()) return a;
    return s.size();
  };
  if (const std::size_t a = first_bad(init); a < init.size()) throw NumericalAbort(0, a);

  EnsembleState cur = init;
  const double t0 = init.t;
  for (std::size_t k = 1; k <= steps; ++k) {
    try {
      cur = rk4_step(cur, config.dt, rhs);
    } catch (const DomainError&) {
      // overflow inside a stage surfaces as a domain error (NaN distance, infinite |w|)
      throw NumericalAbort(k, first_bad(cur));
    }
    cur.t = t0 + static_cast<double>(k) * config.dt;  // no drift from repeated addition
    if (const std::size_t a = first_bad(cur); a < cur.size()) throw NumericalAbort(k, a);
    if (k % static_cast<std::size_t>(config.sample_every) == 0 || k == steps)
      traj.samples.push_back(cur);
  }
  return traj;
}

}  // namespace rcs
