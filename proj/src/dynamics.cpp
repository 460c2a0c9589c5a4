#include "rcslab/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "rcslab/relativistic.hpp"

namespace rcs {

std::string to_string(Model m) { return m == Model::rcs ? "rcs" : "cs"; }

Model model_from_string(const std::string& name) {
  if (name == "rcs") return Model::rcs;
  if (name == "cs") return Model::cs;
  throw std::invalid_argument("unknown model '" + name + "' (expected rcs or cs)");
}

bool EnsembleState::finite() const {
  if (!std::isfinite(t)) return false;
  for (const auto& v : x)
    if (!v.allFinite()) return false;
  for (const auto& v : w)
    if (!v.allFinite()) return false;
  return true;
}

Vec3 EnsembleState::momentum_sum() const {
  Vec3 s = Vec3::Zero();
  for (const auto& v : w) s += v;
  return s;
}

namespace {

// Shared alignment sum; `vel` holds w/F (relativistic) or w (classical).
Derivative align(const EnsembleState& state, const ModelParams& params,
                 std::vector<Vec3> vel) {
  const std::size_t n = state.size();
  Derivative d;
  d.dw.assign(n, Vec3::Zero());
  const double scale = 1.0 / (static_cast<double>(n) * params.T_star);
  for (std::size_t a = 0; a < n; ++a) {
    Vec3 acc = Vec3::Zero();
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      const double phi = kernel_eval(params.kernel, (state.x[a] - state.x[b]).norm());
      acc += phi * (vel[b] - vel[a]);
    }
    d.dw[a] = scale * acc;
  }
  d.dx = std::move(vel);
  return d;
}

void check_shape(const EnsembleState& state, const ModelParams& params) {
  if (state.x.size() != state.w.size())
    throw std::invalid_argument("state: x and w have different lengths");
  if (state.x.empty()) throw std::invalid_argument("state: empty ensemble");
  if (params.size() != state.size())
    throw std::invalid_argument("state size does not match the agent table");
}

}  // namespace

Derivative rcs_rhs(const EnsembleState& state, const ModelParams& params) {
  check_shape(state, params);
  std::vector<Vec3> vel(state.size());
  for (std::size_t a = 0; a < state.size(); ++a)
    vel[a] = v_from_w(state.w[a], params, a);
  return align(state, params, std::move(vel));
}

Derivative cs_rhs(const EnsembleState& state, const ModelParams& params) {
  check_shape(state, params);
  return align(state, params, state.w);
}

Derivative model_rhs(Model model, const EnsembleState& state, const ModelParams& params) {
  return model == Model::rcs ? rcs_rhs(state, params) : cs_rhs(state, params);
}

void project_zero_sum(std::vector<Vec3>& w) {
  if (w.empty()) return;
  Vec3 mean = Vec3::Zero();
  for (const auto& v : w) mean += v;
  mean /= static_cast<double>(w.size());
  for (auto& v : w) v -= mean;
}

PreparedInitial prepare_initial(const std::vector<Vec3>& positions,
                                const std::vector<Vec3>& velocities_or_momenta,
                                InitMode mode, const ModelParams& params) {
  if (positions.empty()) throw std::invalid_argument("prepare_initial: N must be >= 1");
  if (positions.size() != velocities_or_momenta.size())
    throw std::invalid_argument("prepare_initial: positions and velocities differ in length");
  if (params.size() != positions.size())
    throw std::invalid_argument("prepare_initial: agent table size mismatch");

  PreparedInitial out;
  out.raw_w = velocities_or_momenta;
  if (mode == InitMode::from_v) {
    for (std::size_t a = 0; a < out.raw_w.size(); ++a)
      out.raw_w[a] = w_from_v(velocities_or_momenta[a], params, a);
  }
  out.state.t = 0.0;
  out.state.x = positions;
  out.state.w = out.raw_w;

  Vec3 mean = Vec3::Zero();
  for (const auto& v : out.raw_w) mean += v;
  mean /= static_cast<double>(out.raw_w.size());
  out.removed_mean = mean;
  for (auto& v : out.state.w) v -= mean;
  return out;
}

}  // namespace rcs
