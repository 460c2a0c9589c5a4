#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rcslab/params.hpp"

namespace rcs {

enum class Model { rcs, cs };

std::string to_string(Model m);
Model model_from_string(const std::string& name);

/// Snapshot of the ensemble. For the relativistic model w holds the
/// generalized momenta; for the classical model w holds the velocities.
struct EnsembleState {
  double t = 0.0;
  std::vector<Vec3> x;
  std::vector<Vec3> w;

  std::size_t size() const { return x.size(); }
  bool finite() const;
  Vec3 momentum_sum() const;
};

struct Derivative {
  std::vector<Vec3> dx;
  std::vector<Vec3> dw;
};

/// dx_a = w_a / F_a,
/// dw_a = 1/(N T*) sum_b phi(|x_a - x_b|) (w_b/F_b - w_a/F_a).
/// F_a is computed once per agent; the pair sum runs in index order b = 0..N-1.
Derivative rcs_rhs(const EnsembleState& state, const ModelParams& params);

/// Classical limit: dx_a = w_a, dw_a = 1/(N T*) sum_b phi(|x_a - x_b|)(w_b - w_a).
Derivative cs_rhs(const EnsembleState& state, const ModelParams& params);

Derivative model_rhs(Model model, const EnsembleState& state, const ModelParams& params);

enum class InitMode { from_v, from_w };

struct PreparedInitial {
  EnsembleState state;          // zero-sum projected
  std::vector<Vec3> raw_w;      // w before projection (after v -> w conversion)
  Vec3 removed_mean = Vec3::Zero();
};

/// Converts velocities to momenta when mode == from_v (relativistic map), then
/// subtracts the mean so that sum_a w_a = 0. For the classical model pass
/// from_w: velocities and momenta coincide.
PreparedInitial prepare_initial(const std::vector<Vec3>& positions,
                                const std::vector<Vec3>& velocities_or_momenta,
                                InitMode mode, const ModelParams& params);

/// Subtracts the mean of w in place.
void project_zero_sum(std::vector<Vec3>& w);

}  // namespace rcs
