#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcslab/dynamics.hpp"
#include "rcslab/params.hpp"

namespace rcs {

struct SimConfig {
  double dt = 1e-2;
  double t_end = 10.0;
  int sample_every = 10;
  Model model = Model::rcs;
  std::uint64_t seed = 42;

  void validate() const;
  /// ceil(t_end / dt), robust to t_end being an integer multiple of dt.
  std::size_t total_steps() const;
};

/// min(1e-2, 0.1 T* / phi(0)); phi(0) = 1 for every supported kernel.
double default_dt(const ModelParams& params);

struct Trajectory {
  std::vector<EnsembleState> samples;
  SimConfig config;
  ModelParams params;
};

/// Thrown when the integration produces a non-finite state.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(std::size_t step, std::size_t agent);
  std::size_t step;
  std::size_t agent;
};

using RhsFn = std::function<Derivative(const EnsembleState&)>;

/// Classical four-stage Runge-Kutta step.
EnsembleState rk4_step(const EnsembleState& state, double dt, const RhsFn& rhs);

/// Fixed-step RK4 from init.t over total_steps() steps. Samples the initial
/// state, every sample_every-th step, and the final step.
Trajectory simulate(const EnsembleState& init, const ModelParams& params,
                    const SimConfig& config);

}  // namespace rcs
