#pragma once

#include <cstdint>
#include <random>

#include "rcslab/dynamics.hpp"
#include "rcslab/params.hpp"

namespace testing {

/// c = 10, T* = 1, k_B = 1, m = 1, D = 3, so gamma* = 100.
inline rcs::ModelParams reference_params(std::size_t n = 1,
                                         rcs::KernelSpec kernel = {}) {
  return rcs::ModelParams::uniform(n, 10.0, kernel);
}

/// Uniform point in the ball of radius r.
inline rcs::Vec3 random_in_ball(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    rcs::Vec3 v(u(rng), u(rng), u(rng));
    if (v.squaredNorm() <= 1.0) return r * v;
  }
}

inline rcs::EnsembleState random_state(std::mt19937_64& rng, std::size_t n, double xr,
                                       double wr) {
  rcs::EnsembleState s;
  for (std::size_t a = 0; a < n; ++a) {
    s.x.push_back(random_in_ball(rng, xr));
    s.w.push_back(random_in_ball(rng, wr));
  }
  return s;
}

}  // namespace testing
