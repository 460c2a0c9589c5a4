#pragma once

// Functionals of ensemble states and trajectories, and the flocking
// certificate: the pair (Dx_inf, lambda) that witnesses
//
//   Dx(0) + c^4 [T*] Dw(0) / ((c^2 + 1)(c^2 phi(Dx_inf) - 2 Lambda_2(Dw(0)))) < Dx_inf
//
// with c^2 phi(Dx_inf) > 2 Lambda_2(Dw(0)). The bracketed T* belongs to the
// particle estimate only; the kinetic estimate has none.

#include <cstddef>
#include <span>
#include <vector>

#include "rcslab/dynamics.hpp"
#include "rcslab/integrator.hpp"
#include "rcslab/params.hpp"

namespace rcs {

struct Diameters {
  double Dx = 0.0;
  double Dw = 0.0;
};

/// Exact pairwise maxima; N = 1 gives (0, 0).
Diameters diameters(const EnsembleState& state);

struct LyapunovValue {
  double value = 0.0;       // (1/N) sum |w_a|^2
  double double_sum = 0.0;  // (1/(2N^2)) sum_{a,b} |w_a - w_b|^2
  bool zero_sum_ok = true;  // |sum w| <= 1e-10 max(1, max |w_a|)
};

LyapunovValue lyapunov(const EnsembleState& state);

/// E(Gamma) = c^2 (Gamma - 1) + (D+2) k_B T* / (2m) (Gamma^2 - log Gamma).
double agent_energy(const Vec3& w, const ModelParams& params, std::size_t agent);

/// Mean energy over agents. For the classical model the c -> infinity form
/// |w|^2 / 2 + (D+2) k_B T* / (2m) is used.
double total_energy(const EnsembleState& state, const ModelParams& params,
                    Model model = Model::rcs);

/// max_a |v_a|: |w_a| for the classical model, |w_a / F_a| for the relativistic one.
double max_speed(const EnsembleState& state, const ModelParams& params, Model model);

struct DiagnosticsRecord {
  double t = 0.0;
  double Dx = 0.0;
  double Dw = 0.0;
  double L = 0.0;
  double momentum_norm = 0.0;
  double E_total = 0.0;
  double max_speed = 0.0;
};

using DiagnosticsSeries = std::vector<DiagnosticsRecord>;

DiagnosticsSeries compute_diagnostics(const Trajectory& traj);

enum class Regime { particle, kinetic };

struct FlockingCertificate {
  Regime regime = Regime::particle;
  double Dx0 = 0.0;
  double Dw0 = 0.0;
  double Lambda2 = 0.0;
  double Dx_inf = 0.0;
  double lambda = 0.0;
  double condition_lhs = 0.0;
  double condition_rhs = 0.0;
  bool satisfied = false;
  // Same inequality with the alternative denominator 2 c^2 phi - 4 Lambda_2
  // (half the correction term), evaluated at the same Dx_inf.
  double printed_condition_lhs = 0.0;
  bool printed_satisfied = false;
};

/// Scans Dx_inf = base * {1.1, 1.2, ..., 1000} (base = Dx(0), or 1 when
/// Dx(0) = 0) and returns the smallest grid value satisfying the condition.
/// When none does, `satisfied` is false and the grid point with the smallest
/// violation is reported.
FlockingCertificate flocking_certificate(const EnsembleState& init,
                                         const ModelParams& params,
                                         Regime regime = Regime::particle);

/// Evaluates the certificate condition at a given Dx_inf.
FlockingCertificate evaluate_certificate(double Dx0, double Dw0, double Dx_inf,
                                         const ModelParams& params, Regime regime);

struct SddiReport {
  std::size_t samples_checked = 0;
  std::size_t violations_x = 0;
  std::size_t violations_w = 0;
  double max_violation_x = 0.0;  // max of (lhs - rhs - tol), <= 0 when clean
  double max_violation_w = 0.0;
  bool passed() const { return violations_x == 0 && violations_w == 0; }
};

/// Centered-difference check of
///   dDx/dt <= k Dw,   k = c^2/(c^2+1) (relativistic) or 1 (classical)
///   dDw/dt <= -lambda Dw
/// at interior samples with tolerance
///   10 (dt^2 (Dx(0) + Dw(0)) + |second difference of D| / (2h) + |g(k+1) - g(k-1)| / 2)
/// where g is the right-hand side and h the sample spacing.
SddiReport check_sddi(const Trajectory& traj, double lambda);

struct BoundCheck {
  bool passed = true;
  double worst = 0.0;          // largest ratio (or excess) observed
  std::size_t worst_index = 0;
};

/// y_k <= y0 exp(-rate t_k) (1 + slack) for every k; worst is max y_k / envelope.
BoundCheck check_exponential_bound(std::span<const double> t, std::span<const double> y,
                                   double y0, double rate, double slack);

/// values[k+1] <= values[k] + tol for every k; worst is the largest increase.
BoundCheck check_nonincreasing(std::span<const double> values, double tol);

/// Conservation and dissipation summary of one run.
struct RunHealth {
  double momentum_ratio = 0.0;       // max_t |sum w| / (N max_a |w_a(0)|), 0 when w(0) = 0
  double max_momentum_norm = 0.0;    // max_t |sum w|
  double max_energy_increase = 0.0;  // max_k (E_{k+1} - E_k), <= 0 for dissipative runs
};

RunHealth run_health(const Trajectory& traj);

/// values[k] < bound for every k; worst is max values[k].
BoundCheck check_strict_upper(std::span<const double> values, double bound);

}  // namespace rcs
