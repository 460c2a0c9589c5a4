#pragma once

// Relativistic kinematics of a single agent: Lorentz factor, the momentum-like
// variable w = F v with F = Gamma (1 + kappa Gamma), kappa = (D+2)/(2 gamma*),
// and the constants that control coercivity and the c -> infinity deviation.

#include <cstddef>

#include <Eigen/Core>

#include "rcslab/params.hpp"

namespace rcs {

/// Per-agent kinematic constants (c, kappa). Cheap to copy.
struct Species {
  double c;
  double kappa;
};

inline Species species(const ModelParams& p, std::size_t agent) {
  return {p.c, p.kappa(agent)};
}

/// Gamma together with the cancellation-free quantities derived from it.
struct LorentzState {
  double gamma = 1.0;
  double gamma_minus_one = 0.0;  // Gamma - 1, accurate even when Gamma ~ 1
  double u = 0.0;                // sqrt(Gamma^2 - 1) = Gamma |v| / c
  double F = 1.0;                // Gamma (1 + kappa Gamma)
};

// Species-level kernels. The ModelParams overloads below forward here.
double lorentz_from_v(const Vec3& v, Species s);
double F_of_gamma(double gamma, Species s);
LorentzState lorentz_state_from_w(double w_norm, Species s);
Vec3 v_from_w(const Vec3& w, Species s);
Vec3 w_from_v(const Vec3& v, Species s);
double F_prime(double gamma, Species s);
Eigen::Matrix3d jacobian_A(const Vec3& z, Species s);

double lorentz_from_v(const Vec3& v, const ModelParams& p, std::size_t agent);
double F_of_gamma(double gamma, const ModelParams& p, std::size_t agent);

/// Unique Gamma >= 1 with c^2 (Gamma^2 - 1)(1 + kappa Gamma)^2 = w_norm^2.
/// Bracketed Newton on u = sqrt(Gamma^2 - 1) in [0, w_norm / c].
double gamma_from_w(double w_norm, const ModelParams& p, std::size_t agent);

Vec3 v_from_w(const Vec3& w, const ModelParams& p, std::size_t agent);
Vec3 w_from_v(const Vec3& v, const ModelParams& p, std::size_t agent);

/// dF/d(z^2) in closed form as a function of Gamma.
double F_prime(double gamma, const ModelParams& p, std::size_t agent);

/// A(z) = grad_z (z / F(z^2)) = I/F - 2 F' z z^T / F^2.
Eigen::Matrix3d jacobian_A(const Vec3& z, const ModelParams& p, std::size_t agent);

/// Smallest eigenvalue of A(z) as a function of |z|: (F - 2 z^2 F') / F^2.
double coercivity_profile(double z_norm, Species s);

inline constexpr int kDefaultConstantGrid = 1024;

/// Lambda_0(W0): minimum of the coercivity profile on a uniform grid over
/// [0, W0] (grid_points includes both endpoints).
double lambda0(double W0, const ModelParams& p, std::size_t agent,
               int grid_points = kDefaultConstantGrid);

/// Lambda_1(W) = c^2 (1 - 1/F(W^2)), so that |w - w/F| <= Lambda_1 |w| / c^2
/// for all |w| <= W.
double lambda1(double W, const ModelParams& p, std::size_t agent);

/// Lambda_2(W) = c^2 [ (Gamma-1) + kappa Gamma^2 + (Gamma^2-1)(1 + 2 kappa Gamma) ]
/// at Gamma = Gamma(W). Majorizes c^2 times the operator norm of
/// grad_z((1/F - 1) z) over |z| <= W.
double lambda2(double W, const ModelParams& p, std::size_t agent);

// Ensemble-level constants: worst case over the agent table.
double lambda0_ensemble(double W0, const ModelParams& p,
                        int grid_points = kDefaultConstantGrid);
double lambda1_ensemble(double W, const ModelParams& p);
double lambda2_ensemble(double W, const ModelParams& p);

/// Certified decay rate for the particle system:
///   phi(Dx_inf)/T* - 2 Lambda_2(Dw0) / (c^2 T*).
double particle_decay_rate(double Dx_inf, double Dw0, const ModelParams& p);

/// Decay rate of the kinetic flocking estimate, phi(Dx_inf) - 2 Lambda_2(Dw0)/c^2.
/// Carries no 1/T* factor.
double kinetic_decay_rate(double Dx_inf, double Dw0, const ModelParams& p);

struct RelConstants {
  double Lambda0 = 1.0;
  double Lambda1 = 0.0;
  double Lambda2 = 0.0;
  double lambda = 0.0;
  double Dx_inf = 0.0;
};

RelConstants rel_constants(double W, double Dx_inf, const ModelParams& p);

}  // namespace rcs
