#include "rcslab/relativistic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rcs {

namespace {

void require_gamma(double gamma) {
  if (!(gamma >= 1.0)) throw DomainError("Lorentz factor must be >= 1");
}

LorentzState state_from_u(double u, double kappa) {
  LorentzState st;
  st.u = u;
  st.gamma = std::sqrt(1.0 + u * u);
  st.gamma_minus_one = u * u / (st.gamma + 1.0);
  st.F = st.gamma * (1.0 + kappa * st.gamma);
  return st;
}

}  // namespace

double lorentz_from_v(const Vec3& v, Species s) {
  const double beta2 = v.squaredNorm() / (s.c * s.c);
  if (!(beta2 < 1.0)) throw DomainError("superluminal velocity");
  return 1.0 / std::sqrt(1.0 - beta2);
}

double F_of_gamma(double gamma, Species s) {
  require_gamma(gamma);
  return (1.0 + s.kappa * gamma) * gamma;
}

LorentzState lorentz_state_from_w(double w_norm, Species s) {
  if (!(w_norm >= 0.0) || !std::isfinite(w_norm))
    throw DomainError("momentum norm must be finite and nonnegative");
  if (w_norm == 0.0) return state_from_u(0.0, s.kappa);

  // g(u) = c u (1 + kappa sqrt(1+u^2)) - |w| is strictly increasing, g(0) < 0,
  // and g(|w|/c) >= 0 because the bracket factor is >= 1.
  const double target = w_norm / s.c;
  auto g = [&](double u) {
    return u * (1.0 + s.kappa * std::sqrt(1.0 + u * u)) - target;
  };
  auto dg = [&](double u) {
    const double gam = std::sqrt(1.0 + u * u);
    return 1.0 + s.kappa * gam + s.kappa * u * u / gam;
  };

  double lo = 0.0;
  double hi = target;
  // Start from the small-velocity guess u ~ |w| / (c (1 + kappa)).
  double u = target / (1.0 + s.kappa);
  for (int it = 0; it < 200; ++it) {
    const double gu = g(u);
    if (gu == 0.0) break;
    if (gu < 0.0) lo = u; else hi = u;
    double next = u - gu / dg(u);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - u);
    u = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * u) break;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return state_from_u(u, s.kappa);
}

Vec3 v_from_w(const Vec3& w, Species s) {
  return w / lorentz_state_from_w(w.norm(), s).F;
}

Vec3 w_from_v(const Vec3& v, Species s) {
  const double gamma = lorentz_from_v(v, s);
  return F_of_gamma(gamma, s) * v;
}

double F_prime(double gamma, Species s) {
  require_gamma(gamma);
  const double k = s.kappa;
  const double num = 1.0 + 2.0 * k * gamma;
  const double den = 2.0 * s.c * s.c * (1.0 + k * gamma) *
                     (2.0 * k * gamma * gamma + gamma - k);
  return num / den;
}

Eigen::Matrix3d jacobian_A(const Vec3& z, Species s) {
  const LorentzState st = lorentz_state_from_w(z.norm(), s);
  const double fp = F_prime(st.gamma, s);
  Eigen::Matrix3d A = Eigen::Matrix3d::Identity() / st.F;
  A.noalias() -= (2.0 * fp / (st.F * st.F)) * (z * z.transpose());
  return A;
}

double coercivity_profile(double z_norm, Species s) {
  const LorentzState st = lorentz_state_from_w(z_norm, s);
  const double fp = F_prime(st.gamma, s);
  return (st.F - 2.0 * z_norm * z_norm * fp) / (st.F * st.F);
}

double lorentz_from_v(const Vec3& v, const ModelParams& p, std::size_t agent) {
  return lorentz_from_v(v, species(p, agent));
}

double F_of_gamma(double gamma, const ModelParams& p, std::size_t agent) {
  return F_of_gamma(gamma, species(p, agent));
}

double gamma_from_w(double w_norm, const ModelParams& p, std::size_t agent) {
  return lorentz_state_from_w(w_norm, species(p, agent)).gamma;
}

Vec3 v_from_w(const Vec3& w, const ModelParams& p, std::size_t agent) {
  return v_from_w(w, species(p, agent));
}

Vec3 w_from_v(const Vec3& v, const ModelParams& p, std::size_t agent) {
  return w_from_v(v, species(p, agent));
}

double F_prime(double gamma, const ModelParams& p, std::size_t agent) {
  return F_prime(gamma, species(p, agent));
}

Eigen::Matrix3d jacobian_A(const Vec3& z, const ModelParams& p, std::size_t agent) {
  return jacobian_A(z, species(p, agent));
}

double lambda0(double W0, const ModelParams& p, std::size_t agent, int grid_points) {
  if (!(W0 >= 0.0)) throw DomainError("lambda0: W0 must be >= 0");
  const Species s = species(p, agent);
  if (W0 == 0.0) return coercivity_profile(0.0, s);
  const int n = std::max(grid_points, 2);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double z = (k == n - 1) ? W0 : W0 * static_cast<double>(k) / (n - 1);
    best = std::min(best, coercivity_profile(z, s));
  }
  return best;
}

double lambda1(double W, const ModelParams& p, std::size_t agent) {
  if (!(W >= 0.0)) throw DomainError("lambda1: W must be >= 0");
  const LorentzState st = lorentz_state_from_w(W, species(p, agent));
  return p.c * p.c * (1.0 - 1.0 / st.F);
}

double lambda2(double W, const ModelParams& p, std::size_t agent) {
  if (!(W >= 0.0)) throw DomainError("lambda2: W must be >= 0");
  const Species s = species(p, agent);
  const LorentzState st = lorentz_state_from_w(W, s);
  const double g = st.gamma;
  const double g2m1 = st.u * st.u;  // Gamma^2 - 1
  const double bound = st.gamma_minus_one + s.kappa * g * g +
                       g2m1 * (1.0 + 2.0 * s.kappa * g);
  return p.c * p.c * bound;
}

double lambda0_ensemble(double W0, const ModelParams& p, int grid_points) {
  double out = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < p.size(); ++a)
    out = std::min(out, lambda0(W0, p, a, grid_points));
  return out;
}

double lambda1_ensemble(double W, const ModelParams& p) {
  double out = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) out = std::max(out, lambda1(W, p, a));
  return out;
}

double lambda2_ensemble(double W, const ModelParams& p) {
  double out = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) out = std::max(out, lambda2(W, p, a));
  return out;
}

double particle_decay_rate(double Dx_inf, double Dw0, const ModelParams& p) {
  return kernel_eval(p.kernel, Dx_inf) / p.T_star -
         2.0 * lambda2_ensemble(Dw0, p) / (p.c * p.c * p.T_star);
}

double kinetic_decay_rate(double Dx_inf, double Dw0, const ModelParams& p) {
  return kernel_eval(p.kernel, Dx_inf) -
         2.0 * lambda2_ensemble(Dw0, p) / (p.c * p.c);
}

RelConstants rel_constants(double W, double Dx_inf, const ModelParams& p) {
  RelConstants rc;
  rc.Lambda0 = lambda0_ensemble(W, p);
  rc.Lambda1 = lambda1_ensemble(W, p);
  rc.Lambda2 = lambda2_ensemble(W, p);
  rc.Dx_inf = Dx_inf;
  rc.lambda = particle_decay_rate(Dx_inf, W, p);
  return rc;
}

}  // namespace rcs
