#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rcs {

using Vec3 = Eigen::Vector3d;

/// Raised when a mathematical precondition is violated (superluminal
/// velocity, Lorentz factor below one, negative distance, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class KernelKind { constant, power_law };

/// Communication weight phi(r). The power-law family is (1 + r^2)^(-beta/2),
/// so phi(0) = 1 and phi is nonincreasing for every beta >= 0.
struct KernelSpec {
  KernelKind kind = KernelKind::power_law;
  double beta = 2.0;
};

double kernel_eval(const KernelSpec& spec, double r);

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

struct AgentSpec {
  double mass = 1.0;
  double dof = 3.0;  // D_a, degrees of freedom of the constituent
};

/// Physical constants plus the per-agent table. gamma_star is always derived
/// from the current c, never stored.
struct ModelParams {
  double c = 10.0;
  double T_star = 1.0;
  double k_B = 1.0;
  std::vector<AgentSpec> agents;
  KernelSpec kernel;

  /// Throws DomainError if any invariant (c, T*, k_B > 0, m > 0, D >= 1) fails.
  void validate() const;

  std::size_t size() const { return agents.size(); }

  /// gamma*_a = m_a c^2 / (k_B T*).
  double gamma_star(std::size_t agent) const;

  /// (D_a + 2) / (2 gamma*_a), the coefficient that multiplies Gamma inside F.
  double kappa(std::size_t agent) const;

  /// Copy with a different speed of light; masses and T* stay fixed.
  ModelParams with_c(double new_c) const;

  /// Copy whose agent table has n entries. A homogeneous table is replicated;
  /// a heterogeneous table must already have n entries.
  ModelParams resized(std::size_t n) const;

  static ModelParams uniform(std::size_t n, double c, KernelSpec kernel = {},
                             double T_star = 1.0, double k_B = 1.0,
                             double mass = 1.0, double dof = 3.0);
};

}  // namespace rcs
