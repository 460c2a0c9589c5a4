#include "rcslab/params.hpp"

#include <cmath>

namespace rcs {

double kernel_eval(const KernelSpec& spec, double r) {
  if (!(r >= 0.0)) throw DomainError("kernel_eval: negative distance");
  switch (spec.kind) {
    case KernelKind::constant:
      return 1.0;
    case KernelKind::power_law:
      if (spec.beta == 2.0) return 1.0 / (1.0 + r * r);
      return std::pow(1.0 + r * r, -0.5 * spec.beta);
  }
  return 1.0;
}

std::string to_string(KernelKind kind) {
  return kind == KernelKind::constant ? "constant" : "power_law";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "constant") return KernelKind::constant;
  if (name == "power_law") return KernelKind::power_law;
  throw std::invalid_argument("unknown kernel kind '" + name + "'");
}

void ModelParams::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("c must be > 0");
  if (!(T_star > 0.0)) throw DomainError("T_star must be > 0");
  if (!(k_B > 0.0)) throw DomainError("k_B must be > 0");
  if (agents.empty()) throw DomainError("at least one agent is required");
  for (const auto& a : agents) {
    if (!(a.mass > 0.0)) throw DomainError("agent mass must be > 0");
    if (!(a.dof >= 1.0)) throw DomainError("agent degrees of freedom must be >= 1");
  }
  if (kernel.kind == KernelKind::power_law && !(kernel.beta >= 0.0))
    throw DomainError("kernel beta must be >= 0");
}

double ModelParams::gamma_star(std::size_t agent) const {
  return agents.at(agent).mass * c * c / (k_B * T_star);
}

double ModelParams::kappa(std::size_t agent) const {
  // (D+2)/(2 gamma*) = (D+2) k_B T* / (2 m c^2)
  const auto& a = agents.at(agent);
  return (a.dof + 2.0) * k_B * T_star / (2.0 * a.mass * c * c);
}

ModelParams ModelParams::with_c(double new_c) const {
  ModelParams p = *this;
  p.c = new_c;
  return p;
}

ModelParams ModelParams::resized(std::size_t n) const {
  if (agents.size() == n) return *this;
  if (agents.empty()) throw DomainError("resized: empty agent table");
  for (const auto& a : agents)
    if (a.mass != agents.front().mass || a.dof != agents.front().dof)
      throw DomainError("resized: heterogeneous agent table has " +
                        std::to_string(agents.size()) + " entries, need " +
                        std::to_string(n));
  ModelParams p = *this;
  p.agents.assign(n, agents.front());
  return p;
}

ModelParams ModelParams::uniform(std::size_t n, double c, KernelSpec kernel,
                                 double T_star, double k_B, double mass,
                                 double dof) {
  ModelParams p;
  p.c = c;
  p.T_star = T_star;
  p.k_B = k_B;
  p.kernel = kernel;
  p.agents.assign(n, AgentSpec{mass, dof});
  return p;
}

}  // namespace rcs
