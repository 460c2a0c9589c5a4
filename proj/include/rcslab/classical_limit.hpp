#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rcslab/diagnostics.hpp"
#include "rcslab/dynamics.hpp"
#include "rcslab/integrator.hpp"
#include "rcslab/regression.hpp"

namespace rcs {

/// Delta^c = (1/N) sum_a (|x_a - x_a^inf|^2 + |w_a - w_a^inf|^2).
/// Throws std::invalid_argument on mismatched N or sample time.
double delta_c(const EnsembleState& relativistic, const EnsembleState& classical);

/// Adds a seeded Gaussian perturbation to x and w, projects the w part to zero
/// sum, and rescales so that delta_c(result, base) = K c^-4.
EnsembleState perturb_initial(const EnsembleState& base, double c, double K,
                              std::uint64_t seed);

/// Thrown by the scans when the flocking hypotheses fail at some c.
class CertificateFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LimitScanOptions {
  /// Model integrated on the "relativistic" side. Model::cs gives the
  /// degenerate cs-vs-cs scan.
  Model relativistic_side = Model::rcs;
  bool keep_series = false;
  /// Extend t_end to at least 10 / lambda_cert(smallest c).
  bool extend_t_end = true;
};

struct LimitRun {
  double c = 0.0;
  double sup_delta = 0.0;
  double delta0 = 0.0;
  double lambda_cert = 0.0;
  double Dx_inf = 0.0;
  RunHealth health_relativistic;
  RunHealth health_classical;
  std::vector<double> t;        // filled when keep_series
  std::vector<double> delta;    // filled when keep_series
};

struct LimitScanResult {
  std::vector<double> c_values;
  std::vector<double> sup_delta;
  std::optional<LineFit> fit;   // absent when fewer than 3 positive sup_delta
  double K = 0.0;
  double t_end = 0.0;
  std::size_t inversions = 0;   // sup_delta[i+1] > 1.05 sup_delta[i]
  std::vector<LimitRun> runs;
};

/// For each c: RCS from perturb_initial(base_init, c, K, config.seed), CS
/// from base_init, on the same time grid; records sup_t Delta^c and fits the
/// log-log slope against c.
LimitScanResult c_scan(const EnsembleState& base_init, const ModelParams& params_template,
                       const SimConfig& config, const std::vector<double>& c_values,
                       double K, const LimitScanOptions& options = {});

}  // namespace rcs
