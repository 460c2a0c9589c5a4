#pragma once

// Kinetic model at the level of empirical measures. An empirical initial
// measure is transported by the characteristic flow, which is the N-particle
// relativistic system itself, so a "kinetic" run is a particle run on a
// sampled cloud. Distances between empirical measures are exact 1-Wasserstein
// distances computed by optimal assignment.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcslab/classical_limit.hpp"
#include "rcslab/dynamics.hpp"
#include "rcslab/integrator.hpp"
#include "rcslab/regression.hpp"

namespace rcs {

enum class MeasureKind { uniform_box, gaussian_truncated, two_cluster };

std::string to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(const std::string& name);

/// Compactly supported initial measure.
///  uniform_box:        x ~ U[-x_scale, x_scale]^3, w ~ U[-w_scale, w_scale]^3
///  gaussian_truncated: componentwise N(0, scale^2) rejected outside `truncation` sigmas
///  two_cluster:        uniform boxes centred at +-separation/2 along the first
///                      axis; the two clusters get opposite w offsets of w_scale
struct MeasureSpec {
  MeasureKind kind = MeasureKind::uniform_box;
  double x_scale = 0.5;
  double w_scale = 0.02;
  double separation = 2.0;
  double truncation = 3.0;
};

using Point6 = std::array<double, 6>;

/// Uniform-weight atoms (x || w) in R^6.
struct PointCloud6D {
  std::vector<Point6> points;
  std::size_t size() const { return points.size(); }
};

PointCloud6D to_cloud(const EnsembleState& state);
EnsembleState to_state(const PointCloud6D& cloud, double t = 0.0);

struct SampledCloud {
  PointCloud6D cloud;   // zero-mean in w
  EnsembleState state;  // same data as an ensemble at t = 0
  double Dx0 = 0.0;
  double Dw0 = 0.0;
};

SampledCloud sample_cloud(const MeasureSpec& spec, std::size_t n, std::uint64_t seed);

struct TransportPlan {
  std::vector<std::size_t> permutation;  // atom a of A is sent to atom permutation[a] of B
  double cost = 0.0;                     // (1/N) sum_a |A_a - B_perm(a)|
};

struct W1Result {
  double distance = 0.0;
  TransportPlan plan;
};

/// Exact W1 between equal-size uniform empirical measures (assignment problem
/// with Euclidean cost in R^6). Throws on unequal sizes or N > kMaxAtoms.
W1Result wasserstein1_exact(const PointCloud6D& a, const PointCloud6D& b);

/// Exact W1 between uniform empirical measures of sizes n and m: both are
/// replicated to lcm(n, m) atoms, which represents the same measures.
double wasserstein1_uniform(const PointCloud6D& a, const PointCloud6D& b);

inline constexpr std::size_t kMaxAtoms = 512;

/// sqrt(Delta^c) at the given sample: the cost of the diagonal coupling in W2,
/// hence an upper bound on W2 and W1.
double wasserstein2_coupling_bound(const Trajectory& relativistic, const Trajectory& classical,
                                   std::size_t sample);

struct KineticRun {
  double c = 0.0;
  double sup_w1 = 0.0;
  double sup_coupling = 0.0;          // sup_t sqrt(Delta^c)
  double max_gap = 0.0;               // max_t (W1 - sqrt(Delta^c)), <= 1e-12 expected
  bool coupling_bound_holds = true;
  double lambda_cert = 0.0;
  double Dx_inf = 0.0;
  bool flocking_ok = true;            // Dx < Dx_inf and Dw decay per the kinetic estimate
  RunHealth health_relativistic;
  RunHealth health_classical;
};

struct KineticScanResult {
  std::vector<double> c_values;
  std::vector<double> sup_w1;
  std::optional<LineFit> fit;
  double t_end = 0.0;
  double Dx0 = 0.0;
  double Dw0 = 0.0;
  std::vector<KineticRun> runs;
};

struct KineticScanOptions {
  Model relativistic_side = Model::rcs;
  /// Optional W1-scale perturbation of the relativistic initial cloud:
  /// Delta^c(0) = (K2 c^-2)^2, so the initial coupling cost is K2 c^-2.
  double K2 = 0.0;
  bool extend_t_end = true;
};

/// For each c: relativistic and classical particle flows from the same sampled
/// cloud; sup over samples of exact W1 between the two empirical measures;
/// log-log slope against c.
KineticScanResult kinetic_limit_scan(const MeasureSpec& spec, std::size_t n,
                                     const std::vector<double>& c_values,
                                     const ModelParams& params_template,
                                     const SimConfig& config, std::uint64_t seed,
                                     const KineticScanOptions& options = {});

/// sup over matched samples of W1 between the empirical flows started from
/// two clouds (sizes may differ).
double flow_distance(const PointCloud6D& a, const PointCloud6D& b,
                     const ModelParams& params_template, const SimConfig& config);

struct MeanfieldScanResult {
  std::vector<std::size_t> n_values;
  std::vector<double> sup_w1;   // sup_t W1(mu^N_t, mu^{2N}_t), one per N
  bool decreasing_trend = false;  // last entry strictly below the first
  bool monotone = false;          // every entry below its predecessor
};

/// For each N: an N-cloud and an independent 2N-cloud from the same spec
/// (fresh seeds derived from `seed`), both flowed with config.model.
MeanfieldScanResult meanfield_convergence_scan(const MeasureSpec& spec,
                                               const std::vector<std::size_t>& n_values,
                                               const ModelParams& params_template,
                                               const SimConfig& config, std::uint64_t seed);

/// splitmix64 mix of a base seed with a stream index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace rcs
