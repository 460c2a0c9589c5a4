#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "rcslab/assignment.hpp"
#include "rcslab/meanfield.hpp"
#include "support.hpp"

using namespace rcs;

namespace {

PointCloud6D random_cloud(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PointCloud6D c;
  for (std::size_t i = 0; i < n; ++i) {
    Point6 p;
    for (auto& v : p) v = u(rng);
    c.points.push_back(p);
  }
  return c;
}

Point6 at(double x0) { return Point6{x0, 0, 0, 0, 0, 0}; }

double brute_force(const CostMatrix& cost) {
  std::vector<std::size_t> perm(cost.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = assignment_cost(cost, perm);
  while (std::next_permutation(perm.begin(), perm.end()))
    best = std::min(best, assignment_cost(cost, perm));
  return best;
}

}  // namespace

TEST_CASE("sample_cloud") {
  const SampledCloud one = sample_cloud(MeasureSpec{}, 1, 3);
  CHECK(one.cloud.size() == 1);
  CHECK(one.state.w[0].norm() == 0.0);

  MeasureSpec still;
  still.w_scale = 0.0;
  const SampledCloud s = sample_cloud(still, 16, 4);
  CHECK(s.Dw0 == 0.0);
  for (const auto& w : s.state.w) CHECK(w.norm() == 0.0);

  const SampledCloud a = sample_cloud(MeasureSpec{}, 32, 5), b = sample_cloud(MeasureSpec{}, 32, 5);
  CHECK(a.cloud.points == b.cloud.points);
  CHECK(sample_cloud(MeasureSpec{}, 32, 6).cloud.points != a.cloud.points);
  CHECK(a.state.momentum_sum().norm() < 1e-15);

  for (MeasureKind kind : {MeasureKind::uniform_box, MeasureKind::gaussian_truncated,
                           MeasureKind::two_cluster}) {
    MeasureSpec spec;
    spec.kind = kind;
    const SampledCloud c = sample_cloud(spec, 64, 7);
    CHECK(c.state.momentum_sum().norm() < 1e-14);
    // support bounded by the spec
    const double xr = spec.truncation * spec.x_scale + spec.separation;
    for (const auto& x : c.state.x) CHECK(x.cwiseAbs().maxCoeff() <= xr);
    CHECK(c.Dx0 > 0.0);
    CHECK(measure_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS(sample_cloud(MeasureSpec{}, 0, 1));
  CHECK_THROWS(measure_kind_from_string("disc"));
}

TEST_CASE("cloud conversion round trip") {
  std::mt19937_64 rng(61);
  const EnsembleState s = testing::random_state(rng, 5, 1.0, 1.0);
  const EnsembleState back = to_state(to_cloud(s));
  for (int i = 0; i < 5; ++i) {
    CHECK(back.x[i] == s.x[i]);
    CHECK(back.w[i] == s.w[i]);
  }
}

TEST_CASE("exact W1 examples") {
  std::mt19937_64 rng(62);
  const PointCloud6D A = random_cloud(rng, 7);
  const W1Result self = wasserstein1_exact(A, A);
  CHECK(self.distance == 0.0);
  for (std::size_t i = 0; i < 7; ++i) CHECK(self.plan.permutation[i] == i);

  PointCloud6D p, q;
  p.points = {at(0)};
  q.points = {Point6{0, 3, 0, 0, 0, 0}};
  CHECK(wasserstein1_exact(p, q).distance == 3.0);

  PointCloud6D cross_a, cross_b;
  cross_a.points = {at(0), at(1)};
  cross_b.points = {at(1), at(0)};
  const W1Result cross = wasserstein1_exact(cross_a, cross_b);
  CHECK(cross.distance == 0.0);
  CHECK(cross.plan.permutation == std::vector<std::size_t>{1, 0});

  CHECK_THROWS(wasserstein1_exact(cross_a, p));
}

TEST_CASE("assignment matches brute force") {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const PointCloud6D a = random_cloud(rng, n), b = random_cloud(rng, n);
    CostMatrix cost(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        double s = 0;
        for (int k = 0; k < 6; ++k) s += std::pow(a.points[r][k] - b.points[c][k], 2);
        cost(r, c) = std::sqrt(s);
      }
    const Assignment asg = solve_assignment(cost);
    CHECK(asg.total_cost == brute_force(cost));
    CHECK(std::set<std::size_t>(asg.row_to_col.begin(), asg.row_to_col.end()).size() == n);
  }

  SUBCASE("integer costs with ties") {
    CostMatrix cost(4);
    std::uniform_int_distribution<int> u(0, 3);
    for (int trial = 0; trial < 50; ++trial) {
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) cost(r, c) = u(rng);
      CHECK(solve_assignment(cost).total_cost == brute_force(cost));
    }
  }
}

TEST_CASE("metric axioms") {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const PointCloud6D A = random_cloud(rng, n), B = random_cloud(rng, n), C = random_cloud(rng, n);
    const double ab = wasserstein1_exact(A, B).distance;
    const double ba = wasserstein1_exact(B, A).distance;
    const double bc = wasserstein1_exact(B, C).distance;
    const double ac = wasserstein1_exact(A, C).distance;
    CHECK(wasserstein1_exact(A, A).distance == 0.0);
    CHECK(ab >= 0.0);
    CHECK(std::abs(ab - ba) <= 1e-12);
    CHECK(ac <= ab + bc + 1e-10);
  }
}

TEST_CASE("W1 between clouds of different sizes") {
  std::mt19937_64 rng(65);
  const PointCloud6D A = random_cloud(rng, 4);
  PointCloud6D doubled;
  for (const auto& p : A.points) {
    doubled.points.push_back(p);
    doubled.points.push_back(p);
  }
  CHECK(wasserstein1_uniform(A, doubled) == 0.0);

  PointCloud6D two, three;
  two.points = {at(0), at(1)};
  three.points = {at(0), at(0.5), at(1)};
  // mass 1/6 moves 0.5 and 1/6 moves 0.5
  CHECK(wasserstein1_uniform(two, three) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(wasserstein1_uniform(three, two) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  PointCloud6D big = random_cloud(rng, 300), odd = random_cloud(rng, 7);
  CHECK_THROWS(wasserstein1_uniform(big, odd));
}

TEST_CASE("coupling bound") {
  const SampledCloud cloud = sample_cloud(MeasureSpec{}, 12, 66);
  const ModelParams p = ModelParams::uniform(12, 10.0);
  SimConfig cfg;
  cfg.t_end = 3.0;
  const Trajectory rel = simulate(cloud.state, p, cfg);
  SimConfig cs = cfg;
  cs.model = Model::cs;
  const Trajectory cl = simulate(cloud.state, p, cs);
  CHECK(wasserstein2_coupling_bound(rel, rel, 3) == 0.0);
  for (std::size_t k = 0; k < rel.samples.size(); ++k) {
    const double w1 = wasserstein1_exact(to_cloud(rel.samples[k]), to_cloud(cl.samples[k])).distance;
    CHECK(w1 <= wasserstein2_coupling_bound(rel, cl, k) + 1e-12);
  }
  CHECK_THROWS(wasserstein2_coupling_bound(rel, cl, rel.samples.size()));
}

TEST_CASE("kinetic limit scan") {
  const ModelParams p = ModelParams::uniform(1, 10.0);
  SimConfig cfg;
  cfg.t_end = 10.0;

  SUBCASE("degenerate classical vs classical") {
    KineticScanOptions opt;
    opt.relativistic_side = Model::cs;
    const KineticScanResult r = kinetic_limit_scan(MeasureSpec{}, 16, {10, 20, 40}, p, cfg, 1, opt);
    for (double w : r.sup_w1) CHECK(w == 0.0);
    CHECK_FALSE(r.fit.has_value());
  }

  SUBCASE("rate and bounds") {
    const KineticScanResult r = kinetic_limit_scan(MeasureSpec{}, 16, {10, 20, 40, 80}, p, cfg, 2);
    REQUIRE(r.fit.has_value());
    CHECK(r.fit->slope >= -2.5);
    CHECK(r.fit->slope <= -1.6);
    for (const auto& run : r.runs) {
      CHECK(run.coupling_bound_holds);
      CHECK(run.sup_w1 <= run.sup_coupling + 1e-12);
      CHECK(run.flocking_ok);
      CHECK(run.health_relativistic.max_energy_increase <= 1e-9);
    }
  }

  SUBCASE("perturbed start") {
    KineticScanOptions opt;
    opt.K2 = 1.0;
    const KineticScanResult r = kinetic_limit_scan(MeasureSpec{}, 16, {10, 20, 40}, p, cfg, 3, opt);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(r.sup_w1[i] <= r.runs[i].sup_coupling + 1e-12);
    CHECK(r.sup_w1[2] < r.sup_w1[0]);
  }

  CHECK_THROWS(kinetic_limit_scan(MeasureSpec{}, 16, {10, 20}, p, cfg, 1));
}

TEST_CASE("mean-field scan") {
  const ModelParams p = ModelParams::uniform(1, 10.0);
  SimConfig cfg;
  cfg.t_end = 1.0;
  const SampledCloud a = sample_cloud(MeasureSpec{}, 8, 70);
  CHECK(flow_distance(a.cloud, a.cloud, p, cfg) == 0.0);

  const MeanfieldScanResult r = meanfield_convergence_scan(MeasureSpec{}, {4, 8, 16}, p, cfg, 71);
  CHECK(r.sup_w1.size() == 3);
  for (double d : r.sup_w1) CHECK(d >= 0.0);

  CHECK_THROWS(meanfield_convergence_scan(MeasureSpec{}, {4, 8}, p, cfg, 1));
  CHECK_THROWS(meanfield_convergence_scan(MeasureSpec{}, {8, 4, 16}, p, cfg, 1));
  CHECK_THROWS(meanfield_convergence_scan(MeasureSpec{}, {4, 8, 300}, p, cfg, 1));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}
