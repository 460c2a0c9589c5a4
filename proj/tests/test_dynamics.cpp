#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Geometry>

#include "rcslab/dynamics.hpp"
#include "rcslab/regression.hpp"
#include "rcslab/relativistic.hpp"
#include "support.hpp"

using namespace rcs;
using testing::reference_params;

TEST_CASE("kernel") {
  const KernelSpec pl{KernelKind::power_law, 2.0};
  const KernelSpec cst{KernelKind::constant, 0.0};
  CHECK(kernel_eval(pl, 0.0) == 1.0);
  CHECK(kernel_eval(cst, 0.0) == 1.0);
  CHECK(kernel_eval(pl, 1.0) == 0.5);
  CHECK(kernel_eval(KernelSpec{KernelKind::power_law, 1.0}, 1.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(kernel_eval(cst, 123.0) == 1.0);
  double prev = 1.0;
  for (int i = 1; i <= 100; ++i) {
    const double v = kernel_eval(pl, 0.1 * i);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(kernel_eval(pl, -1e-3), DomainError);
  CHECK(kernel_kind_from_string("constant") == KernelKind::constant);
  CHECK_THROWS(kernel_kind_from_string("gaussian"));
}

TEST_CASE("single agent right-hand sides") {
  const ModelParams p = reference_params(1);
  EnsembleState s;
  s.x = {Vec3(1, 2, 3)};
  s.w = {Vec3(3, 0, 4)};
  const Derivative r = rcs_rhs(s, p);
  CHECK(r.dw[0].norm() == 0.0);
  CHECK((r.dx[0] - v_from_w(s.w[0], p, 0)).norm() < 1e-15);
  const Derivative c = cs_rhs(s, p);
  CHECK(c.dw[0].norm() == 0.0);
  CHECK((c.dx[0] - s.w[0]).norm() == 0.0);
}

TEST_CASE("two-body right-hand sides") {
  SUBCASE("relativistic antisymmetric pair") {
    const ModelParams p = reference_params(2);
    const double w = 6.83224706813212;  // Gamma = 1.2
    EnsembleState s;
    s.x = {Vec3(0.5, 0, 0), Vec3(-0.5, 0, 0)};
    s.w = {Vec3(w, 0, 0), Vec3(-w, 0, 0)};
    const Derivative r = rcs_rhs(s, p);
    // dw_1 = phi(1)/(2 T*) (v_2 - v_1) = -0.5 v_1
    CHECK(r.dw[0][0] == doctest::Approx(-0.5 * 5.52770798392567).epsilon(1e-13));
    CHECK(r.dw[1][0] == doctest::Approx(0.5 * 5.52770798392567).epsilon(1e-13));
    CHECK(r.dw[0].tail<2>().norm() == 0.0);
  }

  SUBCASE("classical pair with constant kernel") {
    const ModelParams p = reference_params(2, KernelSpec{KernelKind::constant, 0.0});
    EnsembleState s;
    s.x = {Vec3(0, 0, 0), Vec3(1, 1, 1)};
    s.w = {Vec3(1, 0, 0), Vec3(-1, 0, 0)};
    const Derivative c = cs_rhs(s, p);
    CHECK((c.dw[0] - Vec3(-1, 0, 0)).norm() < 1e-15);
    CHECK((c.dw[1] - Vec3(1, 0, 0)).norm() < 1e-15);
  }

  SUBCASE("consensus fixed point") {
    const ModelParams p = reference_params(3);
    EnsembleState s;
    s.x = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 2, 0)};
    s.w.assign(3, Vec3::Zero());
    for (const auto& d : {cs_rhs(s, p), rcs_rhs(s, p)}) {
      for (int a = 0; a < 3; ++a) {
        CHECK(d.dw[a].norm() == 0.0);
        CHECK(d.dx[a].norm() == 0.0);
      }
    }
  }
}

TEST_CASE("shape mismatch is rejected") {
  const ModelParams p = reference_params(3);
  EnsembleState s;
  s.x = {Vec3::Zero(), Vec3::Zero()};
  s.w = {Vec3::Zero(), Vec3::Zero()};
  CHECK_THROWS(rcs_rhs(s, p));
}

TEST_CASE("momentum sum of the right-hand sides vanishes") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 15;
    const ModelParams p = reference_params(n);
    const EnsembleState s = testing::random_state(rng, n, 3.0, 5.0);
    for (Model m : {Model::rcs, Model::cs}) {
      const Derivative d = model_rhs(m, s, p);
      Vec3 sum = Vec3::Zero();
      double mx = 0.0;
      for (const auto& v : d.dw) {
        sum += v;
        mx = std::max(mx, v.norm());
      }
      CHECK(sum.norm() <= 1e-12 * static_cast<double>(n) * mx + 1e-300);
    }
  }
}

TEST_CASE("relativistic right-hand side approaches the classical one like c^-2") {
  std::mt19937_64 rng(22);
  const EnsembleState s = testing::random_state(rng, 6, 2.0, 1.0);
  std::vector<double> cs, errs;
  for (double c : {1e2, 1e3, 1e4}) {
    const ModelParams p = ModelParams::uniform(6, c);
    const Derivative r = rcs_rhs(s, p), k = cs_rhs(s, p);
    double err = 0.0;
    for (int a = 0; a < 6; ++a) err = std::max(err, (r.dw[a] - k.dw[a]).norm());
    cs.push_back(c);
    errs.push_back(err);
  }
  const LineFit fit = fit_loglog(cs, errs);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(0.1));
}

TEST_CASE("translation and rotation") {
  std::mt19937_64 rng(23);
  const ModelParams p = reference_params(7);
  const EnsembleState s = testing::random_state(rng, 7, 2.0, 4.0);
  const Derivative base = rcs_rhs(s, p);

  EnsembleState shifted = s;
  for (auto& x : shifted.x) x += Vec3(10.0, -3.0, 0.25);
  const Derivative sh = rcs_rhs(shifted, p);
  for (int a = 0; a < 7; ++a) CHECK((sh.dw[a] - base.dw[a]).norm() < 1e-12);

  const Eigen::Matrix3d R =
      Eigen::AngleAxisd(0.7, Vec3(1, 2, -1).normalized()).toRotationMatrix();
  EnsembleState rot = s;
  for (int a = 0; a < 7; ++a) {
    rot.x[a] = R * s.x[a];
    rot.w[a] = R * s.w[a];
  }
  const Derivative rr = rcs_rhs(rot, p);
  for (int a = 0; a < 7; ++a) {
    CHECK((rr.dx[a] - R * base.dx[a]).norm() < 1e-12);
    CHECK((rr.dw[a] - R * base.dw[a]).norm() < 1e-12);
  }
}

TEST_CASE("prepare_initial") {
  const ModelParams p = reference_params(2);
  SUBCASE("symmetric pair unchanged") {
    const auto out = prepare_initial({Vec3(0, 0, 0), Vec3(1, 0, 0)},
                                     {Vec3(1, 2, 3), Vec3(-1, -2, -3)}, InitMode::from_w, p);
    CHECK((out.state.w[0] - Vec3(1, 2, 3)).norm() == 0.0);
    CHECK(out.removed_mean.norm() == 0.0);
  }
  SUBCASE("equal momenta projected to zero") {
    const auto out = prepare_initial({Vec3(0, 0, 0), Vec3(1, 0, 0)},
                                     {Vec3(1, 2, 3), Vec3(1, 2, 3)}, InitMode::from_w, p);
    CHECK(out.state.w[0].norm() == 0.0);
    CHECK(out.state.w[1].norm() == 0.0);
  }
  SUBCASE("velocities converted before projection") {
    const auto out = prepare_initial({Vec3(0, 0, 0), Vec3(1, 0, 0)},
                                     {Vec3(6, 0, 0), Vec3(0, 0, 0)}, InitMode::from_v, p);
    CHECK(out.raw_w[0][0] == doctest::Approx(7.734375));
    CHECK(out.state.w[0][0] == doctest::Approx(7.734375 / 2));
  }
  SUBCASE("random cloud sums to zero") {
    std::mt19937_64 rng(24);
    const ModelParams p8 = reference_params(8);
    const EnsembleState s = testing::random_state(rng, 8, 1.0, 5.0);
    std::vector<Vec3> v;
    for (const auto& w : s.w) v.push_back(w * 0.5);
    const auto out = prepare_initial(s.x, v, InitMode::from_v, p8);
    CHECK(out.state.momentum_sum().norm() < 1e-12);
  }
  SUBCASE("errors") {
    CHECK_THROWS(prepare_initial({}, {}, InitMode::from_w, p));
    CHECK_THROWS(prepare_initial({Vec3::Zero(), Vec3::Zero()}, {Vec3::Zero()}, InitMode::from_w, p));
    CHECK_THROWS_AS(prepare_initial({Vec3::Zero(), Vec3::Zero()},
                                    {Vec3(10, 0, 0), Vec3::Zero()}, InitMode::from_v, p),
                    DomainError);
  }
}
