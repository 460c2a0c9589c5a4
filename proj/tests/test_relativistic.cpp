#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "rcslab/relativistic.hpp"
#include "support.hpp"

using namespace rcs;
using testing::reference_params;

namespace {

// |w| at Gamma = 1.2 for c = 10, gamma* = 100, D = 3 (mpmath, 30 digits).
constexpr double kW12 = 6.83224706813212;

}  // namespace

TEST_CASE("lorentz factor from velocity") {
  const ModelParams p = reference_params();
  CHECK(lorentz_from_v(Vec3::Zero(), p, 0) == 1.0);
  CHECK(lorentz_from_v(Vec3(6, 0, 0), p, 0) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK_THROWS_AS(lorentz_from_v(Vec3(10, 0, 0), p, 0), DomainError);
  CHECK_THROWS_AS(lorentz_from_v(Vec3(11, 0, 0), p, 0), DomainError);
}

TEST_CASE("F of gamma") {
  const ModelParams p = reference_params();
  CHECK(F_of_gamma(1.0, p, 0) == doctest::Approx(1.025).epsilon(1e-15));
  CHECK(F_of_gamma(1.2, p, 0) == doctest::Approx(1.236).epsilon(1e-15));
  const ModelParams big = p.with_c(1e6);
  CHECK(std::abs(F_of_gamma(1.0, big, 0) - 1.0) < 1e-10);
  CHECK_THROWS_AS(F_of_gamma(0.9, p, 0), DomainError);
}

TEST_CASE("gamma from w") {
  const ModelParams p = reference_params();
  CHECK(gamma_from_w(0.0, p, 0) == 1.0);
  CHECK(gamma_from_w(kW12, p, 0) == doctest::Approx(1.2).epsilon(1e-13));
  // the rounded value quoted for this point still inverts to about 1.2
  CHECK(gamma_from_w(6.83234, p, 0) == doctest::Approx(1.2).epsilon(1e-5));
  CHECK(std::abs(gamma_from_w(1.0, p.with_c(1e6), 0) - 1.0) < 1e-10);
  CHECK_THROWS_AS(gamma_from_w(-1.0, p, 0), DomainError);

  SUBCASE("monotone in |w|") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    std::vector<double> ws(2000);
    for (auto& w : ws) w = u(rng);
    std::sort(ws.begin(), ws.end());
    double prev = 1.0;
    for (double w : ws) {
      const double g = gamma_from_w(w, p, 0);
      CHECK(g >= prev);
      prev = g;
    }
  }

  SUBCASE("forward map") {
    for (double g : {1.0 + 1e-12, 1.0 + 1e-6, 1.01, 1.2, 2.0, 10.0, 100.0}) {
      const double kappa = p.kappa(0);
      const double w = p.c * std::sqrt(g * g - 1.0) * (1.0 + kappa * g);
      CHECK(gamma_from_w(w, p, 0) == doctest::Approx(g).epsilon(1e-13));
    }
  }
}

TEST_CASE("v from w and w from v") {
  const ModelParams p = reference_params();
  CHECK(v_from_w(Vec3::Zero(), p, 0).norm() == 0.0);
  CHECK(w_from_v(Vec3::Zero(), p, 0).norm() == 0.0);

  const Vec3 w = kW12 * Vec3(1, 2, 2) / 3.0;
  const Vec3 v = v_from_w(w, p, 0);
  CHECK(v.norm() == doctest::Approx(5.52770798392567).epsilon(1e-13));
  CHECK((v.normalized() - w.normalized()).norm() < 1e-15);

  const Vec3 w6 = w_from_v(Vec3(6, 0, 0), p, 0);
  CHECK(w6[0] == doctest::Approx(7.734375).epsilon(1e-15));
  CHECK(w6[1] == 0.0);
  CHECK(w6[2] == 0.0);

  SUBCASE("w -> v as c grows") {
    const Vec3 vel(0.3, -0.2, 0.1);
    double prev = 1.0;
    for (double c : {1e1, 1e2, 1e3, 1e4}) {
      const double err = (w_from_v(vel, p.with_c(c), 0) - vel).norm();
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-7);
  }
}

TEST_CASE("round trip and subluminality on random momenta") {
  const ModelParams p = reference_params();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 w = testing::random_in_ball(rng, 10.0);
    const Vec3 v = v_from_w(w, p, 0);
    CHECK(v.norm() < p.c);
    const Vec3 back = w_from_v(v, p, 0);
    CHECK((back - w).norm() <= 1e-10 * std::max(w.norm(), 1e-300));
  }
  for (double s : {1e3, 1e6, 1e12}) CHECK(v_from_w(Vec3(s, 0, 0), p, 0).norm() < p.c);
}

TEST_CASE("velocity contraction") {
  const ModelParams p = reference_params();
  const double k = p.c * p.c / (p.c * p.c + 1.0);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 5000; ++i) {
    const Vec3 a = testing::random_in_ball(rng, 20.0);
    const Vec3 b = testing::random_in_ball(rng, 20.0);
    CHECK((v_from_w(a, p, 0) - v_from_w(b, p, 0)).norm() <= k * (a - b).norm() + 1e-9);
  }
}

TEST_CASE("F prime") {
  const ModelParams p = reference_params();
  CHECK(F_prime(1.2, p, 0) == doctest::Approx(0.00412640823413085).epsilon(1e-13));

  // centered difference of F(Gamma(sqrt(s))) in s = |z|^2
  const double s = kW12 * kW12, h = 1e-5;
  auto F_of_s = [&](double ss) { return F_of_gamma(gamma_from_w(std::sqrt(ss), p, 0), p, 0); };
  const double fd = (F_of_s(s + h) - F_of_s(s - h)) / (2.0 * h);
  CHECK(std::abs(fd - F_prime(1.2, p, 0)) <= 1e-6 * F_prime(1.2, p, 0));

  const ModelParams big = p.with_c(1e5);
  CHECK(F_prime(1.0, big, 0) * 2.0 * big.c * big.c == doctest::Approx(1.0).epsilon(1e-8));

  for (int i = 0; i < 100; ++i) CHECK(F_prime(1.0 + 4.0 * i / 99.0, p, 0) > 0.0);
}

TEST_CASE("jacobian A") {
  const ModelParams p = reference_params();
  const double F0 = F_of_gamma(1.0, p, 0);
  CHECK((jacobian_A(Vec3::Zero(), p, 0) - Eigen::Matrix3d::Identity() / F0).norm() < 1e-15);

  SUBCASE("axis aligned") {
    const Vec3 z(kW12, 0, 0);
    const Eigen::Matrix3d A = jacobian_A(z, p, 0);
    const double F = 1.236, Fp = F_prime(1.2, p, 0);
    CHECK(A(0, 0) == doctest::Approx(1.0 / F - 2.0 * kW12 * kW12 * Fp / (F * F)).epsilon(1e-12));
    CHECK(A(1, 1) == doctest::Approx(1.0 / F).epsilon(1e-12));
    CHECK(A(2, 2) == doctest::Approx(1.0 / F).epsilon(1e-12));
    CHECK(std::abs(A(0, 1)) + std::abs(A(0, 2)) + std::abs(A(1, 2)) < 1e-15);
  }

  SUBCASE("finite-difference Jacobian of v_from_w") {
    std::mt19937_64 rng(13);
    const double h = 1e-6;
    for (int i = 0; i < 200; ++i) {
      const Vec3 z = testing::random_in_ball(rng, 5.0);
      Eigen::Matrix3d fd;
      for (int k = 0; k < 3; ++k) {
        Vec3 e = Vec3::Zero();
        e[k] = h;
        fd.col(k) = (v_from_w(z + e, p, 0) - v_from_w(z - e, p, 0)) / (2.0 * h);
      }
      CHECK((fd - jacobian_A(z, p, 0)).cwiseAbs().maxCoeff() < 1e-6);
    }
  }

  SUBCASE("eigenvalues") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 1000; ++i) {
      const Vec3 z = testing::random_in_ball(rng, 7.0);
      const LorentzState st = lorentz_state_from_w(z.norm(), species(p, 0));
      const double F = st.F;
      const double radial = 1.0 / F - 2.0 * z.squaredNorm() * F_prime(st.gamma, p, 0) / (F * F);
      std::vector<double> expect{1.0 / F, 1.0 / F, radial};
      std::sort(expect.begin(), expect.end());
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(jacobian_A(z, p, 0));
      for (int k = 0; k < 3; ++k) CHECK(std::abs(es.eigenvalues()[k] - expect[k]) < 1e-10);
    }
  }
}

TEST_CASE("lambda0") {
  const ModelParams p = reference_params();
  CHECK(lambda0(0.0, p, 0) == doctest::Approx(1.0 / 1.025).epsilon(1e-15));
  CHECK(std::abs(lambda0(5.0, p.with_c(1e6), 0) - 1.0) < 1e-6);
  CHECK(lambda0(7.0, p, 0) <= lambda0(3.0, p, 0));
  CHECK(lambda0(7.0, p, 0) > 0.0);
  CHECK_THROWS(lambda0(-1.0, p, 0));

  SUBCASE("coercivity on random pairs") {
    const double W0 = 7.0;
    const double L0 = lambda0(W0, p, 0);
    std::mt19937_64 rng(15);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
      const Vec3 x = testing::random_in_ball(rng, W0);
      const Vec3 y = testing::random_in_ball(rng, W0);
      const double lhs = (x - y).dot(v_from_w(x, p, 0) - v_from_w(y, p, 0));
      if (lhs < L0 * (x - y).squaredNorm() - 1e-9) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("lambda1") {
  const ModelParams p = reference_params();
  CHECK(lambda1(0.0, p, 0) == doctest::Approx(100.0 * 5.0 / 205.0).epsilon(1e-14));
  CHECK(lambda1(kW12, p, 0) == doctest::Approx(19.0938511326861).epsilon(1e-12));

  const double W = 8.0, L1 = lambda1(W, p, 0);
  std::mt19937_64 rng(16);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 w = testing::random_in_ball(rng, W);
    CHECK((w - v_from_w(w, p, 0)).norm() <= L1 * w.norm() / (p.c * p.c) + 1e-12);
  }
}

TEST_CASE("lambda2") {
  const ModelParams p = reference_params();
  CHECK(lambda2(0.0, p, 0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(lambda2(kW12, p, 0) == doctest::Approx(70.24).epsilon(1e-12));

  // grad_z((1/F - 1) z) = A(z) - I
  const double W = 7.0, bound = lambda2(W, p, 0) / (p.c * p.c);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 z = testing::random_in_ball(rng, W);
    const Eigen::Matrix3d G = jacobian_A(z, p, 0) - Eigen::Matrix3d::Identity();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(G);
    CHECK(es.eigenvalues().cwiseAbs().maxCoeff() <= bound + 1e-9);
  }
}

TEST_CASE("classical limits shrink with c") {
  const ModelParams p = reference_params();
  const Vec3 w(0.6, 0.0, 0.8);
  double prevF = 0, prevG = 0, prevL = 0;
  bool first = true;
  for (double c : {1e1, 1e2, 1e3, 1e4}) {
    const ModelParams q = p.with_c(c);
    const LorentzState st = lorentz_state_from_w(w.norm(), species(q, 0));
    const double dF = st.F - 1.0, dG = st.gamma_minus_one, dL = 1.0 - lambda0(1.0, q, 0);
    if (!first) {
      CHECK(dF <= prevF / 10.0);
      CHECK(dG <= prevG / 10.0);
      CHECK(dL <= prevL / 10.0);
    }
    prevF = dF;
    prevG = dG;
    prevL = dL;
    first = false;
  }
}

TEST_CASE("decay rates and ensemble constants") {
  ModelParams p = reference_params(3);
  const double phi = kernel_eval(p.kernel, 2.0);
  CHECK(particle_decay_rate(2.0, 0.0, p) == doctest::Approx(phi - 2.0 * 2.5 / 100.0));
  p.T_star = 2.0;
  CHECK(kinetic_decay_rate(2.0, 0.1, p) ==
        doctest::Approx(phi - 2.0 * lambda2_ensemble(0.1, p) / 100.0));
  CHECK(particle_decay_rate(2.0, 0.1, p) ==
        doctest::Approx(kinetic_decay_rate(2.0, 0.1, p) / 2.0));

  ModelParams het = reference_params(2);
  het.agents[1].mass = 0.5;  // hotter species: larger kappa
  CHECK(lambda2_ensemble(1.0, het) == doctest::Approx(lambda2(1.0, het, 1)));
  CHECK(lambda0_ensemble(1.0, het) == doctest::Approx(lambda0(1.0, het, 1)));
  CHECK(lambda2(1.0, het, 1) > lambda2(1.0, het, 0));
}
