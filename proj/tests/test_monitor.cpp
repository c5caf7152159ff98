#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "shapeservo/monitor.hpp"

using namespace shapeservo;
using namespace shapeservo::monitor;

TEST_CASE("lyapunov value examples") {
  SUBCASE("all zeros") {
    const auto s = lyapunov(VectorX::Zero(3), VectorX::Zero(3), 0, 0, 0, 0);
    CHECK(s.v_total == 0.0);
  }
  SUBCASE("unit sigma1") {
    VectorX sigma1 = VectorX::Zero(3);
    sigma1[0] = 1.0;
    const auto s = lyapunov(sigma1, VectorX::Zero(3), 0, 0, 0, 0);
    CHECK(s.v1 == 0.5);
    CHECK(s.v_total == 0.5);
  }
  SUBCASE("eta mismatch term") {
    const auto s = lyapunov(VectorX::Zero(2), VectorX::Zero(2), 0.25, 0.0,
                            1.0, 0.0);
    CHECK(s.v_total == doctest::Approx(0.28125).epsilon(1e-15));
  }
  SUBCASE("nonnegative for random inputs") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
      VectorX s1(2), s2(2);
      s1 << uni(rng), uni(rng);
      s2 << uni(rng), uni(rng);
      const auto s = lyapunov(s1, s2, std::abs(uni(rng)), std::abs(uni(rng)),
                              std::abs(uni(rng)), std::abs(uni(rng)));
      CHECK(s.v_total >= 0.0);
    }
  }
  CHECK_THROWS(lyapunov(VectorX::Zero(1), VectorX::Zero(1), 0, 0, -1.0, 0));
}

TEST_CASE("uub bounds") {
  SUBCASE("a = min(2, gamma1, gamma2)") {
    CHECK(uub_bounds(2.0, 2.0, 0.1, 0.1, 1.0, 1.0).a == 2.0);
    CHECK(uub_bounds(0.5, 3.0, 0.1, 0.1, 1.0, 1.0).a == 0.5);
    CHECK(uub_bounds(5.0, 4.0, 0.1, 0.1, 1.0, 1.0).a == 2.0);
  }
  SUBCASE("b expression") {
    const auto b = uub_bounds(2.0, 2.0, 0.1, 0.1, 1.0, 1.0);
    CHECK(b.b == doctest::Approx(1.0 + 1.0 + 0.2785 * 0.2).epsilon(1e-15));
    CHECK(b.b == doctest::Approx(2.0557).epsilon(1e-12));
    CHECK(b.ball == doctest::Approx(b.b / b.a).epsilon(1e-15));
  }
  CHECK_THROWS(uub_bounds(0.0, 1.0, 0.1, 0.1, 1.0, 1.0));
}

TEST_CASE("check_decrease") {
  UubBounds bounds;
  bounds.a = 1.0;
  bounds.b = 0.5;
  bounds.ball = 0.5;
  const double dt = 1e-3;

  SUBCASE("constant zero V never violates when b > 0") {
    std::vector<LyapunovSample> samples(100);
    const auto rep = check_decrease(samples, bounds, dt, 0.0);
    CHECK(rep.violations == 0);
  }

  SUBCASE("exact comparison-ODE solution stays within tolerance") {
    // V(t) = V0 exp(-a t) + b/a solves dV/dt = -aV + b
    const double v0 = 3.0;
    std::vector<LyapunovSample> samples;
    for (int k = 0; k <= 2000; ++k) {
      LyapunovSample s;
      s.t = k * dt;
      s.v_total = v0 * std::exp(-bounds.a * s.t) + bounds.b / bounds.a;
      samples.push_back(s);
    }
    const double tol = bounds.a * bounds.a * v0 * dt;  // discretization bound
    const auto rep = check_decrease(samples, bounds, dt, tol);
    CHECK(rep.violations == 0);
  }

  SUBCASE("adversarial rising sequence violates everywhere") {
    std::vector<LyapunovSample> samples;
    for (int k = 0; k < 50; ++k) {
      LyapunovSample s;
      s.t = k * dt;
      s.v_total = k * dt * (bounds.b + 10.0);  // dV/dt = b + 10 > -aV + b
      samples.push_back(s);
    }
    const auto rep = check_decrease(samples, bounds, dt, 0.0);
    CHECK(rep.violation_fraction == 1.0);
    CHECK(rep.worst_margin > 0.0);
  }

  SUBCASE("fewer than two samples is an error") {
    std::vector<LyapunovSample> one(1);
    CHECK_THROWS(check_decrease(one, bounds, dt, 0.0));
  }
}

TEST_CASE("Young's inequality holds on 1000 random pairs") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> uni(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double eta = uni(rng);
    const double eta_hat = uni(rng);
    const double eta_tilde = eta - eta_hat;
    // eta_tilde*eta_hat <= eta^2/2 - eta_tilde^2/2 (gap is eta_hat^2/2)
    CHECK(eta_tilde * eta_hat <=
          0.5 * eta * eta - 0.5 * eta_tilde * eta_tilde + 1e-12);
  }
}

TEST_CASE("Cauchy-Schwarz diagnostic: sigma^T d <= |sigma| * eta_ref") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double eta_ref = 0.0;
  std::vector<std::pair<VectorX, VectorX>> samples;
  for (int i = 0; i < 300; ++i) {
    VectorX sigma(3), d(3);
    for (int k = 0; k < 3; ++k) {
      sigma[k] = uni(rng);
      d[k] = uni(rng);
    }
    eta_ref = std::max(eta_ref, d.norm());  // running supremum
    samples.emplace_back(sigma, d);
  }
  for (const auto& [sigma, d] : samples) {
    CHECK(sigma.dot(d) <= sigma.norm() * eta_ref + 1e-12);
  }
}
