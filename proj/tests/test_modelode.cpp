#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "golden.hpp"
#include "sgv/error.hpp"
#include "sgv/modelode.hpp"

using namespace sgv::modelode;
constexpr double kPi = std::numbers::pi;

TEST_CASE("z_eval closed-form values") {
  const auto v = z_eval(0.0, 1.0);
  CHECK(v.z == 0.0);
  CHECK(v.d1 == doctest::Approx(-1.0 + 4.0 / kPi).epsilon(1e-15));
  CHECK(v.d2 == 0.0);
  CHECK(std::abs(z(1.0, 1.1)) < 1e-15);
  CHECK(std::abs(z(-1.0, 1.1)) < 1e-15);
  CHECK(z(1.0 / std::sqrt(2.0), 1.0) == doctest::Approx(golden::z_inv_sqrt2).epsilon(1e-14));
  CHECK(z(1.0 / std::sqrt(2.0), 1.0) == doctest::Approx(0.5 + 1.0 / kPi - 1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(z_second(1.0, 1.1), sgv::Error);
  try {
    z_eval(-1.0, 1.0);
  } catch (const sgv::Error& e) {
    CHECK(e.code() == sgv::ErrorCode::EndpointSecondDerivative);
  }
}

TEST_CASE("Z is odd and linear in eta") {
  for (int i = 0; i <= 200; ++i) {
    const double u = -1.0 + i / 100.0;
    CHECK(std::abs(z(-u, 1.07) + z(u, 1.07)) <= 1e-14);
    CHECK(std::abs(z(u, 1.07) - 1.07 * z(u, 1.0)) <= 1e-14);
  }
}

TEST_CASE("ODE residual vanishes to roundoff") {
  CHECK(ode_residual(0.0, 1.3) == 0.0);
  CHECK(ode_residual(0.9, 1.16) <= 1e-13);
  double worst = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double u = -1.0 + 1e-9 + (2.0 - 2e-9) * i / (n - 1.0);
    worst = std::max(worst, ode_residual(u, 1.05));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("barrier margins are non-negative") {
  const auto m = check_barrier_margins(1.1, 0.9, 1.1, 10000);
  CHECK(m.gradient >= -1e-10);
  CHECK(m.linear >= -1e-10);
  CHECK(m.envelope >= -1e-10);
  for (double eta : {1.0001, 1.05, 1.17}) {
    const auto r = check_barrier_margins(eta, 2.0 - eta, eta, 2001);
    CHECK(r.gradient >= -1e-10);
    CHECK(r.linear >= -1e-10);
    CHECK(r.envelope >= -1e-10);
  }
  CHECK_THROWS_AS(check_barrier_margins(1.1, 0.9, 1.2, 100), sgv::Error);
  try {
    check_barrier_margins(1.1, 0.9, 1.2, 100);
  } catch (const sgv::Error& e) {
    CHECK(e.code() == sgv::ErrorCode::HypothesisViolation);
  }
}

TEST_CASE("barrier endpoint identities") {
  // Linear condition at u = 0 and envelope condition at u = +-1.
  const double eta = 1.1;
  CHECK(2.0 * z(0.0, eta) - 0.0 + 1.0 == 1.0);
  CHECK(std::abs(eta * 0.0 - 2.0 * std::abs(z(1.0, eta))) < 1e-15);
}

TEST_CASE("z_sup location and value") {
  const auto s = z_sup(1.0);
  CHECK(s.u_star == doctest::Approx(golden::u_star).epsilon(1e-14));
  CHECK(s.z_tilde == doctest::Approx(golden::z_tilde_1).epsilon(1e-14));
  CHECK(std::abs(s.z_tilde - 0.115352) <= 5e-4);
  CHECK(std::abs(z_prime(s.u_star, 1.0)) <= 1e-13);
  CHECK(z_second(s.u_star, 1.0) < 0.0);
  CHECK(z_sup(2.0).z_tilde == doctest::Approx(2.0 * s.z_tilde).epsilon(1e-15));
  for (int i = 1; i <= 200; ++i) {
    const double eta = 1.0 + 0.001 * i;
    CHECK(z_sup(eta).z_tilde / eta <= 0.116);
  }
}

TEST_CASE("sharpness integral") {
  CHECK(sharpness_integral(0.0, 3.0, 1.1) == kPi);
  CHECK(sharpness_integral(0.5, 1.5, 1.1) == doctest::Approx(golden::sharp_05_15_11).epsilon(1e-12));
  CHECK(sharpness_integral(0.99, 1.1, 1.1) == doctest::Approx(golden::sharp_099_11_11).epsilon(1e-11));
  CHECK(sharpness_integral(0.99, 1.1, 1.1) >= kPi);
  for (double a : {0.1, 0.5, 0.9, 0.999})
    for (double b : {1.1, 1.5, 4.0}) CHECK(sharpness_integral(a, b, 1.1) >= kPi - 1e-9);
  CHECK_THROWS_AS(sharpness_integral(0.99, 0.5, 1.1), sgv::Error);
  try {
    sharpness_integral(0.99, 0.5, 1.1);
  } catch (const sgv::Error& e) {
    CHECK(e.code() == sgv::ErrorCode::RatioOutOfRange);
  }
}

TEST_CASE("ratio q tends to a eta / b at x -> 1") {
  const double a = 0.7, b = 1.3, eta = 1.1;
  double prev_gap = 1.0;
  for (int k = 3; k <= 8; ++k) {
    const double q = sharpness_ratio_q(1.0 - std::pow(10.0, -k), a, b, eta);
    const double gap = std::abs(q - a * eta / b);
    CHECK(q < 1.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-3);
}
