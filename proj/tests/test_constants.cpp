#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "golden.hpp"
#include "sgv/constants.hpp"
#include "sgv/error.hpp"

using namespace sgv::constants;
constexpr double kPi = std::numbers::pi;

TEST_CASE("gradient constants at delta = 0.01, sigma = 0") {
  const auto g = gradient_constants(0.01, 0.0, 1.0);
  CHECK(g.A == doctest::Approx(golden::A_001).epsilon(1e-15));
  CHECK(g.B == doctest::Approx(golden::B_001).epsilon(1e-15));
  CHECK(g.C1 == doctest::Approx(golden::C1_001).epsilon(1e-14));
  CHECK(g.C2 == 0.0);
  CHECK(g.b == g.C1);
  CHECK(g.alpha == doctest::Approx(golden::alpha_001).epsilon(1e-14));
  CHECK(std::abs(g.alpha - 0.65926) <= 1e-4);
}

TEST_CASE("gradient constants: small delta limit and golden ledger") {
  const auto g = gradient_constants(1e-10, 0.0, 1.0);
  CHECK(g.C1 == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(g.alpha == doctest::Approx(1.0).epsilon(1e-4));
  const auto l = gradient_constants(0.1, 0.001, 0.01);
  CHECK(l.tau == golden::ledger01::tau);
  CHECK(l.A == doctest::Approx(golden::ledger01::A).epsilon(1e-15));
  CHECK(l.B == doctest::Approx(golden::ledger01::B).epsilon(1e-15));
  CHECK(l.z_tilde == doctest::Approx(golden::ledger01::z_tilde).epsilon(1e-14));
  CHECK(l.C1 == doctest::Approx(golden::ledger01::C1).epsilon(1e-14));
  CHECK(l.C2 == doctest::Approx(golden::ledger01::C2).epsilon(1e-13));
  CHECK(l.b == doctest::Approx(golden::ledger01::b).epsilon(1e-14));
  CHECK(l.alpha == doctest::Approx(golden::ledger01::alpha).epsilon(1e-14));
  CHECK(l.C2 > 0.0);
  CHECK(l.b > l.C1);
  CHECK_THROWS_AS(gradient_constants(0.17, 0.0, 1.0), sgv::Error);
}

TEST_CASE("alpha increases as delta decreases") {
  double prev = 0.0;
  for (double delta : {0.15, 0.1, 0.05, 0.01, 1e-3, 1e-4}) {
    const double a = gradient_constants(delta, 0.0, 1.0).alpha;
    CHECK(a > prev);
    CHECK(a < 1.0);
    prev = a;
  }
}

TEST_CASE("Moser constant") {
  CHECK(moser_constant(1.0, 2.0, 2, 1.0) == doctest::Approx(golden::moser_n2p2).epsilon(1e-11));
  CHECK(moser_constant(1.2, 2.0, 2, 1.0) == doctest::Approx(golden::moser_n2p2_cs1p2).epsilon(1e-11));
  CHECK(moser_constant(1.0, 2.0, 2, 1.0) >= golden::moser_n2p2);
  CHECK(moser_constant(0.01, 3.0, 3, 1.0) > 1.0);
  const double a = moser_constant(1.0, 2.0, 2, 1.0, 1e-8);
  const double b = moser_constant(1.0, 2.0, 2, 1.0, 2e-8);
  CHECK(std::abs(a - b) / a < 1e-8);
  double prev = 0.0;
  for (double psi : {1.0, 1.1, 2.0, 5.0}) {
    const double v = moser_constant(1.3, 2.5, 3, psi);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(moser_constant(2.0, 2.5, 3, 1.5) >= moser_constant(1.0, 2.5, 3, 1.5));
  CHECK_THROWS_AS(moser_constant(1.0, 1.0, 2, 1.0), sgv::Error);
}

TEST_CASE("epsilon_max worked example") {
  LedgerInput in;
  in.n = 2;
  in.p = 2.0;
  in.D = kPi;
  in.delta = 0.1;
  in.C_s = 10.0;
  in.Lambda_rough = 0.01;
  const auto e = epsilon_max(in);
  CHECK(e.B_pn == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
  const double t1 = std::pow(std::log(9.0 / 8.0) / (std::sqrt(1.5) * kPi), 2);
  CHECK(e.terms[0] == doctest::Approx(t1).epsilon(1e-10));
  CHECK(e.terms[0] == doctest::Approx(golden::term1_n2p2_pi).epsilon(1e-10));
  CHECK(e.terms[1] == doctest::Approx(0.1 / (12.0 * 100.0 * 3.2)).epsilon(1e-14));
  CHECK(e.K1 == doctest::Approx(golden::K1_001_01).epsilon(1e-14));
  CHECK(e.C3 == doctest::Approx(golden::C3_01).epsilon(1e-13));
  CHECK(e.A_moser > 1.0);
  for (double t : e.terms) CHECK(t > 0.0);
  CHECK(e.eps_max == *std::min_element(e.terms.begin(), e.terms.end()));
  // K2 consistency: 6 (tau - 1) equals (9 + 6 delta) / delta.
  const double tau = (3.0 + 4.0 * 0.1) / 0.2;
  CHECK(std::abs(6.0 * (tau - 1.0) - (9.0 + 0.6) / 0.1) <= 1e-13);
  CHECK(e.K2 == doctest::Approx(e.A_moser * (e.K1 + 96.0)).epsilon(1e-14));
}

TEST_CASE("epsilon refinement is self-consistent") {
  LedgerInput in;
  in.D = 4.0;
  in.delta = 0.05;
  in.C_s = 1.2;
  in.Lambda_rough = 0.5;
  const auto e = epsilon_max(in);
  // Re-running the Moser bound at the final eps can only enlarge terms 3-4.
  LedgerInput again = in;
  again.psi_norm = 1.0 + (9.0 + 6.0 * in.delta) / in.delta * e.eps_max;
  const auto f = epsilon_max(again);
  CHECK(f.terms[2] >= e.terms[2]);
  CHECK(f.terms[3] >= e.terms[3]);
  CHECK(e.eps_max <= std::min({f.terms[0], f.terms[1], f.terms[2], f.terms[3]}));
}

TEST_CASE("Gallot feasibility") {
  CHECK(gallot_feasible(0.0, 2, 2.0, kPi).feasible);
  const double t1 = gallot_feasible(0.0, 2, 2.0, kPi).rhs;
  const auto at = gallot_feasible(t1, 2, 2.0, kPi);
  CHECK(at.feasible);
  CHECK(at.margin >= 0.0);
  CHECK_FALSE(gallot_feasible(10.0 * t1, 2, 2.0, kPi).feasible);
  LedgerInput in;
  in.n = 3;
  in.p = 2.5;
  in.D = 2.0;
  const auto e = epsilon_max(in);
  CHECK(gallot_feasible(e.terms[0], 3, 2.5, 2.0).feasible);
}

TEST_CASE("delta_for_alpha") {
  LedgerInput in;
  in.D = kPi;
  const auto r = delta_for_alpha(0.5, in, true);
  CHECK(r.delta == doctest::Approx(golden::delta_alpha_half).epsilon(1e-10));
  CHECK(r.alpha >= 0.5);
  CHECK(r.next_grid_alpha < 0.5);
  CHECK(r.next_grid_delta > r.delta);
  const auto small = delta_for_alpha(1e-3, in, true);
  CHECK(small.delta > 0.9 * delta_max());
  in.C_s = 10.0;
  in.Lambda_rough = 0.01;
  CHECK_THROWS_AS(delta_for_alpha(0.999999, in), sgv::Error);
  const auto with_sigma = delta_for_alpha(0.5, in);
  const auto g = gradient_constants(with_sigma.delta, with_sigma.sigma, in.Lambda_rough);
  CHECK(g.alpha >= 0.5);
}

TEST_CASE("reference bounds") {
  const auto r = reference_bounds(2, 0.0, 2.0, 0.5);
  CHECK(r.shi_zhang == doctest::Approx(r.zhong_yang).epsilon(1e-15));
  CHECK_FALSE(r.lichnerowicz.has_value());
  CHECK_FALSE(r.yang.has_value());
  CHECK(*reference_bounds(2, 1.0, 2.0, 0.5).lichnerowicz == 2.0);
  CHECK(*reference_bounds(2, -1.0, 1.0, 0.5).yang == doctest::Approx(kPi * kPi * std::exp(-std::sqrt(2.0))).epsilon(1e-14));
  CHECK_THROWS_AS(reference_bounds(2, 0.0, 1.0, 1.0), sgv::Error);
}
