#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "golden.hpp"
#include "sgv/error.hpp"
#include "sgv/geometry.hpp"

using namespace sgv::geometry;
constexpr double kPi = std::numbers::pi;

namespace {

Manifold flat(double L, double fiber) {
  ManifoldSpec s;
  s.kind = "flat-torus";
  s.L = L;
  s.fiber = fiber;
  return make_manifold(s);
}

Manifold cosine(double beta, double c = 1.0, double L = 2.0 * kPi, int n = 2) {
  ManifoldSpec s;
  s.kind = "cosine-perturbed";
  s.L = L;
  s.c = c;
  s.beta = beta;
  s.n = n;
  return make_manifold(s);
}

Manifold sphere(double R = 1.0, int n = 2) {
  ManifoldSpec s;
  s.kind = "sine-sphere";
  s.R = R;
  s.n = n;
  return make_manifold(s);
}

}  // namespace

TEST_CASE("make_manifold builds the basic models") {
  const Manifold t = flat(2.0 * kPi, 2.0 * kPi);
  CHECK(t.profile.value(1.234) == 1.0);
  const Manifold s = sphere();
  CHECK(s.profile.length() == doctest::Approx(kPi));
  CHECK(s.profile.value(0.7) == doctest::Approx(std::sin(0.7)).epsilon(1e-15));
  CHECK(s.profile.d1(0.0) == 1.0);
  CHECK(s.profile.d1(kPi) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("invalid profiles are rejected") {
  ManifoldSpec s;
  s.kind = "cosine-perturbed";
  s.c = 1.0;
  s.beta = 1.0;
  CHECK_THROWS_AS(make_manifold(s), sgv::Error);
  try {
    make_manifold(s);
  } catch (const sgv::Error& e) {
    CHECK(e.code() == sgv::ErrorCode::NonPositiveWarp);
  }
  ManifoldSpec tab;
  tab.kind = "tabulated";
  tab.boundary = "pole-closed";
  tab.L = kPi;
  for (int j = 0; j <= 64; ++j) tab.samples.push_back(std::sin(kPi * j / 64.0) + 1e-3);
  try {
    make_manifold(tab);
    FAIL("expected BadPoleClosure");
  } catch (const sgv::Error& e) {
    CHECK(e.code() == sgv::ErrorCode::BadPoleClosure);
  }
  ManifoldSpec neg;
  neg.kind = "flat-torus";
  neg.c = -1.0;
  CHECK_THROWS_AS(make_manifold(neg), sgv::Error);
}

TEST_CASE("ricci_min closed forms") {
  const Manifold s = sphere();
  for (double t : {0.0, 0.3, 1.5, kPi}) CHECK(ricci_min(s, t) == doctest::Approx(1.0).epsilon(1e-12));
  const Manifold s3 = sphere(2.0, 3);
  for (double t : {0.0, 1.0, 2.0 * kPi}) CHECK(ricci_min(s3, t) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ricci_min(flat(1.0, 0.1), 0.4) == 0.0);
  CHECK(ricci_min(cosine(0.1), kPi) == doctest::Approx(-0.1 / 0.9).epsilon(1e-14));
  CHECK(ricci_min(cosine(0.1), 0.0) == doctest::Approx(0.1 / 1.1).epsilon(1e-14));
}

TEST_CASE("tabulated pole-closed sphere uses the smooth pole limit") {
  ManifoldSpec tab;
  tab.kind = "tabulated";
  tab.boundary = "pole-closed";
  tab.L = kPi;
  const int m = 512;
  for (int j = 0; j <= m; ++j) tab.samples.push_back(std::sin(kPi * j / m));
  tab.samples.front() = 0.0;
  tab.samples.back() = 0.0;
  const Manifold s = make_manifold(tab);
  CHECK(ricci_min(s, 1.0) == doctest::Approx(1.0).epsilon(1e-5));
  // The clamped spline has f''(0) != 0 unless the data say otherwise; the
  // curvature then has no limit at the pole.
  if (std::abs(s.profile.d2(0.0)) > 1e-8) {
    CHECK_THROWS_AS(ricci_min(s, 0.0), sgv::Error);
  }
}

TEST_CASE("rho_H is non-negative and vanishes where expected") {
  for (double H : {-1.0, 0.0, 0.5}) {
    for (double v : rho_H_field(cosine(0.1), H, 256).values) CHECK(v >= 0.0);
  }
  for (double v : rho_H_field(flat(1.0, 1.0), 0.0).values) CHECK(v == 0.0);
  for (double v : rho_H_field(sphere(), 0.0).values) CHECK(v == 0.0);
  const auto f = rho_H_field(cosine(0.1), 0.0, 400);
  for (std::size_t i = 0; i < f.t.size(); ++i) {
    const bool neg_cos = std::cos(f.t[i]) < 0.0;
    CHECK((f.values[i] > 0.0) == neg_cos);
  }
}

TEST_CASE("volume closed forms") {
  CHECK(volume(flat(2.0 * kPi, 2.0 * kPi)) == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-12));
  CHECK(volume(sphere()) == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  CHECK(volume(sphere(2.0)) == doctest::Approx(16.0 * kPi).epsilon(1e-12));
  // Round 3-sphere of radius 1: 2 pi^2.
  CHECK(volume(sphere(1.0, 3)) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-12));
}

TEST_CASE("kbar examples and properties") {
  CHECK(kbar(flat(2.0, 1.0), 2.0, 0.0) == 0.0);
  CHECK(kbar(sphere(), 2.0, 1.0) == 0.0);
  CHECK(kbar(cosine(0.05), 2.0, 0.0) == doctest::Approx(golden::kbar_cos005).epsilon(1e-10));
  CHECK_THROWS_AS(kbar(sphere(), 1.0, 0.0), sgv::Error);
  CHECK_THROWS_AS(kbar(sphere(1.0, 4), 2.0, 0.0), sgv::Error);
  // Power-mean monotonicity in p.
  const Manifold m = cosine(0.2);
  double prev = 0.0;
  for (double p : {1.5, 2.0, 3.0, 5.0}) {
    const double k = kbar(m, p, 0.0);
    CHECK(k >= prev);
    prev = k;
  }
  // kbar > 0 exactly when rho_H is positive somewhere.
  CHECK(kbar(sphere(), 2.0, 1.1) > 0.0);
  CHECK(kbar(sphere(), 2.0, 0.9) == 0.0);
}

TEST_CASE("flat torus diameters are exact") {
  const auto d = diameter(flat(2.0, 0.2));
  CHECK(d.lo == d.hi);
  CHECK(d.hi == doctest::Approx(std::sqrt(1.01)).epsilon(1e-14));
  const auto sq = diameter(flat(2.0 * kPi, 2.0 * kPi));
  CHECK(sq.hi == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sq.hi - sq.lo == 0.0);
}

TEST_CASE("sphere diameter bracket contains pi") {
  const auto d = diameter(sphere());
  CHECK(d.lo <= kPi);
  CHECK(d.hi >= kPi);
  CHECK(d.hi - d.lo <= 0.01);
}

TEST_CASE("graph estimator calibration") {
  const auto g = graph_diameter(sphere(), 64);
  CHECK(g.lo <= kPi);
  CHECK(g.hi >= kPi);
  CHECK(g.hi - g.lo < 0.25);
  const Manifold t = flat(2.0 * kPi, 2.0 * kPi);
  const auto gt = graph_diameter(t, 64);
  CHECK(gt.lo <= kPi * std::sqrt(2.0));
  CHECK(gt.hi >= kPi * std::sqrt(2.0));
}

TEST_CASE("perturbed torus diameter bracket is ordered and contains the comparison bounds") {
  const Manifold m = cosine(0.3);
  const auto d = diameter(m);
  CHECK(d.lo <= d.hi);
  CHECK(d.lo >= std::hypot(kPi, kPi * 0.7) - 1e-12);
  CHECK(d.hi <= std::hypot(kPi, kPi * 1.3) + 1e-12);
}

TEST_CASE("geometry report invariants") {
  const auto r = geometry_report(cosine(0.1), 2.0, 0.0, 128);
  CHECK(r.volume > 0.0);
  CHECK(r.kbar > 0.0);
  CHECK(r.diameter_lo <= r.diameter_hi);
  CHECK(r.rho.t.size() == 128);
}
