#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgv/spline.hpp"

namespace sgv::geometry {

enum class ProfileKind { Constant, CosinePerturbed, SineSphere, Tabulated };
enum class Boundary { Periodic, PoleClosed };

std::string to_string(ProfileKind kind);
std::string to_string(Boundary boundary);

// Warp function f on [0, L] of a metric dt^2 + f(t)^2 g_fiber.
class WarpProfile {
 public:
  // f = c
  static WarpProfile constant(double length, double c);
  // f = c (1 + beta cos(2 pi t / L))
  static WarpProfile cosine_perturbed(double length, double c, double beta);
  // f = R sin(t / R) on [0, pi R]
  static WarpProfile sine_sphere(double radius);
  // Uniform samples f(j L / m), j = 0..m, interpolated by a cubic spline.
  // Pole-closed tables are clamped to f'(0) = 1, f'(L) = -1.
  static WarpProfile tabulated(double length, std::vector<double> samples, Boundary boundary);

  ProfileKind kind() const noexcept { return kind_; }
  Boundary boundary() const noexcept { return boundary_; }
  double length() const noexcept { return length_; }
  double c() const noexcept { return c_; }
  double beta() const noexcept { return beta_; }
  double radius() const noexcept { return c_; }
  std::span<const double> samples() const;

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  double d3(double t) const;
  // f''/f and (1 - f'^2)/f^2, with exact forms where f vanishes analytically.
  double second_over_value(double t) const;
  double tangential_term(double t) const;

  // Points where the profile is only piecewise smooth (spline knots).
  std::vector<double> breakpoints() const;
  // Extremes of f over the closed interval (dense sampling for splines).
  double max_value() const;
  double min_value() const;

  bool is_pole(double t) const;

 private:
  ProfileKind kind_ = ProfileKind::Constant;
  Boundary boundary_ = Boundary::Periodic;
  double length_ = 0.0;
  double c_ = 1.0;
  double beta_ = 0.0;
  std::optional<CubicSpline> spline_;
};

struct Manifold {
  WarpProfile profile;
  int n = 2;
  std::string id;

  // Circumference of the torus fiber, 2 pi times the mean warp.
  double fiber_scale() const;
};

// Parameters accepted by make_manifold; unused fields are ignored per kind.
struct ManifoldSpec {
  std::string kind = "flat-torus";  // flat-torus | cosine-perturbed | sine-sphere | tabulated
  int n = 2;
  double L = 2.0 * 3.14159265358979323846;
  std::optional<double> fiber;  // circumference, sets c = fiber / (2 pi)
  std::optional<double> c;
  double beta = 0.0;
  double R = 1.0;
  std::vector<double> samples;
  std::string boundary = "periodic";
  std::string id;
};

Manifold make_manifold(const ManifoldSpec& spec);
// Checks positivity and closure conditions; throws on failure.
void validate(const Manifold& m);

double ricci_min(const Manifold& m, double t);

struct SampledField {
  std::vector<double> t;
  std::vector<double> values;
};

// Midpoint samples of a field on [0, L].
SampledField rho_field(const Manifold& m, std::size_t samples = 512);
SampledField rho_H_field(const Manifold& m, double H, std::size_t samples = 512);
double rho_H(const Manifold& m, double H, double t);

double fiber_volume(int n);
double volume(const Manifold& m);
double kbar(const Manifold& m, double p, double H);

struct DiameterBracket {
  double lo = 0.0;
  double hi = 0.0;
  std::string method;
  bool converged = true;
  std::size_t grid_t = 0;
  std::size_t grid_theta = 0;
};

struct DiameterOptions {
  double tol = 0.01;
  std::size_t base_grid = 32;
  int max_refine = 2;
};

// Stencil anisotropy allowance of the 16-neighbor graph metric.
inline constexpr double kStencilKappa = 0.03;

DiameterBracket diameter(const Manifold& m, const DiameterOptions& opts = {});

// Grid-graph estimate alone (n = 2): hi = max graph distance plus a cell
// correction, lo = raw max / (1 + kappa).
DiameterBracket graph_diameter(const Manifold& m, std::size_t nt, std::size_t ntheta = 0);

struct GeometryReport {
  SampledField rho;
  SampledField rho_H;
  double kbar = 0.0;
  double volume = 0.0;
  double diameter_lo = 0.0;
  double diameter_hi = 0.0;
  double p = 2.0;
  double H = 0.0;
};

GeometryReport geometry_report(const Manifold& m, double p, double H, std::size_t samples = 512,
                               const DiameterOptions& opts = {});

}  // namespace sgv::geometry
