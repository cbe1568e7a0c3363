#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sgv/geometry.hpp"
#include "sgv/tridiag.hpp"

namespace sgv::spectral {

using geometry::Manifold;

// Flux-form finite differences on the midpoint grid t_i = (i + 1/2) h for the
// fiber-mode-k pencil  -(f^{n-1} u')' + mu_k f^{n-3} u = lambda f^{n-1} u,
// with mu_k = k (k + n - 2) the k-th eigenvalue of the unit (n-1)-sphere.
struct Discretization {
  std::size_t N = 0;
  double h = 0.0;
  int k = 0;
  int n = 2;
  bool periodic = true;
  std::vector<double> t;
  std::vector<double> f;     // warp at the nodes
  std::vector<double> mass;  // f(t_i)^{n-1} h
  std::vector<double> faces; // f(j h)^{n-1}, j = 0..N (zero at poles)
  linalg::SymTridiag stiffness;

  // M^{-1/2} K M^{-1/2}, same spectrum as the pencil (K, M).
  linalg::SymTridiag normalized() const;
  // Discrete Laplacian (k = 0 part): (Delta_h u)_i = -(K0 u)_i / m_i.
  std::vector<double> laplacian(std::span<const double> u) const;
};

double fiber_eigenvalue(int k, int n);

Discretization assemble(const Manifold& m, int k, std::size_t N);

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // unit Euclidean norm
};

// index-th smallest eigenpair of a symmetric tridiagonal matrix. Acyclic
// matrices use Sturm bisection plus inverse iteration; cyclic ones use block
// shift-invert iteration with Rayleigh-Ritz. A non-empty `deflate` (unit
// vector) removes that direction first; only used for cyclic matrices.
EigenPair eigenpair(const linalg::SymTridiag& a, std::size_t index,
                    std::span<const double> deflate = {});

struct SolverOptions {
  std::size_t N0 = 512;
  int levels = 3;  // grids N0, 2 N0, 4 N0, ...
  double order_lo = 1.5;
  double order_hi = 2.5;
};

struct ModeResult {
  int k = 0;
  std::vector<std::pair<std::size_t, double>> history;
  double extrapolated = 0.0;
  double observed_order = 0.0;  // 0 when differences sit at roundoff
};

struct EigenResult {
  double lambda1 = 0.0;  // extrapolated value of the winning mode
  int mode = 0;
  std::vector<std::pair<std::size_t, double>> history;
  double extrapolated = 0.0;
  double observed_order = 0.0;
  std::vector<ModeResult> modes;
  bool degenerate = false;  // another mode within 1e-6 relative

  // Finest-grid data.
  std::vector<double> t;
  std::vector<double> phi;  // raw eigenfunction, physical coordinates
  double grid_lambda = 0.0;
  double rayleigh = 0.0;
  std::vector<double> u;  // normalized: sup 1, inf -1 (interpolated)
  double a = 0.0;
};

ModeResult solve_mode(const Manifold& m, int k, const SolverOptions& opts = {});
EigenResult lambda1(const Manifold& m, const SolverOptions& opts = {});

struct Normalized {
  std::vector<double> u;
  double a = 0.0;
};

struct NormalizeOptions {
  // Take sup and inf from parabolic fits at the extreme samples rather than
  // the samples themselves, so the grid maximum may sit slightly below 1.
  bool refine = false;
  bool periodic = true;
};

// Affine renormalization u = phi / s - a with sup u = 1, inf u = -1. For
// modes k >= 1 the fiber factor is odd, so a = 0 and u = g / max|g|.
Normalized eigenfunction_u(std::span<const double> phi, int mode, const NormalizeOptions& opts = {});
// Refined extremes of the finest-grid eigenfunction.
void eigenfunction_u(EigenResult& r, bool periodic);

struct GroundState {
  double sigma_tilde = 0.0;
  std::vector<double> w;    // positive, mean of w^2 equal to 1
  double w_bar = 0.0;
  std::vector<double> dev;  // w / w_bar - 1, kept to full relative accuracy
  bool polished = false;
};

// Top of the spectrum of Delta + V on fiber-constant functions. V is sampled
// on the grid of `d` (which must be the k = 0 discretization).
GroundState schrodinger_ground(const Discretization& d, std::span<const double> V);

struct JField {
  std::vector<double> J;
  std::vector<double> dev;  // J - 1
};

JField build_J(const GroundState& g, double tau);

// max_i |Delta J - tau |grad J|^2 / J - 2 J rho0 + sigma J| over interior nodes.
double residual_J_equation(const Discretization& d, const JField& J, std::span<const double> rho0,
                           double tau, double sigma);

// Centered first differences (periodic wrap or one-sided at pole cells).
std::vector<double> gradient(const Discretization& d, std::span<const double> u);

}  // namespace sgv::spectral
