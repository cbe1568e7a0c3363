#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sgv/constants.hpp"
#include "sgv/geometry.hpp"
#include "sgv/spectral.hpp"

namespace sgv::verify {

using geometry::Manifold;

struct VerifyOptions {
  spectral::SolverOptions solver;
  geometry::DiameterOptions diameter;
  double C_s = 1.0;           // user supplied
  double Lambda_rough = 1.0;  // user supplied
};

// Grid used by the auxiliary-function checks: the finest eigen-solver grid,
// so that u, J and their differences live on the same nodes.
std::size_t check_grid(const spectral::SolverOptions& solver);

// Ground state of Delta + V with V = 2 (tau - 1) rho0 and the J field built
// from it, all on the k = 0 grid with N cells.
struct AuxiliaryFields {
  double delta = 0.0;
  double tau = 0.0;
  spectral::Discretization d;
  std::vector<double> rho0;
  spectral::GroundState ground;
  double sigma = 0.0;  // sigma_tilde / (tau - 1)
  spectral::JField J;
  double J_deviation = 0.0;
  double residual = 0.0;  // max |J-equation residual|
};

AuxiliaryFields auxiliary_fields(const Manifold& m, double delta, std::size_t N);

struct SigmaCheck {
  double sigma = 0.0;
  double kbar = 0.0;
  double margin = 0.0;  // 4 kbar - sigma
};

SigmaCheck check_sigma_bound(const Manifold& m, double delta, double p, std::size_t N = 2048);

struct JCheck {
  double deviation = 0.0;
  double kbar = 0.0;
  double eps_max = 0.0;
  bool hypothesis_met = false;
};

// Logs a warning (and carries on) when kbar exceeds eps_max for this delta.
JCheck check_J_bounds(const Manifold& m, double delta, double p, const VerifyOptions& opts = {});

struct GradientCheck {
  double max_Q = 0.0;
  double lambda_tilde = 0.0;
  double tolerance = 0.0;  // 1e-6 lambda_tilde
  double worst_t = 0.0;
  bool holds = false;
};

// Q = J |grad u|^2 - lambda_tilde (1 - u^2) - 2 a lambda1 Z(u) on the nodes,
// lambda_tilde = C1 lambda1 + C2. For fiber modes k >= 1, u = g(t) y with y
// the normalized fiber factor, and Q is affine in y^2, so y^2 in {0, 1}
// covers the whole manifold.
GradientCheck check_gradient_estimate(const spectral::EigenResult& eig, const AuxiliaryFields& aux,
                                      const constants::GradientConstants& g, int n);
GradientCheck check_gradient_estimate(const Manifold& m, double delta, const VerifyOptions& opts = {});

struct VerificationRecord {
  std::string id;
  std::string parameter;        // sweep parameter name (empty outside sweeps)
  double parameter_value = 0.0;
  double p = 2.0;
  double delta = 0.0;
  double kbar = 0.0;
  double eps_max = 0.0;
  bool hypothesis_met = false;
  double lambda1 = 0.0;
  int mode = 0;
  double diameter_lo = 0.0;
  double diameter_hi = 0.0;
  std::string diameter_method;
  double alpha = 0.0;
  double bound = 0.0;
  double theorem_margin = 0.0;
  double sigma_measured = 0.0;
  double sigma_bound_margin = 0.0;
  double J_deviation = 0.0;
  double gradient_margin = 0.0;  // max Q
  double lambda_tilde = 0.0;
  double sharpness_ratio = 0.0;
  // Invariant outcomes; only binding when hypothesis_met.
  bool theorem_ok = true;
  bool sigma_ok = true;
  bool J_ok = true;
  bool gradient_ok = true;
  std::string error;  // non-empty when the row failed

  bool passed() const;
};

VerificationRecord check_main_theorem(const Manifold& m, double alpha_target, double p,
                                      const VerifyOptions& opts = {});

struct SweepFamily {
  geometry::ManifoldSpec base;
  // beta | L | fiber | c | R | aspect (fiber = aspect * L)
  std::string parameter = "beta";
  std::vector<double> values;
};

geometry::ManifoldSpec family_member(const SweepFamily& family, double value);

struct SweepSummary {
  std::size_t rows = 0;
  std::size_t hypothesis_met = 0;
  std::size_t failed = 0;  // rows with an error or a violated invariant
  std::optional<double> min_theorem_margin;
  std::optional<double> max_sharpness_deviation;  // flat-torus families only
};

struct SweepResult {
  std::vector<VerificationRecord> records;
  SweepSummary summary;
};

// Rows run on `jobs` threads; records come back in parameter order.
SweepResult sweep(const SweepFamily& family, double alpha_target, double p,
                  const VerifyOptions& opts = {}, unsigned jobs = 1);

SweepSummary summarize(const std::vector<VerificationRecord>& records, bool flat_family);

}  // namespace sgv::verify
