#pragma once

#include <array>
#include <optional>
#include <vector>

namespace sgv::constants {

// Largest admissible delta: B(delta) < 1 needs delta < sqrt(10) - 3; the
// search grid keeps a 1e-6 margin from the root.
double delta_root();
double delta_max();

struct LedgerInput {
  int n = 2;
  double p = 2.0;
  double D = 3.141592653589793;
  double delta = 0.1;
  double C_s = 1.0;           // Sobolev constant (user supplied)
  double Lambda_rough = 1.0;  // rough spectral lower bound (user supplied)
  std::optional<double> sigma;     // defaults to 4 eps_max
  std::optional<double> psi_norm;  // defaults to 1 + 6 (tau - 1) eps_provisional
  double tail_tol = 1e-12;
};

struct GradientConstants {
  double delta = 0.0;
  double sigma = 0.0;
  double tau = 0.0;
  double A = 0.0;
  double B = 0.0;
  double z_tilde = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double b = 0.0;
  double alpha = 0.0;
};

GradientConstants gradient_constants(double delta, double sigma, double Lambda_rough);

// Upper bound for the Moser iteration product, within tail_tol (relative).
double moser_constant(double C_s, double p, int n, double psi_norm, double tail_tol = 1e-12);

double B_pn(double p, int n);
double C3(double delta);

struct GallotCheck {
  bool feasible = false;
  double alpha_tilde = 0.0;
  double rhs = 0.0;     // admissible eps at alpha_tilde
  double margin = 0.0;  // rhs - eps
};
GallotCheck gallot_feasible(double eps, int n, double p, double D);

struct EpsilonBreakdown {
  std::array<double, 4> terms{};
  double eps_max = 0.0;
  int binding = 0;  // index of the smallest term
  double eps_provisional = 0.0;
  double psi_norm = 0.0;
  double A_moser = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double C3 = 0.0;
  double B_pn = 0.0;
  double alpha_tilde = 0.0;
};

EpsilonBreakdown epsilon_max(const LedgerInput& in);

struct ConstantLedger {
  LedgerInput input;
  GradientConstants gradient;
  EpsilonBreakdown eps;
  double lambda_tilde_slope = 0.0;   // C1
  double lambda_tilde_offset = 0.0;  // C2
};

ConstantLedger build_ledger(const LedgerInput& in);

struct DeltaSearch {
  double delta = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
  double eps_max = 0.0;
  double next_grid_delta = 0.0;  // first grid point above delta (0 if none)
  double next_grid_alpha = 0.0;
  std::vector<std::array<double, 2>> grid;  // (delta, alpha) samples
};

// Largest delta on a log grid (refined by bisection) whose alpha reaches the
// target. sigma is 4 eps_max(delta) unless sigma_zero is set.
DeltaSearch delta_for_alpha(double alpha_target, const LedgerInput& base, bool sigma_zero = false,
                            std::size_t grid_points = 241);

struct ReferenceBounds {
  std::optional<double> lichnerowicz;
  double zhong_yang = 0.0;
  std::optional<double> yang;
  double shi_zhang = 0.0;
};
ReferenceBounds reference_bounds(int n, double H, double D, double s);

}  // namespace sgv::constants
