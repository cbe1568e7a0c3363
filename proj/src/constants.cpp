#include "sgv/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sgv/error.hpp"
#include "sgv/modelode.hpp"

namespace sgv::constants {

namespace {

constexpr double kPi = std::numbers::pi;

void require_exponent(double p, int n) {
  if (n < 2) throw Error(ErrorCode::BadArgument, "dimension n must be at least 2");
  if (!(p > 0.5 * static_cast<double>(n))) throw Error(ErrorCode::BadExponent, "need p > n/2");
}

void require_delta(double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::BadArgument, "delta must be positive");
  if (delta >= delta_root()) throw Error(ErrorCode::DeltaTooLarge, "B(delta) >= 1 for delta = " + std::to_string(delta));
}

double tau_of(double delta) { return (3.0 + 4.0 * delta) / (2.0 * delta); }

// 6 (tau - 1) written without the cancellation in tau - 1.
double six_tau_minus_one(double delta) { return (9.0 + 6.0 * delta) / delta; }

}  // namespace

double delta_root() { return std::sqrt(10.0) - 3.0; }
double delta_max() { return delta_root() - 1e-6; }

GradientConstants gradient_constants(double delta, double sigma, double Lambda_rough) {
  require_delta(delta);
  if (!(sigma >= 0.0)) throw Error(ErrorCode::BadArgument, "sigma must be non-negative");
  if (!(Lambda_rough > 0.0)) throw Error(ErrorCode::BadArgument, "Lambda_rough must be positive");
  GradientConstants g;
  g.delta = delta;
  g.sigma = sigma;
  g.tau = tau_of(delta);
  g.A = 2.0 * delta * (1.0 + delta);
  g.B = delta * (5.0 + delta) / (1.0 - delta);
  if (g.B >= 1.0) throw Error(ErrorCode::DeltaTooLarge, "B(delta) >= 1");
  const double sqrtA = std::sqrt(g.A);
  const double sqrtB = std::sqrt(g.B);
  g.z_tilde = modelode::z_sup(1.0 + delta).z_tilde;
  g.C1 = (1.0 + delta + sqrtA) / (1.0 - sqrtB);
  g.C2 = sigma / (2.0 * (1.0 - sqrtB)) * (g.z_tilde / sqrtA + 1.0 / (2.0 * sqrtB));
  g.b = g.C1 + g.C2 / Lambda_rough;
  g.alpha = (1.0 - delta) * (1.0 - delta) / g.b;
  return g;
}

double moser_constant(double C_s, double p, int n, double psi_norm, double tail_tol) {
  require_exponent(p, n);
  if (!(C_s > 0.0)) throw Error(ErrorCode::BadArgument, "C_s must be positive");
  if (!(psi_norm >= 1.0)) throw Error(ErrorCode::BadArgument, "psi_norm must be at least 1");
  if (!(tail_tol > 0.0)) throw Error(ErrorCode::BadArgument, "tail_tol must be positive");
  const double nn = static_cast<double>(n);
  const double s = 2.0 * p / nn;
  const double r = 0.5 * (s + 1.0);
  const double mu = r * nn / (r * nn - 2.0);
  const double E = s / (s - r);
  const double scale = C_s * std::sqrt(psi_norm);
  auto A_l = [&](double l) { return scale * (l + 1.0) / (2.0 * std::sqrt(l)); };

  // log factor_j <= mu^-j (log 3 + E (A0 + (j - 1) log(mu) / 2)) because
  // A_{l-1} <= C_s sqrt(psi) sqrt(l / 2) for l >= 2.
  const double A0 = std::max(0.0, std::log(scale) + std::log(2.0));
  const double c0 = std::log(3.0) + E * A0;
  const double c1 = 0.5 * E * std::log(mu);
  const double q = 1.0 / mu;
  auto tail = [&](int k) {
    const double qk1 = std::pow(q, k + 1);
    const double s0 = qk1 / (1.0 - q);
    const double s1 = qk1 * (k / (1.0 - q) + q / ((1.0 - q) * (1.0 - q)));
    return c0 * s0 + c1 * s1;
  };

  double log_sum = 0.0;
  for (int j = 1; j < 10000; ++j) {
    const double l_prev = 2.0 * std::pow(mu, j - 1);
    const double l_j = 2.0 * std::pow(mu, j);
    const double x = 2.0 * A_l(l_prev - 1.0);
    const double ex = E * std::log(x);
    const double log_term = ex > 30.0 ? ex + std::log1p(2.0 * std::exp(-ex)) : std::log(std::exp(ex) + 2.0);
    log_sum += 2.0 / l_j * log_term;
    const double t = tail(j);
    if (t <= tail_tol) return std::exp(log_sum + t);
  }
  throw Error(ErrorCode::NoConvergence, "Moser product tail did not shrink");
}

double B_pn(double p, int n) {
  require_exponent(p, n);
  const double nn = static_cast<double>(n);
  return std::sqrt((2.0 * p - 1.0) / p) * std::pow(nn - 1.0, 1.0 - 1.0 / (2.0 * p)) *
         std::pow((2.0 * p - 2.0) / (2.0 * p - nn), (p - 1.0) / (2.0 * p));
}

double C3(double delta) {
  return std::pow(4.0 / (3.0 + 2.0 * delta), (3.0 + 2.0 * delta) / (3.0 + 4.0 * delta));
}

GallotCheck gallot_feasible(double eps, int n, double p, double D) {
  if (!(D > 0.0)) throw Error(ErrorCode::BadArgument, "D must be positive");
  const double B = B_pn(p, n);
  const double x = std::pow(2.0, -(p + 1.0));
  GallotCheck g;
  g.alpha_tilde = std::log1p(x) / (B * D);
  const double grow = std::expm1(B * g.alpha_tilde * D);
  g.rhs = static_cast<double>(n - 1) * g.alpha_tilde * g.alpha_tilde *
          (1.0 / (std::pow(2.0, 1.0 / p) * std::pow(grow, 1.0 / p)) - 1.0);
  g.margin = g.rhs - eps;
  g.feasible = eps <= g.rhs;
  return g;
}

EpsilonBreakdown epsilon_max(const LedgerInput& in) {
  require_exponent(in.p, in.n);
  require_delta(in.delta);
  if (!(in.D > 0.0)) throw Error(ErrorCode::BadArgument, "D must be positive");
  if (!(in.C_s > 0.0)) throw Error(ErrorCode::BadArgument, "C_s must be positive");
  if (!(in.Lambda_rough > 0.0)) throw Error(ErrorCode::BadArgument, "Lambda_rough must be positive");
  const double delta = in.delta;
  EpsilonBreakdown e;
  e.B_pn = B_pn(in.p, in.n);
  const GallotCheck gallot = gallot_feasible(0.0, in.n, in.p, in.D);
  e.alpha_tilde = gallot.alpha_tilde;
  e.terms[0] = gallot.rhs;
  e.terms[1] = delta / (12.0 * in.C_s * in.C_s * (3.0 + 2.0 * delta));

  // The Moser constant needs a bound on psi, which itself depends on eps.
  // Seeding with min(term1, term2) >= eps_max over-estimates psi, and A is
  // increasing in psi, so terms 3 and 4 computed from it stay admissible.
  e.eps_provisional = std::min(e.terms[0], e.terms[1]);
  e.psi_norm = in.psi_norm.value_or(1.0 + six_tau_minus_one(delta) * e.eps_provisional);
  e.A_moser = moser_constant(in.C_s, in.p, in.n, e.psi_norm, in.tail_tol);
  e.K1 = std::sqrt(6.0 / in.Lambda_rough * (2.0 + 3.0 / delta));
  e.K2 = e.A_moser * (e.K1 + six_tau_minus_one(delta));
  e.C3 = C3(delta);
  const double r = std::sqrt(7.0) - 2.0;
  e.terms[2] = (r / e.K2) * (r / e.K2);
  e.terms[3] = 1.0 / (8.0 * e.K2 * std::pow(4.0 / (3.0 + 2.0 * delta), (9.0 + 6.0 * delta) / (3.0 + 2.0 * delta)));
  e.binding = static_cast<int>(std::min_element(e.terms.begin(), e.terms.end()) - e.terms.begin());
  e.eps_max = e.terms[static_cast<std::size_t>(e.binding)];
  return e;
}

ConstantLedger build_ledger(const LedgerInput& in) {
  ConstantLedger l;
  l.input = in;
  l.eps = epsilon_max(in);
  const double sigma = in.sigma.value_or(4.0 * l.eps.eps_max);
  l.gradient = gradient_constants(in.delta, sigma, in.Lambda_rough);
  l.lambda_tilde_slope = l.gradient.C1;
  l.lambda_tilde_offset = l.gradient.C2;
  return l;
}

DeltaSearch delta_for_alpha(double alpha_target, const LedgerInput& base, bool sigma_zero, std::size_t grid_points) {
  if (!(alpha_target > 0.0 && alpha_target < 1.0))
    throw Error(ErrorCode::BadArgument, "alpha_target must lie in (0, 1)");
  if (grid_points < 2) throw Error(ErrorCode::BadArgument, "delta grid needs at least two points");

  struct Eval {
    double alpha, sigma, eps;
  };
  auto eval = [&](double delta) {
    LedgerInput in = base;
    in.delta = delta;
    in.sigma.reset();
    const double eps = epsilon_max(in).eps_max;
    const double sigma = sigma_zero ? 0.0 : 4.0 * eps;
    return Eval{gradient_constants(delta, sigma, base.Lambda_rough).alpha, sigma, eps};
  };

  const double lo = std::log(1e-8);
  const double hi = std::log(delta_max());
  DeltaSearch out;
  out.grid.reserve(grid_points);
  std::vector<double> deltas(grid_points);
  int best_index = -1;
  double best_alpha = 0.0;
  for (std::size_t i = 0; i < grid_points; ++i) {
    deltas[i] = i + 1 == grid_points ? delta_max()
                                     : std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1));
    const double a = eval(deltas[i]).alpha;
    out.grid.push_back({deltas[i], a});
    best_alpha = std::max(best_alpha, a);
    if (a >= alpha_target) best_index = static_cast<int>(i);
  }
  if (best_index < 0)
    throw Error(ErrorCode::Unreachable, "alpha_target " + std::to_string(alpha_target) +
                                            " not reached; best alpha on the grid is " + std::to_string(best_alpha));

  const std::size_t j = static_cast<std::size_t>(best_index);
  double good = deltas[j];
  if (j + 1 < grid_points) {
    double bad = deltas[j + 1];
    out.next_grid_delta = bad;
    out.next_grid_alpha = out.grid[j + 1][1];
    for (int it = 0; it < 200 && bad - good > 1e-15 * bad; ++it) {
      const double mid = 0.5 * (good + bad);
      if (mid <= good || mid >= bad) break;
      if (eval(mid).alpha >= alpha_target)
        good = mid;
      else
        bad = mid;
    }
  }
  const Eval e = eval(good);
  out.delta = good;
  out.alpha = e.alpha;
  out.sigma = e.sigma;
  out.eps_max = e.eps;
  return out;
}

ReferenceBounds reference_bounds(int n, double H, double D, double s) {
  if (n < 2) throw Error(ErrorCode::BadArgument, "dimension n must be at least 2");
  if (!(D > 0.0)) throw Error(ErrorCode::BadArgument, "D must be positive");
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::BadArgument, "s must lie in (0, 1)");
  const double nn = static_cast<double>(n);
  ReferenceBounds r;
  r.zhong_yang = kPi * kPi / (D * D);
  if (H > 0.0) r.lichnerowicz = H * nn;
  if (H < 0.0) {
    const double Cn = std::max(std::sqrt(nn - 1.0), std::sqrt(2.0));
    r.yang = r.zhong_yang * std::exp(-Cn * std::sqrt((nn - 1.0) * std::abs(H)) * D);
  }
  r.shi_zhang = 4.0 * (s - s * s) * r.zhong_yang + s * (nn - 1.0) * H;
  return r;
}

}  // namespace sgv::constants
