#include "sgv/modelode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sgv/error.hpp"
#include "sgv/quadrature.hpp"

namespace sgv::modelode {

namespace {

constexpr double kPi = std::numbers::pi;

void require_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw Error(ErrorCode::BadArgument, "eta must be positive");
}

// psi - sin(psi) cos(psi), with a series for small psi to avoid cancellation.
double chord_defect(double psi) {
  if (psi > 0.1) return psi - std::sin(psi) * std::cos(psi);
  const double p2 = psi * psi;
  // sum_{k>=1} (-1)^{k+1} 4^k psi^{2k+1} / (2k+1)!
  double term = 2.0 / 3.0 * psi * p2;
  double sum = term;
  for (int k = 2; k < 12; ++k) {
    term *= -4.0 * p2 / ((2.0 * k) * (2.0 * k + 1.0));
    sum += term;
  }
  return sum;
}

// Z(cos psi) for psi in [0, pi/2], accurate when Z is small near u = 1.
double z_near_one(double psi, double eta) {
  const double s = std::sin(0.5 * psi);
  return eta * 2.0 * s * s - (2.0 * eta / kPi) * chord_defect(psi);
}

}  // namespace

double z(double u, double eta) {
  if (std::abs(u) > 1.0) throw Error(ErrorCode::BadArgument, "Z is defined on [-1, 1]");
  return (2.0 * eta / kPi) * (std::asin(u) + u * std::sqrt(1.0 - u * u)) - eta * u;
}

double z_prime(double u, double eta) {
  if (std::abs(u) > 1.0) throw Error(ErrorCode::BadArgument, "Z' is defined on [-1, 1]");
  return -eta + (4.0 * eta / kPi) * std::sqrt(1.0 - u * u);
}

double z_second(double u, double eta) {
  if (std::abs(u) >= 1.0)
    throw Error(ErrorCode::EndpointSecondDerivative, "Z'' is unbounded at |u| = 1");
  return -(4.0 * eta / kPi) * u / std::sqrt(1.0 - u * u);
}

ZValues z_eval(double u, double eta) { return {z(u, eta), z_prime(u, eta), z_second(u, eta)}; }

double ode_residual(double u, double eta) {
  const ZValues v = z_eval(u, eta);
  return std::abs((1.0 - u * u) * v.d2 + u * v.d1 + eta * u);
}

BarrierMargins check_barrier_margins(double eta, double J_lo, double J_hi, std::size_t grid_size, std::size_t j_count) {
  if (!(eta > 1.0)) throw Error(ErrorCode::BadArgument, "check_barrier_margins needs eta > 1");
  if (!(J_lo > 0.0) || J_lo > J_hi) throw Error(ErrorCode::BadArgument, "need 0 < J_lo <= J_hi");
  if (J_hi > eta) throw Error(ErrorCode::HypothesisViolation, "J_hi exceeds eta");
  if (grid_size < 2 || j_count < 1) throw Error(ErrorCode::BadArgument, "grid too small");

  const double lo = -1.0 + 1e-9;
  const double hi = 1.0 - 1e-9;
  BarrierMargins m;
  m.gradient = m.linear = m.envelope = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double u = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    const ZValues v = z_eval(u, eta);
    const double lin = 2.0 * v.z - u * v.d1 + 1.0 - (1.0 - eta);
    const double env = eta * (1.0 - u * u) - 2.0 * std::abs(v.z);
    if (lin < m.linear) {
      m.linear = lin;
      m.worst_u[1] = u;
    }
    if (env < m.envelope) {
      m.envelope = env;
      m.worst_u[2] = u;
    }
    for (std::size_t j = 0; j < j_count; ++j) {
      const double J = j_count == 1 ? J_lo
                                    : J_lo + (J_hi - J_lo) * static_cast<double>(j) / static_cast<double>(j_count - 1);
      const double g = v.d1 * v.d1 / eta - 2.0 * v.d2 * v.z / J + v.d1;
      if (g < m.gradient) {
        m.gradient = g;
        m.worst_u[0] = u;
        m.worst_J = J;
      }
    }
  }
  return m;
}

ZSup z_sup(double eta) {
  require_eta(eta);
  ZSup s;
  s.u_star = std::sqrt(1.0 - kPi * kPi / 16.0);
  s.z_tilde = z(s.u_star, eta);
  return s;
}

double sharpness_ratio_q(double x, double a, double b, double eta) {
  if (!(x >= 0.0 && x < 1.0)) throw Error(ErrorCode::BadArgument, "q is evaluated for x in [0, 1)");
  const double psi = std::acos(x);
  const double s = std::sin(psi);
  return 2.0 * a * z_near_one(psi, eta) / (b * s * s);
}

double sharpness_integral(double a, double b, double eta) {
  require_eta(eta);
  if (!(a >= 0.0 && a < 1.0)) throw Error(ErrorCode::BadArgument, "sharpness integral needs 0 <= a < 1");
  if (!(b > 0.0)) throw Error(ErrorCode::BadArgument, "sharpness integral needs b > 0");
  if (a == 0.0) return kPi;

  // With x = cos(psi) the weight (1 - x^2)^{-1/2} dx becomes d(psi) and the
  // ratio q stays finite at psi = 0, where it tends to a eta / b.
  auto q_of = [&](double psi) {
    if (psi == 0.0) return a * eta / b;
    const double s = std::sin(psi);
    return 2.0 * a * z_near_one(psi, eta) / (b * s * s);
  };
  bool out_of_range = false;
  auto integrand = [&](double psi) {
    const double q = q_of(psi);
    if (!(std::abs(q) < 1.0)) {
      out_of_range = true;
      return 0.0;
    }
    return 1.0 / std::sqrt(1.0 + q) + 1.0 / std::sqrt(1.0 - q);
  };
  for (int i = 0; i <= 2000; ++i) integrand(0.5 * kPi * i / 2000.0);
  if (out_of_range) throw Error(ErrorCode::RatioOutOfRange, "|q| >= 1 (b is below eta?)");

  // Panels where q approaches 1 get refined; elsewhere the integrand is smooth.
  const auto res = quad::adaptive(integrand, 0.0, 0.5 * kPi, 1e-14);
  if (out_of_range) throw Error(ErrorCode::RatioOutOfRange, "|q| >= 1 (b is below eta?)");
  if (!res.converged) throw Error(ErrorCode::NoConvergence, "sharpness integral did not converge");
  return res.value;
}

}  // namespace sgv::modelode
