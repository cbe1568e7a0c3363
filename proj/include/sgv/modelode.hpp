#pragma once

#include <cstddef>

namespace sgv::modelode {

// Odd solution of (1 - u^2) Z'' + u Z' = -eta u with Z(0) = Z(+-1) = 0:
//   Z(u) = (2 eta / pi)(asin u + u sqrt(1 - u^2)) - eta u.
double z(double u, double eta);
double z_prime(double u, double eta);
// Throws EndpointSecondDerivative for |u| >= 1.
double z_second(double u, double eta);

struct ZValues {
  double z = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};
ZValues z_eval(double u, double eta);

// |(1 - u^2) Z'' + u Z' + eta u|
double ode_residual(double u, double eta);

struct BarrierMargins {
  double gradient = 0.0;   // min of Z'^2/eta - 2 Z'' Z / J + Z'
  double linear = 0.0;     // min of 2Z - u Z' + 1 - (1 - eta)
  double envelope = 0.0;   // min of eta (1 - u^2) - 2|Z|
  double worst_u[3] = {0.0, 0.0, 0.0};
  double worst_J = 0.0;    // J attaining the gradient minimum
};

// Minima over u in [-1 + 1e-9, 1 - 1e-9] (grid_size points) and j_count
// values of J spread over [J_lo, J_hi]. Needs J_hi <= eta.
BarrierMargins check_barrier_margins(double eta, double J_lo, double J_hi, std::size_t grid_size,
                           std::size_t j_count = 11);

struct ZSup {
  double u_star = 0.0;
  double z_tilde = 0.0;
};
// Maximum of Z on [-1, 1]: Z' = 0 at sqrt(1 - u^2) = pi / 4.
ZSup z_sup(double eta);

// q = 2 a Z(x) / (b (1 - x^2)), evaluated stably near x = 1.
double sharpness_ratio_q(double x, double a, double b, double eta);

// I = int_0^1 (1 - x^2)^{-1/2} [(1 + q)^{-1/2} + (1 - q)^{-1/2}] dx.
double sharpness_integral(double a, double b, double eta);

}  // namespace sgv::modelode
