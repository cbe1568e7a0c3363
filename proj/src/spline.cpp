#include "sgv/spline.hpp"

#include <algorithm>
#include <cmath>

#include "sgv/error.hpp"
#include "sgv/tridiag.hpp"

namespace sgv {

CubicSpline::CubicSpline(double length, std::vector<double> y, std::vector<double> m, bool periodic)
    : length_(length),
      h_(length / static_cast<double>(y.size() - 1)),
      y_(std::move(y)),
      m_(std::move(m)),
      periodic_(periodic) {}

CubicSpline CubicSpline::periodic(double length, std::span<const double> samples) {
  if (samples.size() < 4) throw Error(ErrorCode::BadArgument, "periodic spline needs at least 4 samples");
  if (!(length > 0.0)) throw Error(ErrorCode::BadArgument, "spline length must be positive");
  const std::size_t m = samples.size() - 1;  // distinct knots
  const double h = length / static_cast<double>(m);
  linalg::SymTridiag sys;
  sys.diag.assign(m, 4.0);
  sys.off.assign(m - 1, 1.0);
  sys.corner = 1.0;
  sys.cyclic = true;
  std::vector<double> rhs(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double prev = samples[(j + m - 1) % m];
    const double next = samples[(j + 1) % m];
    rhs[j] = 6.0 * (next - 2.0 * samples[j] + prev) / (h * h);
  }
  std::vector<double> sol(m);
  linalg::SpdFactor(sys, 0.0).solve(rhs, sol);
  sol.push_back(sol[0]);
  std::vector<double> y(samples.begin(), samples.end());
  y.back() = y.front();
  return CubicSpline(length, std::move(y), std::move(sol), true);
}

CubicSpline CubicSpline::clamped(double length, std::span<const double> samples, double slope0,
                                 double slope1) {
  if (samples.size() < 3) throw Error(ErrorCode::BadArgument, "clamped spline needs at least 3 samples");
  if (!(length > 0.0)) throw Error(ErrorCode::BadArgument, "spline length must be positive");
  const std::size_t n = samples.size();
  const std::size_t m = n - 1;
  const double h = length / static_cast<double>(m);
  linalg::SymTridiag sys;
  sys.diag.assign(n, 4.0);
  sys.off.assign(n - 1, 1.0);
  sys.diag.front() = 2.0;
  sys.diag.back() = 2.0;
  std::vector<double> rhs(n);
  rhs[0] = 6.0 * ((samples[1] - samples[0]) / h - slope0) / h;
  rhs[m] = 6.0 * (slope1 - (samples[m] - samples[m - 1]) / h) / h;
  for (std::size_t j = 1; j < m; ++j)
    rhs[j] = 6.0 * (samples[j + 1] - 2.0 * samples[j] + samples[j - 1]) / (h * h);
  std::vector<double> sol(n);
  linalg::SpdFactor(sys, 0.0).solve(rhs, sol);
  return CubicSpline(length, std::vector<double>(samples.begin(), samples.end()), std::move(sol), false);
}

void CubicSpline::locate(double t, std::size_t& j, double& b) const {
  if (periodic_) {
    t = std::fmod(t, length_);
    if (t < 0.0) t += length_;
  } else {
    t = std::clamp(t, 0.0, length_);
  }
  const std::size_t segments = y_.size() - 1;
  const double s = t / h_;
  j = std::min(static_cast<std::size_t>(s), segments - 1);
  b = s - static_cast<double>(j);
}

double CubicSpline::value(double t) const {
  std::size_t j;
  double b;
  locate(t, j, b);
  const double a = 1.0 - b;
  return a * y_[j] + b * y_[j + 1] + ((a * a * a - a) * m_[j] + (b * b * b - b) * m_[j + 1]) * h_ * h_ / 6.0;
}

double CubicSpline::d1(double t) const {
  std::size_t j;
  double b;
  locate(t, j, b);
  const double a = 1.0 - b;
  return (y_[j + 1] - y_[j]) / h_ - (3.0 * a * a - 1.0) / 6.0 * h_ * m_[j] +
         (3.0 * b * b - 1.0) / 6.0 * h_ * m_[j + 1];
}

double CubicSpline::d2(double t) const {
  std::size_t j;
  double b;
  locate(t, j, b);
  return (1.0 - b) * m_[j] + b * m_[j + 1];
}

double CubicSpline::d3(double t) const {
  std::size_t j;
  double b;
  locate(t, j, b);
  return (m_[j + 1] - m_[j]) / h_;
}

std::vector<double> CubicSpline::knots() const {
  std::vector<double> k(y_.size());
  for (std::size_t j = 0; j < k.size(); ++j) k[j] = static_cast<double>(j) * h_;
  k.back() = length_;
  return k;
}

}  // namespace sgv
