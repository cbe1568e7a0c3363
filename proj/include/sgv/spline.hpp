#pragma once

#include <span>
#include <vector>

namespace sgv {

// Cubic spline through uniformly spaced samples on [0, L]. Either periodic
// (first and last samples must agree) or clamped with prescribed end slopes.
class CubicSpline {
 public:
  static CubicSpline periodic(double length, std::span<const double> samples);
  static CubicSpline clamped(double length, std::span<const double> samples, double slope0,
                             double slope1);

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  double d3(double t) const;

  double length() const noexcept { return length_; }
  std::span<const double> samples() const noexcept { return y_; }
  std::vector<double> knots() const;

 private:
  CubicSpline(double length, std::vector<double> y, std::vector<double> m, bool periodic);
  // Segment index and local coordinate B in [0, 1] for t.
  void locate(double t, std::size_t& j, double& b) const;

  double length_ = 0.0;
  double h_ = 0.0;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at knots
  bool periodic_ = false;
};

}  // namespace sgv
