#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <cstddef>
#include <span>
#include <vector>

namespace sgv::quad {

inline constexpr std::size_t kNodes = 16;

// 16-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::array<double, kNodes> x;
  std::array<double, kNodes> w;
};

const GaussRule& gauss16();

template <class F>
double panel(F&& f, double a, double b) {
  const auto& rule = gauss16();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double s = 0.0;
  for (std::size_t i = 0; i < kNodes; ++i) s += rule.w[i] * f(mid + half * rule.x[i]);
  return half * s;
}

struct Result {
  double value = 0.0;
  int panels = 0;
  bool converged = false;
};

// Composite Gauss-Legendre on [a, b]; the panel count doubles until two
// successive sums agree to rel_tol (or both vanish below abs_tol).
template <class F>
Result composite(F&& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 1e-300,
                 int max_doublings = 18) {
  Result r;
  if (b <= a) {
    r.converged = true;
    return r;
  }
  int panels = 2;
  auto sum_panels = [&](int m) {
    const double h = (b - a) / m;
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += panel(f, a + i * h, (i + 1 == m) ? b : a + (i + 1) * h);
    return s;
  };
  double prev = sum_panels(panels);
  for (int d = 0; d < max_doublings; ++d) {
    panels *= 2;
    const double cur = sum_panels(panels);
    const double diff = std::abs(cur - prev);
    if (diff <= rel_tol * std::abs(cur) || diff <= abs_tol) {
      r.value = cur;
      r.panels = panels;
      r.converged = true;
      return r;
    }
    prev = cur;
  }
  r.value = prev;
  r.panels = panels;
  return r;
}

// Same as composite() but splits [breaks.front(), breaks.back()] at every
// interior breakpoint so that kinks of the integrand sit on panel edges.
template <class F>
Result piecewise(F&& f, std::span<const double> breaks, double rel_tol = 1e-12,
                 double abs_tol = 1e-300) {
  Result total;
  total.converged = true;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Result part = composite(f, breaks[i], breaks[i + 1], rel_tol, abs_tol);
    total.value += part.value;
    total.panels += part.panels;
    total.converged = total.converged && part.converged;
  }
  return total;
}

namespace detail {

template <class F>
double adaptive_step(F& f, double a, double b, double whole, double tol, int depth, bool& ok) {
  const double mid = 0.5 * (a + b);
  const double left = panel(f, a, mid);
  const double right = panel(f, mid, b);
  const double both = left + right;
  // Below ~eps |both| the two estimates differ by roundoff only.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(both);
  if (std::abs(both - whole) <= std::max(tol, floor)) return both;
  if (depth == 0) {
    ok = false;
    return both;
  }
  return adaptive_step(f, a, mid, left, 0.5 * tol, depth - 1, ok) +
         adaptive_step(f, mid, b, right, 0.5 * tol, depth - 1, ok);
}

}  // namespace detail

// Recursive bisection of Gauss-Legendre panels until each panel agrees with
// its two halves to within its share of abs_tol.
template <class F>
Result adaptive(F&& f, double a, double b, double abs_tol, int max_depth = 30) {
  Result r;
  bool ok = true;
  r.value = detail::adaptive_step(f, a, b, panel(f, a, b), abs_tol, max_depth, ok);
  r.converged = ok;
  return r;
}

}  // namespace sgv::quad
