#include "sgv/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sgv/error.hpp"

namespace sgv::linalg {

void SymTridiag::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += off[i - 1] * x[i - 1];
    if (i + 1 < n) s += off[i] * x[i + 1];
    y[i] = s;
  }
  if (cyclic && n > 2) {
    y[0] += corner * x[n - 1];
    y[n - 1] += corner * x[0];
  }
}

double SymTridiag::quadratic_form(std::span<const double> x) const {
  std::vector<double> y(size());
  apply(x, y);
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

std::pair<double, double> SymTridiag::gershgorin() const {
  const std::size_t n = size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < n) r += std::abs(off[i]);
    if (cyclic && n > 2 && (i == 0 || i + 1 == n)) r += std::abs(corner);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  return {lo, hi};
}

std::size_t sturm_count(const SymTridiag& a, double x) {
  if (a.cyclic) throw Error(ErrorCode::BadArgument, "sturm_count needs an acyclic matrix");
  const std::size_t n = a.size();
  constexpr double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    q = a.diag[i] - x - (i > 0 ? a.off[i - 1] * a.off[i - 1] / q : 0.0);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

double bisect_eigenvalue(const SymTridiag& a, std::size_t index, double abs_tol) {
  auto [lo, hi] = a.gershgorin();
  const double pad = 1e-14 * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
  lo -= pad;
  hi += pad;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double width = hi - lo;
    if (width <= abs_tol) break;
    if (sturm_count(a, mid) > index)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

PivotedFactor::PivotedFactor(const SymTridiag& a, double shift) {
  if (a.cyclic) throw Error(ErrorCode::BadArgument, "PivotedFactor needs an acyclic matrix");
  const std::size_t n = a.size();
  d_.resize(n);
  for (std::size_t i = 0; i < n; ++i) d_[i] = a.diag[i] - shift;
  dl_ = a.off;
  du_ = a.off;
  du2_.assign(n > 2 ? n - 2 : 0, 0.0);
  swapped_.assign(n, 0);
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) norm = std::max(norm, std::abs(d_[i]));
  for (double v : a.off) norm = std::max(norm, std::abs(v));
  const double floor = std::numeric_limits<double>::epsilon() * std::max(norm, 1e-300);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d_[i]) >= std::abs(dl_[i])) {
      if (d_[i] == 0.0) d_[i] = floor;
      const double fact = dl_[i] / d_[i];
      dl_[i] = fact;
      d_[i + 1] -= fact * du_[i];
    } else {
      const double fact = d_[i] / dl_[i];
      d_[i] = dl_[i];
      dl_[i] = fact;
      const double temp = du_[i];
      du_[i] = d_[i + 1];
      d_[i + 1] = temp - fact * d_[i + 1];
      if (i + 2 < n) {
        du2_[i] = du_[i + 1];
        du_[i + 1] = -fact * du_[i + 1];
      }
      swapped_[i] = 1;
    }
  }
  if (n > 0 && std::abs(d_[n - 1]) < floor) d_[n - 1] = d_[n - 1] < 0 ? -floor : floor;
}

void PivotedFactor::solve(std::span<const double> b, std::span<double> x) const {
  const std::size_t n = d_.size();
  std::copy(b.begin(), b.end(), x.begin());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (swapped_[i]) {
      const double temp = x[i];
      x[i] = x[i + 1];
      x[i + 1] = temp - dl_[i] * x[i];
    } else {
      x[i + 1] -= dl_[i] * x[i];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    if (k + 1 < n) s -= du_[k] * x[k + 1];
    if (k + 2 < n) s -= du2_[k] * x[k + 2];
    x[k] = s / d_[k];
  }
}

SpdFactor::SpdFactor(const SymTridiag& a, double shift) {
  const std::size_t n = a.size();
  d_.assign(n, 0.0);
  l_.assign(n > 1 ? n - 1 : 0, 0.0);
  g_.assign(n > 1 ? n - 1 : 0, 0.0);
  if (n == 0) return;
  if (n == 1) {
    d_[0] = a.diag[0] - shift;
    positive_ = d_[0] > 0.0;
    return;
  }
  // Border entries A(n-1, i) for i < n-1.
  std::vector<double> r(n - 1, 0.0);
  r[n - 2] = a.off[n - 2];
  if (a.cyclic && n > 2) r[0] += a.corner;

  d_[0] = a.diag[0] - shift;
  for (std::size_t i = 0; i + 2 < n; ++i) {
    l_[i] = a.off[i] / d_[i];
    d_[i + 1] = a.diag[i + 1] - shift - l_[i] * a.off[i];
    if (d_[i] <= 0.0) positive_ = false;
  }
  double last = a.diag[n - 1] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double num = r[i] - (i > 0 ? g_[i - 1] * d_[i - 1] * l_[i - 1] : 0.0);
    g_[i] = num / d_[i];
    last -= g_[i] * g_[i] * d_[i];
  }
  d_[n - 1] = last;
  if (d_[n - 2] <= 0.0 || last <= 0.0) positive_ = false;
}

void SpdFactor::solve(std::span<const double> b, std::span<double> x) const {
  const std::size_t n = d_.size();
  if (n == 0) return;
  if (n == 1) {
    x[0] = b[0] / d_[0];
    return;
  }
  std::vector<double> y(n);
  y[0] = b[0];
  for (std::size_t i = 1; i + 1 < n; ++i) y[i] = b[i] - l_[i - 1] * y[i - 1];
  double tail = b[n - 1];
  for (std::size_t i = 0; i + 1 < n; ++i) tail -= g_[i] * y[i];
  y[n - 1] = tail;
  for (std::size_t i = 0; i < n; ++i) y[i] /= d_[i];
  x[n - 1] = y[n - 1];
  x[n - 2] = y[n - 2] - g_[n - 2] * x[n - 1];
  for (std::size_t k = n - 2; k-- > 0;) x[k] = y[k] - l_[k] * x[k + 1] - g_[k] * x[n - 1];
}

void jacobi_eigen(std::vector<double>& a, std::size_t m, std::vector<double>& values,
                  std::vector<double>& vectors) {
  vectors.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) vectors[i * m + i] = 1.0;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * m + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double offnorm = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        total += at(i, j) * at(i, j);
        if (i != j) offnorm += at(i, j) * at(i, j);
      }
    if (offnorm <= 1e-32 * total) break;
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < m; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double vkp = vectors[k * m + p];
          const double vkq = vectors[k * m + q];
          vectors[k * m + p] = c * vkp - s * vkq;
          vectors[k * m + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  // Sort ascending, permuting eigenvector columns with the values.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return at(i, i) < at(j, j); });
  values.resize(m);
  std::vector<double> sorted(m * m);
  for (std::size_t c = 0; c < m; ++c) {
    values[c] = at(order[c], order[c]);
    for (std::size_t r = 0; r < m; ++r) sorted[r * m + c] = vectors[r * m + order[c]];
  }
  vectors = std::move(sorted);
}

}  // namespace sgv::linalg
