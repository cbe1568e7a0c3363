#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace sgv::linalg {

// Real symmetric tridiagonal matrix, optionally closed into a cycle by a
// corner entry coupling the last row with the first.
struct SymTridiag {
  std::vector<double> diag;  // n entries
  std::vector<double> off;   // n-1 entries, A(i, i+1)
  double corner = 0.0;       // A(n-1, 0), only read when cyclic
  bool cyclic = false;

  std::size_t size() const noexcept { return diag.size(); }

  // y = A x
  void apply(std::span<const double> x, std::span<double> y) const;
  double quadratic_form(std::span<const double> x) const;
  // Interval [lo, hi] containing the whole spectrum.
  std::pair<double, double> gershgorin() const;
};

// Number of eigenvalues strictly below x. Acyclic matrices only.
std::size_t sturm_count(const SymTridiag& a, double x);

// index-th smallest eigenvalue (0-based) by bisection on Sturm counts.
// Acyclic matrices only.
double bisect_eigenvalue(const SymTridiag& a, std::size_t index, double abs_tol = 1e-13);

// LU factorization with partial pivoting of (A - shift I) for acyclic A.
// Near-singular shifts are fine: tiny pivots are replaced by a floor, which
// is exactly what inverse iteration needs.
class PivotedFactor {
 public:
  PivotedFactor(const SymTridiag& a, double shift);
  void solve(std::span<const double> b, std::span<double> x) const;

 private:
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<char> swapped_;
};

// LDL^T factorization of (A - shift I) for symmetric positive definite A -
// shift I, cyclic or not. The corner produces fill only in the last row, so
// the factorization stays O(n).
class SpdFactor {
 public:
  SpdFactor(const SymTridiag& a, double shift);
  void solve(std::span<const double> b, std::span<double> x) const;
  // false when a non-positive pivot showed up (matrix not SPD).
  bool positive() const noexcept { return positive_; }

 private:
  std::vector<double> d_, l_, g_;
  bool positive_ = true;
};

// Eigen-decomposition of a small dense symmetric matrix (row-major m x m) by
// cyclic Jacobi rotations. Eigenvalues ascending; vectors stored as columns.
void jacobi_eigen(std::vector<double>& a, std::size_t m, std::vector<double>& values,
                  std::vector<double>& vectors);

}  // namespace sgv::linalg
