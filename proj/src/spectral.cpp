#include "sgv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

#include "sgv/error.hpp"

namespace sgv::spectral {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void normalize(std::vector<double>& x) {
  const double s = std::sqrt(dot(x, x));
  for (double& v : x) v /= s;
}

void remove_component(std::vector<double>& x, std::span<const double> dir) {
  if (dir.empty()) return;
  const double c = dot(x, dir);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * dir[i];
}

// Modified Gram-Schmidt, applied twice for stability.
void orthonormalize(std::vector<std::vector<double>>& block) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < block.size(); ++j) {
      for (std::size_t i = 0; i < j; ++i) remove_component(block[j], block[i]);
      normalize(block[j]);
    }
  }
}

void rayleigh_ritz(const linalg::SymTridiag& a, std::vector<std::vector<double>>& block,
                   std::vector<double>& values) {
  const std::size_t b = block.size();
  const std::size_t n = a.size();
  std::vector<std::vector<double>> ax(b, std::vector<double>(n));
  for (std::size_t j = 0; j < b; ++j) a.apply(block[j], ax[j]);
  std::vector<double> h(b * b);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = i; j < b; ++j) h[i * b + j] = h[j * b + i] = dot(block[i], ax[j]);
  std::vector<double> vecs;
  linalg::jacobi_eigen(h, b, values, vecs);
  std::vector<std::vector<double>> rotated(b, std::vector<double>(n, 0.0));
  for (std::size_t c = 0; c < b; ++c)
    for (std::size_t r = 0; r < b; ++r) {
      const double coef = vecs[r * b + c];
      for (std::size_t i = 0; i < n; ++i) rotated[c][i] += coef * block[r][i];
    }
  block = std::move(rotated);
}

EigenPair cyclic_eigenpair(const linalg::SymTridiag& a, std::size_t index, std::span<const double> deflate) {
  const std::size_t n = a.size();
  const std::size_t avail = n - (deflate.empty() ? 0 : 1);
  const std::size_t b = std::min(index + 4, avail);
  if (index >= avail) throw Error(ErrorCode::BadArgument, "eigenvalue index out of range");

  // Deterministic start block: low Fourier modes in the index coordinate.
  std::vector<std::vector<double>> block;
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t mode = deflate.empty() ? 0 : 1; block.size() < b; ++mode) {
    const std::size_t freq = (mode + 1) / 2;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double arg = two_pi * static_cast<double>(freq) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      x[i] = mode == 0 ? 1.0 : (mode % 2 == 1 ? std::cos(arg) : std::sin(arg));
    }
    remove_component(x, deflate);
    block.push_back(std::move(x));
  }
  orthonormalize(block);
  std::vector<double> ritz;
  rayleigh_ritz(a, block, ritz);

  // Shift strictly below the spectrum so that A - sI is positive definite.
  auto [g_lo, g_hi] = a.gershgorin();
  const double scale = std::max(std::abs(g_lo), std::abs(g_hi));
  const double theta0 = ritz.front();
  double gap = std::max(0.75 * std::abs(theta0), 1e-8 * scale);
  double shift = theta0 - gap;
  std::optional<linalg::SpdFactor> factor;
  for (int attempt = 0; attempt < 200; ++attempt) {
    linalg::SpdFactor trial(a, shift);
    if (trial.positive()) {
      factor.emplace(std::move(trial));
      break;
    }
    gap *= 2.0;
    shift = theta0 - gap;
  }
  if (!factor) throw Error(ErrorCode::NoConvergence, "no positive definite shift found");

  // Residuals bottom out near eps * ||A||; stop there, or once they stop
  // improving at a level that already pins the eigenvalue to roundoff.
  const double floor = 8.0 * kEps * scale;
  std::vector<double> ax(n);
  std::vector<double> tmp(n);
  double best = std::numeric_limits<double>::infinity();
  int idle = 0;
  for (int it = 0; it < 5000; ++it) {
    for (auto& x : block) {
      factor->solve(x, tmp);
      x = tmp;
      remove_component(x, deflate);
    }
    orthonormalize(block);
    rayleigh_ritz(a, block, ritz);
    const double theta = ritz[index];
    const auto& x = block[index];
    a.apply(x, ax);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += (ax[i] - theta * x[i]) * (ax[i] - theta * x[i]);
    res = std::sqrt(res);
    const double mag = std::max(std::abs(theta), std::abs(theta - shift));
    if (res <= std::max(1e-12 * mag, floor)) return {theta, x};
    if (res < 0.9 * best) {
      best = res;
      idle = 0;
    } else if (++idle >= 30 && best <= 1e-7 * mag) {
      return {theta, x};
    }
  }
  throw Error(ErrorCode::NoConvergence, "block inverse iteration did not converge");
}

EigenPair acyclic_eigenpair(const linalg::SymTridiag& a, std::size_t index) {
  const std::size_t n = a.size();
  if (index >= n) throw Error(ErrorCode::BadArgument, "eigenvalue index out of range");
  const double lambda = linalg::bisect_eigenvalue(a, index);
  linalg::PivotedFactor factor(a, lambda);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.25 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  normalize(x);
  std::vector<double> y(n);
  for (int it = 0; it < 4; ++it) {
    factor.solve(x, y);
    x = y;
    normalize(x);
  }
  return {a.quadratic_form(x), x};
}

}  // namespace

double fiber_eigenvalue(int k, int n) { return static_cast<double>(k) * static_cast<double>(k + n - 2); }

linalg::SymTridiag Discretization::normalized() const {
  linalg::SymTridiag a = stiffness;
  for (std::size_t i = 0; i < N; ++i) a.diag[i] /= mass[i];
  for (std::size_t i = 0; i + 1 < N; ++i) a.off[i] /= std::sqrt(mass[i] * mass[i + 1]);
  if (a.cyclic) a.corner /= std::sqrt(mass[N - 1] * mass[0]);
  return a;
}

std::vector<double> Discretization::laplacian(std::span<const double> u) const {
  std::vector<double> out(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double right = i + 1 < N ? u[i + 1] : (periodic ? u[0] : u[i]);
    const double left = i > 0 ? u[i - 1] : (periodic ? u[N - 1] : u[i]);
    out[i] = (faces[i + 1] * (right - u[i]) - faces[i] * (u[i] - left)) / (h * mass[i]);
  }
  return out;
}

Discretization assemble(const Manifold& m, int k, std::size_t N) {
  if (N < 16) throw Error(ErrorCode::BadArgument, "grid needs N >= 16");
  if (k < 0) throw Error(ErrorCode::BadArgument, "fiber mode k must be non-negative");
  const auto& w = m.profile;
  Discretization d;
  d.N = N;
  d.k = k;
  d.n = m.n;
  d.periodic = w.boundary() == geometry::Boundary::Periodic;
  d.h = w.length() / static_cast<double>(N);
  const double e = static_cast<double>(m.n - 1);
  d.t.resize(N);
  d.f.resize(N);
  d.mass.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    d.t[i] = (static_cast<double>(i) + 0.5) * d.h;
    d.f[i] = w.value(d.t[i]);
    d.mass[i] = std::pow(d.f[i], e) * d.h;
  }
  d.faces.resize(N + 1);
  for (std::size_t j = 0; j <= N; ++j) d.faces[j] = std::pow(w.value(static_cast<double>(j) * d.h), e);
  if (d.periodic) {
    d.faces[N] = d.faces[0];
  } else {
    d.faces[0] = 0.0;
    d.faces[N] = 0.0;
  }
  const double mu = fiber_eigenvalue(k, m.n);
  auto& K = d.stiffness;
  K.diag.resize(N);
  K.off.resize(N - 1);
  for (std::size_t i = 0; i < N; ++i)
    K.diag[i] = (d.faces[i] + d.faces[i + 1]) / d.h + mu * std::pow(d.f[i], e - 2.0) * d.h;
  for (std::size_t i = 0; i + 1 < N; ++i) K.off[i] = -d.faces[i + 1] / d.h;
  K.cyclic = d.periodic;
  K.corner = d.periodic ? -d.faces[N] / d.h : 0.0;
  return d;
}

EigenPair eigenpair(const linalg::SymTridiag& a, std::size_t index, std::span<const double> deflate) {
  if (a.cyclic) return cyclic_eigenpair(a, index, deflate);
  return acyclic_eigenpair(a, index);
}

namespace {

struct GridSolve {
  double value;
  double noise;  // roundoff level of value
  std::vector<double> phi;
  std::vector<double> t;
};

GridSolve solve_grid(const Manifold& m, int k, std::size_t N) {
  const Discretization d = assemble(m, k, N);
  const linalg::SymTridiag a = d.normalized();
  EigenPair ep;
  if (k == 0 && d.periodic) {
    std::vector<double> c(N);
    for (std::size_t i = 0; i < N; ++i) c[i] = std::sqrt(d.mass[i]);
    normalize(c);
    ep = eigenpair(a, 0, c);
  } else {
    ep = eigenpair(a, k == 0 ? 1 : 0);
  }
  const auto [g_lo, g_hi] = a.gershgorin();
  const double scale = std::max(std::abs(g_lo), std::abs(g_hi));
  GridSolve g{ep.value, 64.0 * kEps * scale / std::sqrt(static_cast<double>(N)), std::vector<double>(N), d.t};
  for (std::size_t i = 0; i < N; ++i) g.phi[i] = ep.vector[i] / std::sqrt(d.mass[i]);
  return g;
}

ModeResult solve_mode_impl(const Manifold& m, int k, const SolverOptions& opts, GridSolve* finest) {
  if (opts.levels < 1) throw Error(ErrorCode::BadArgument, "need at least one grid level");
  ModeResult r;
  r.k = k;
  double noise = 0.0;
  for (int level = 0; level < opts.levels; ++level) {
    const std::size_t N = opts.N0 << level;
    GridSolve g = solve_grid(m, k, N);
    r.history.emplace_back(N, g.value);
    noise = std::max(noise, g.noise);
    if (finest && level + 1 == opts.levels) *finest = std::move(g);
  }
  const std::size_t L = r.history.size();
  const double last = r.history.back().second;
  r.extrapolated = L >= 2 ? (4.0 * last - r.history[L - 2].second) / 3.0 : last;
  if (L >= 3) {
    const double d1 = r.history[L - 3].second - r.history[L - 2].second;
    const double d2 = r.history[L - 2].second - last;
    const double floor = 1e-12 * std::abs(last) + noise;
    if (std::abs(d1) > floor && std::abs(d2) > floor) {
      r.observed_order = d1 / d2 > 0.0 ? std::log2(d1 / d2) : std::numeric_limits<double>::quiet_NaN();
      if (!(r.observed_order >= opts.order_lo && r.observed_order <= opts.order_hi))
        throw Error(ErrorCode::NoConvergence, "observed order " + std::to_string(r.observed_order) +
                                                  " for mode k = " + std::to_string(k) +
                                                  " is outside the accepted range");
    }
  }
  return r;
}

}  // namespace

ModeResult solve_mode(const Manifold& m, int k, const SolverOptions& opts) {
  return solve_mode_impl(m, k, opts, nullptr);
}

EigenResult lambda1(const Manifold& m, const SolverOptions& opts) {
  EigenResult r;
  const double fmax = m.profile.max_value();
  double best = std::numeric_limits<double>::infinity();
  GridSolve winner;
  for (int k = 0;; ++k) {
    if (k >= 1 && fiber_eigenvalue(k, m.n) / (fmax * fmax) > best) break;
    GridSolve g;
    ModeResult mr = solve_mode_impl(m, k, opts, &g);
    if (mr.extrapolated < best) {
      best = mr.extrapolated;
      r.mode = k;
      winner = std::move(g);
    }
    r.modes.push_back(std::move(mr));
  }
  for (const auto& mr : r.modes) {
    if (mr.k == r.mode) {
      r.history = mr.history;
      r.extrapolated = mr.extrapolated;
      r.observed_order = mr.observed_order;
    } else if (std::abs(mr.extrapolated - best) <= 1e-6 * best) {
      r.degenerate = true;
    }
  }
  r.lambda1 = r.extrapolated;
  r.t = std::move(winner.t);
  r.phi = std::move(winner.phi);
  r.grid_lambda = winner.value;
  {
    const Discretization d = assemble(m, r.mode, r.t.size());
    std::vector<double> kx(d.N);
    d.stiffness.apply(r.phi, kx);
    double num = dot(r.phi, kx);
    double den = 0.0;
    for (std::size_t i = 0; i < d.N; ++i) den += d.mass[i] * r.phi[i] * r.phi[i];
    r.rayleigh = num / den;
  }
  eigenfunction_u(r, m.profile.boundary() == geometry::Boundary::Periodic);
  return r;
}

namespace {

// Peak of the parabola through the extreme sample and its neighbours. At an
// end of a pole-closed grid the function is even in the distance to the pole
// (half a cell away), so the fit is A + B r^2 through the first two samples.
double refined_peak(std::span<const double> v, std::size_t i, bool periodic) {
  const std::size_t N = v.size();
  if (N < 3) return v[i];
  if (!periodic && (i == 0 || i + 1 == N)) {
    const double u0 = v[i];
    const double u1 = v[i == 0 ? 1 : N - 2];
    return std::abs(u1) < std::abs(u0) ? u0 - (u1 - u0) / 8.0 : u0;
  }
  const double l = v[(i + N - 1) % N];
  const double r = v[(i + 1) % N];
  const double curv = l - 2.0 * v[i] + r;
  if (curv == 0.0) return v[i];
  return v[i] - (r - l) * (r - l) / (8.0 * curv);
}

}  // namespace

Normalized eigenfunction_u(std::span<const double> phi, int mode, const NormalizeOptions& opts) {
  if (phi.empty()) throw Error(ErrorCode::DegenerateRange, "no eigenfunction samples");
  Normalized out;
  out.u.assign(phi.begin(), phi.end());
  const auto [mn_it, mx_it] = std::minmax_element(phi.begin(), phi.end());
  double mx = *mx_it;
  double mn = *mn_it;
  if (opts.refine) {
    mx = std::max(mx, refined_peak(phi, static_cast<std::size_t>(mx_it - phi.begin()), opts.periodic));
    mn = std::min(mn, refined_peak(phi, static_cast<std::size_t>(mn_it - phi.begin()), opts.periodic));
  }
  if (mode >= 1) {
    const double s = std::max(std::abs(mx), std::abs(mn));
    if (s == 0.0) throw Error(ErrorCode::DegenerateRange, "eigenfunction vanishes identically");
    const double sign = std::abs(mx) >= std::abs(mn) ? 1.0 : -1.0;
    for (double& v : out.u) v = sign * v / s;
    out.a = 0.0;
    return out;
  }
  if (!(mx > mn)) throw Error(ErrorCode::DegenerateRange, "sup phi equals inf phi");
  double sign = 1.0;
  if (mx + mn < 0.0) {
    sign = -1.0;
    std::swap(mx, mn);
    mx = -mx;
    mn = -mn;
  }
  const double s = 0.5 * (mx - mn);
  out.a = (mx + mn) / (mx - mn);
  for (double& v : out.u) v = sign * v / s - out.a;
  return out;
}

void eigenfunction_u(EigenResult& r, bool periodic) {
  NormalizeOptions opts;
  opts.refine = true;
  opts.periodic = periodic;
  Normalized nz = eigenfunction_u(r.phi, r.mode, opts);
  r.u = std::move(nz.u);
  r.a = nz.a;
}

GroundState schrodinger_ground(const Discretization& d, std::span<const double> V) {
  if (d.k != 0) throw Error(ErrorCode::BadArgument, "ground state needs the k = 0 discretization");
  if (V.size() != d.N) throw Error(ErrorCode::BadArgument, "potential must be sampled on the grid");
  const std::size_t N = d.N;
  linalg::SymTridiag a = d.normalized();
  for (std::size_t i = 0; i < N; ++i) a.diag[i] -= V[i];
  const EigenPair ep = eigenpair(a, 0);

  std::vector<double> w(N);
  for (std::size_t i = 0; i < N; ++i) w[i] = ep.vector[i] / std::sqrt(d.mass[i]);
  if (std::accumulate(w.begin(), w.end(), 0.0) < 0.0)
    for (double& v : w) v = -v;
  const double wmax = *std::max_element(w.begin(), w.end());
  const double wmin = *std::min_element(w.begin(), w.end());
  if (wmin < -1e-10 * wmax) throw Error(ErrorCode::SignChange, "ground state changes sign");

  const double total = std::accumulate(d.mass.begin(), d.mass.end(), 0.0);
  auto mean = [&](auto&& fn) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += d.mass[i] * fn(i);
    return s / total;
  };

  GroundState g;
  g.sigma_tilde = -ep.value;
  const double wbar0 = mean([&](std::size_t i) { return w[i]; });
  std::vector<double> dev(N);
  for (std::size_t i = 0; i < N; ++i) dev[i] = w[i] / wbar0 - 1.0;

  // Deviation form: with w = 1 + d and mean(d) = 0, the pencil reads
  // K d = (V - s) M (1 + d) with s = mean(V (1 + d)). For a weak potential
  // this fixed point contracts and resolves d to full relative accuracy.
  {
    linalg::SymTridiag reduced;
    reduced.diag.assign(d.stiffness.diag.begin() + 1, d.stiffness.diag.end());
    reduced.off.assign(d.stiffness.off.begin() + 1, d.stiffness.off.end());
    linalg::SpdFactor factor(reduced, 0.0);
    std::vector<double> trial = dev;
    std::vector<double> rhs(N - 1);
    std::vector<double> y(N - 1);
    double sigma = g.sigma_tilde;
    double prev_change = std::numeric_limits<double>::infinity();
    bool ok = factor.positive();
    for (int it = 0; ok && it < 200; ++it) {
      sigma = mean([&](std::size_t i) { return V[i] * (1.0 + trial[i]); });
      for (std::size_t i = 1; i < N; ++i) rhs[i - 1] = (V[i] - sigma) * d.mass[i] * (1.0 + trial[i]);
      factor.solve(rhs, y);
      std::vector<double> next(N, 0.0);
      std::copy(y.begin(), y.end(), next.begin() + 1);
      const double shift = mean([&](std::size_t i) { return next[i]; });
      double change = 0.0;
      double size = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        next[i] -= shift;
        change = std::max(change, std::abs(next[i] - trial[i]));
        size = std::max(size, std::abs(next[i]));
      }
      trial = std::move(next);
      if (change <= 4.0 * kEps * size || change == 0.0) {
        g.polished = true;
        break;
      }
      if (it > 5 && change > prev_change) ok = false;
      prev_change = change;
    }
    if (g.polished) {
      dev = std::move(trial);
      g.sigma_tilde = mean([&](std::size_t i) { return V[i] * (1.0 + dev[i]); });
    }
  }

  const double norm = std::sqrt(mean([&](std::size_t i) { return (1.0 + dev[i]) * (1.0 + dev[i]); }));
  g.w.resize(N);
  for (std::size_t i = 0; i < N; ++i) g.w[i] = (1.0 + dev[i]) / norm;
  g.w_bar = 1.0 / norm;
  g.dev = std::move(dev);
  if (*std::min_element(g.w.begin(), g.w.end()) < -1e-10) throw Error(ErrorCode::SignChange, "ground state changes sign");
  return g;
}

JField build_J(const GroundState& g, double tau) {
  if (!(tau > 1.0)) throw Error(ErrorCode::BadArgument, "build_J needs tau > 1");
  for (double v : g.w)
    if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveGround, "ground state is not positive");
  if (!(g.w_bar > 0.0)) throw Error(ErrorCode::NonPositiveGround, "ground state mean is not positive");
  const double gamma = 1.0 / (tau - 1.0);
  JField out;
  const std::size_t N = g.w.size();
  out.J.resize(N);
  out.dev.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double ratio_dev = g.dev.size() == N ? g.dev[i] : g.w[i] / g.w_bar - 1.0;
    out.dev[i] = std::expm1(-gamma * std::log1p(ratio_dev));
    out.J[i] = 1.0 + out.dev[i];
  }
  return out;
}

std::vector<double> gradient(const Discretization& d, std::span<const double> u) {
  const std::size_t N = d.N;
  std::vector<double> g(N);
  for (std::size_t i = 0; i < N; ++i) {
    if (d.periodic) {
      g[i] = (u[(i + 1) % N] - u[(i + N - 1) % N]) / (2.0 * d.h);
    } else if (i == 0) {
      g[i] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * d.h);
    } else if (i + 1 == N) {
      g[i] = (3.0 * u[N - 1] - 4.0 * u[N - 2] + u[N - 3]) / (2.0 * d.h);
    } else {
      g[i] = (u[i + 1] - u[i - 1]) / (2.0 * d.h);
    }
  }
  return g;
}

double residual_J_equation(const Discretization& d, const JField& J, std::span<const double> rho0,
                           double tau, double sigma) {
  const std::vector<double> lap = d.laplacian(J.dev);
  const std::vector<double> grad = gradient(d, J.dev);
  const std::size_t lo = d.periodic ? 0 : 1;
  const std::size_t hi = d.periodic ? d.N : d.N - 1;
  double worst = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double r = lap[i] - tau * grad[i] * grad[i] / J.J[i] + (sigma - 2.0 * rho0[i]) * J.J[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace sgv::spectral
