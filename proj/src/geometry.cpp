#include "sgv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "sgv/error.hpp"
#include "sgv/quadrature.hpp"

namespace sgv::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClosureTol = 1e-10;

double wrap(double t, double length) {
  double r = std::fmod(t, length);
  if (r < 0.0) r += length;
  return r;
}

}  // namespace

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Constant: return "constant";
    case ProfileKind::CosinePerturbed: return "cosine-perturbed";
    case ProfileKind::SineSphere: return "sine-sphere";
    case ProfileKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

std::string to_string(Boundary boundary) {
  return boundary == Boundary::Periodic ? "periodic" : "pole-closed";
}

WarpProfile WarpProfile::constant(double length, double c) {
  WarpProfile w;
  w.kind_ = ProfileKind::Constant;
  w.length_ = length;
  w.c_ = c;
  return w;
}

WarpProfile WarpProfile::cosine_perturbed(double length, double c, double beta) {
  WarpProfile w;
  w.kind_ = ProfileKind::CosinePerturbed;
  w.length_ = length;
  w.c_ = c;
  w.beta_ = beta;
  return w;
}

WarpProfile WarpProfile::sine_sphere(double radius) {
  WarpProfile w;
  w.kind_ = ProfileKind::SineSphere;
  w.boundary_ = Boundary::PoleClosed;
  w.length_ = kPi * radius;
  w.c_ = radius;
  return w;
}

WarpProfile WarpProfile::tabulated(double length, std::vector<double> samples, Boundary boundary) {
  WarpProfile w;
  w.kind_ = ProfileKind::Tabulated;
  w.boundary_ = boundary;
  w.length_ = length;
  if (boundary == Boundary::Periodic) {
    if (samples.size() >= 2 && std::abs(samples.front() - samples.back()) > kClosureTol)
      throw Error(ErrorCode::BadArgument, "periodic table must repeat its first sample at t = L");
    w.spline_ = CubicSpline::periodic(length, samples);
  } else {
    w.spline_ = CubicSpline::clamped(length, samples, 1.0, -1.0);
  }
  return w;
}

std::span<const double> WarpProfile::samples() const {
  return spline_ ? spline_->samples() : std::span<const double>{};
}

double WarpProfile::value(double t) const {
  switch (kind_) {
    case ProfileKind::Constant: return c_;
    case ProfileKind::CosinePerturbed: return c_ * (1.0 + beta_ * std::cos(2.0 * kPi * t / length_));
    case ProfileKind::SineSphere: return c_ * std::sin(t / c_);
    case ProfileKind::Tabulated: return spline_->value(t);
  }
  return 0.0;
}

double WarpProfile::d1(double t) const {
  const double w = 2.0 * kPi / length_;
  switch (kind_) {
    case ProfileKind::Constant: return 0.0;
    case ProfileKind::CosinePerturbed: return -c_ * beta_ * w * std::sin(w * t);
    case ProfileKind::SineSphere: return std::cos(t / c_);
    case ProfileKind::Tabulated: return spline_->d1(t);
  }
  return 0.0;
}

double WarpProfile::d2(double t) const {
  const double w = 2.0 * kPi / length_;
  switch (kind_) {
    case ProfileKind::Constant: return 0.0;
    case ProfileKind::CosinePerturbed: return -c_ * beta_ * w * w * std::cos(w * t);
    case ProfileKind::SineSphere: return -std::sin(t / c_) / c_;
    case ProfileKind::Tabulated: return spline_->d2(t);
  }
  return 0.0;
}

double WarpProfile::d3(double t) const {
  const double w = 2.0 * kPi / length_;
  switch (kind_) {
    case ProfileKind::Constant: return 0.0;
    case ProfileKind::CosinePerturbed: return c_ * beta_ * w * w * w * std::sin(w * t);
    case ProfileKind::SineSphere: return -std::cos(t / c_) / (c_ * c_);
    case ProfileKind::Tabulated: return spline_->d3(t);
  }
  return 0.0;
}

double WarpProfile::second_over_value(double t) const {
  const double w = 2.0 * kPi / length_;
  switch (kind_) {
    case ProfileKind::Constant: return 0.0;
    case ProfileKind::CosinePerturbed: {
      const double cs = std::cos(w * t);
      return -beta_ * w * w * cs / (1.0 + beta_ * cs);
    }
    case ProfileKind::SineSphere: return -1.0 / (c_ * c_);
    case ProfileKind::Tabulated: return spline_->d2(t) / spline_->value(t);
  }
  return 0.0;
}

double WarpProfile::tangential_term(double t) const {
  switch (kind_) {
    case ProfileKind::SineSphere: return 1.0 / (c_ * c_);
    default: {
      const double f = value(t);
      const double df = d1(t);
      return (1.0 - df * df) / (f * f);
    }
  }
}

std::vector<double> WarpProfile::breakpoints() const {
  if (spline_) return spline_->knots();
  return {0.0, length_};
}

double WarpProfile::max_value() const {
  switch (kind_) {
    case ProfileKind::Constant: return c_;
    case ProfileKind::CosinePerturbed: return c_ * (1.0 + std::abs(beta_));
    case ProfileKind::SineSphere: return c_;
    case ProfileKind::Tabulated: break;
  }
  double best = -std::numeric_limits<double>::infinity();
  const std::size_t count = 64 * (spline_->samples().size() - 1);
  for (std::size_t i = 0; i <= count; ++i)
    best = std::max(best, value(length_ * static_cast<double>(i) / static_cast<double>(count)));
  return best;
}

double WarpProfile::min_value() const {
  switch (kind_) {
    case ProfileKind::Constant: return c_;
    case ProfileKind::CosinePerturbed: return c_ * (1.0 - std::abs(beta_));
    case ProfileKind::SineSphere: return 0.0;
    case ProfileKind::Tabulated: break;
  }
  double best = std::numeric_limits<double>::infinity();
  const std::size_t count = 64 * (spline_->samples().size() - 1);
  for (std::size_t i = 0; i <= count; ++i)
    best = std::min(best, value(length_ * static_cast<double>(i) / static_cast<double>(count)));
  return best;
}

bool WarpProfile::is_pole(double t) const {
  if (boundary_ != Boundary::PoleClosed) return false;
  const double eps = 1e-14 * length_;
  return t <= eps || t >= length_ - eps;
}

double Manifold::fiber_scale() const {
  switch (profile.kind()) {
    case ProfileKind::Constant:
    case ProfileKind::CosinePerturbed: return 2.0 * kPi * profile.c();
    default: return 2.0 * kPi * profile.max_value();
  }
}

void validate(const Manifold& m) {
  const WarpProfile& w = m.profile;
  if (m.n < 2) throw Error(ErrorCode::BadArgument, "dimension n must be at least 2");
  if (!(w.length() > 0.0) || !std::isfinite(w.length()))
    throw Error(ErrorCode::BadArgument, "base length L must be positive and finite");
  switch (w.kind()) {
    case ProfileKind::Constant:
      if (!(w.c() > 0.0)) throw Error(ErrorCode::NonPositiveWarp, "constant warp must be positive");
      break;
    case ProfileKind::CosinePerturbed:
      if (!(w.c() > 0.0)) throw Error(ErrorCode::NonPositiveWarp, "mean warp c must be positive");
      if (!(std::abs(w.beta()) < 1.0))
        throw Error(ErrorCode::NonPositiveWarp, "cosine amplitude needs |beta| < 1 to keep f > 0");
      break;
    case ProfileKind::SineSphere:
      if (!(w.radius() > 0.0)) throw Error(ErrorCode::NonPositiveWarp, "sphere radius must be positive");
      break;
    case ProfileKind::Tabulated: {
      auto s = w.samples();
      if (w.boundary() == Boundary::PoleClosed) {
        if (std::abs(s.front()) > kClosureTol || std::abs(s.back()) > kClosureTol)
          throw Error(ErrorCode::BadPoleClosure, "pole-closed table must vanish at both ends");
      }
      const std::size_t count = 64 * (s.size() - 1);
      for (std::size_t i = 1; i < count; ++i) {
        const double t = w.length() * static_cast<double>(i) / static_cast<double>(count);
        if (!(w.value(t) > 0.0))
          throw Error(ErrorCode::NonPositiveWarp, "tabulated warp is not positive at t = " + std::to_string(t));
      }
      if (w.boundary() == Boundary::Periodic && !(s.front() > 0.0))
        throw Error(ErrorCode::NonPositiveWarp, "periodic warp must be positive at t = 0");
      break;
    }
  }
}

Manifold make_manifold(const ManifoldSpec& spec) {
  Manifold m;
  m.n = spec.n;
  m.id = spec.id;
  auto mean = [&]() {
    if (spec.c) return *spec.c;
    if (spec.fiber) return *spec.fiber / (2.0 * kPi);
    return 1.0;
  };
  if (spec.kind == "flat-torus" || spec.kind == "constant") {
    m.profile = WarpProfile::constant(spec.L, mean());
  } else if (spec.kind == "cosine-perturbed") {
    m.profile = WarpProfile::cosine_perturbed(spec.L, mean(), spec.beta);
  } else if (spec.kind == "sine-sphere" || spec.kind == "round-sphere") {
    m.profile = WarpProfile::sine_sphere(spec.R);
  } else if (spec.kind == "tabulated") {
    Boundary b;
    if (spec.boundary == "periodic")
      b = Boundary::Periodic;
    else if (spec.boundary == "pole-closed")
      b = Boundary::PoleClosed;
    else
      throw Error(ErrorCode::BadArgument, "unknown boundary '" + spec.boundary + "'");
    m.profile = WarpProfile::tabulated(spec.L, spec.samples, b);
  } else {
    throw Error(ErrorCode::BadArgument, "unknown manifold kind '" + spec.kind + "'");
  }
  validate(m);
  return m;
}

double ricci_min(const Manifold& m, double t) {
  const WarpProfile& w = m.profile;
  const double n1 = static_cast<double>(m.n - 1);
  if (w.boundary() == Boundary::Periodic) {
    t = wrap(t, w.length());
  } else if (t < 0.0 || t > w.length()) {
    throw Error(ErrorCode::BadArgument, "t outside [0, L]");
  }
  if (w.kind() != ProfileKind::SineSphere && w.is_pole(t)) {
    // Smooth closure gives f = +-(t - pole) + O(|t - pole|^3); both Ricci
    // eigenvalues tend to -(n-1) f'''/f'. Without f'' = 0 there is no limit.
    const double tp = t < 0.5 * w.length() ? 0.0 : w.length();
    const double scale = 1.0 / w.length();
    if (std::abs(w.d2(tp)) > 1e-8 * std::max(scale, 1.0))
      throw Error(ErrorCode::PoleEvaluation, "curvature has no limit at the pole (f'' != 0 there)");
    return -n1 * w.d3(tp) / w.d1(tp);
  }
  const double radial = -w.second_over_value(t);
  if (m.n == 2) return radial;
  const double tangential = radial + static_cast<double>(m.n - 2) * w.tangential_term(t);
  return std::min(n1 * radial, tangential);
}

double rho_H(const Manifold& m, double H, double t) {
  return std::max(-ricci_min(m, t) + static_cast<double>(m.n - 1) * H, 0.0);
}

SampledField rho_field(const Manifold& m, std::size_t samples) {
  SampledField out;
  const double h = m.profile.length() / static_cast<double>(samples);
  out.t.resize(samples);
  out.values.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    out.t[i] = (static_cast<double>(i) + 0.5) * h;
    out.values[i] = ricci_min(m, out.t[i]);
  }
  return out;
}

SampledField rho_H_field(const Manifold& m, double H, std::size_t samples) {
  SampledField out = rho_field(m, samples);
  const double shift = static_cast<double>(m.n - 1) * H;
  for (double& v : out.values) v = std::max(-v + shift, 0.0);
  return out;
}

double fiber_volume(int n) {
  const double half = 0.5 * static_cast<double>(n);
  return 2.0 * std::pow(kPi, half) / std::tgamma(half);
}

namespace {

double warp_power_integral(const Manifold& m) {
  const auto breaks = m.profile.breakpoints();
  const double e = static_cast<double>(m.n - 1);
  auto res = quad::piecewise([&](double t) { return std::pow(m.profile.value(t), e); }, breaks, 1e-13);
  return res.value;
}

}  // namespace

double volume(const Manifold& m) { return fiber_volume(m.n) * warp_power_integral(m); }

double kbar(const Manifold& m, double p, double H) {
  if (!(p > 0.5 * static_cast<double>(m.n)))
    throw Error(ErrorCode::BadExponent, "kbar needs p > n/2");
  const double L = m.profile.length();
  const double shift = static_cast<double>(m.n - 1) * H;
  auto excess = [&](double t) { return -ricci_min(m, t) + shift; };

  // Split at sign changes of the excess so every panel sees a smooth integrand.
  std::vector<double> breaks = m.profile.breakpoints();
  constexpr std::size_t scan = 4096;
  double t_prev = 0.5 * L / scan;
  double g_prev = excess(t_prev);
  for (std::size_t i = 1; i < scan; ++i) {
    const double t = (static_cast<double>(i) + 0.5) * L / scan;
    const double g = excess(t);
    if ((g_prev > 0.0) != (g > 0.0)) {
      double a = t_prev, b = t;
      const bool a_pos = g_prev > 0.0;
      for (int it = 0; it < 200 && b - a > 4.0 * std::numeric_limits<double>::epsilon() * L; ++it) {
        const double mid = 0.5 * (a + b);
        if ((excess(mid) > 0.0) == a_pos)
          a = mid;
        else
          b = mid;
      }
      breaks.push_back(0.5 * (a + b));
    }
    t_prev = t;
    g_prev = g;
  }
  breaks.push_back(0.0);
  breaks.push_back(L);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const double e = static_cast<double>(m.n - 1);
  auto res = quad::piecewise(
      [&](double t) {
        const double r = std::max(excess(t), 0.0);
        return r == 0.0 ? 0.0 : std::pow(r, p) * std::pow(m.profile.value(t), e);
      },
      breaks, 1e-13);
  if (res.value == 0.0) return 0.0;
  return std::pow(res.value / warp_power_integral(m), 1.0 / p);
}

DiameterBracket graph_diameter(const Manifold& m, std::size_t nt, std::size_t ntheta) {
  if (m.n != 2) throw Error(ErrorCode::BadArgument, "graph diameter is implemented for surfaces (n = 2)");
  const WarpProfile& w = m.profile;
  const double L = w.length();
  const bool poles = w.boundary() == Boundary::PoleClosed;
  const double ht = L / static_cast<double>(nt);
  const double fmax = w.max_value();
  if (ntheta == 0) {
    ntheta = static_cast<std::size_t>(std::ceil(2.0 * kPi * fmax / ht));
    ntheta = std::max<std::size_t>(8, ntheta + (ntheta % 2));
  }
  const double hth = 2.0 * kPi / static_cast<double>(ntheta);

  // Rows of the grid: periodic rows 0..nt-1; pole-closed rows 1..nt-1 plus
  // two pole nodes.
  const std::size_t row_begin = poles ? 1 : 0;
  const std::size_t row_end = nt;  // exclusive
  const std::size_t rows = row_end - row_begin;
  const std::size_t ring_nodes = rows * ntheta;
  const std::size_t north = ring_nodes;
  const std::size_t south = ring_nodes + 1;
  const std::size_t total = ring_nodes + (poles ? 2 : 0);
  auto node = [&](std::size_t row, std::size_t j) { return (row - row_begin) * ntheta + j; };

  struct Offset {
    int di, dj;
  };
  static constexpr Offset offsets[] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},   {1, -1},
                                       {-1, 1}, {-1, -1}, {1, 2},  {1, -2}, {-1, 2}, {-1, -2},
                                       {2, 1},  {2, -1}, {-2, 1}, {-2, -1}};
  constexpr std::size_t n_off = std::size(offsets);

  // Edge lengths depend only on the row (rotational symmetry).
  const auto& rule = quad::gauss16();
  std::vector<double> weight(nt * n_off, 0.0);
  for (std::size_t row = row_begin; row < row_end; ++row) {
    const double t0 = static_cast<double>(row) * ht;
    for (std::size_t k = 0; k < n_off; ++k) {
      const double dt = offsets[k].di * ht;
      const double dth = offsets[k].dj * hth;
      double len = 0.0;
      if (offsets[k].di == 0) {
        len = w.value(t0) * std::abs(dth);
      } else {
        for (std::size_t q = 0; q < quad::kNodes; ++q) {
          const double s = 0.5 * (rule.x[q] + 1.0);
          const double f = w.value(t0 + s * dt);
          len += 0.5 * rule.w[q] * std::sqrt(dt * dt + f * f * dth * dth);
        }
      }
      weight[row * n_off + k] = len;
    }
  }

  auto relax = [&](std::vector<double>& dist, auto& heap, std::size_t v, double d) {
    if (d < dist[v]) {
      dist[v] = d;
      heap.emplace(d, v);
    }
  };

  double raw = 0.0;
  std::vector<double> dist(total);
  auto run = [&](std::size_t source) {
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[v]) continue;
      if (poles && (v == north || v == south)) {
        const bool is_north = v == north;
        for (std::size_t dr = 1; dr <= 2 && dr < nt; ++dr) {
          const std::size_t row = is_north ? dr : nt - dr;
          const double len = static_cast<double>(dr) * ht;
          for (std::size_t j = 0; j < ntheta; ++j) relax(dist, heap, node(row, j), d + len);
        }
        continue;
      }
      const std::size_t row = v / ntheta + row_begin;
      const std::size_t j = v % ntheta;
      for (std::size_t k = 0; k < n_off; ++k) {
        const long target_row = static_cast<long>(row) + offsets[k].di;
        const double len = weight[row * n_off + k];
        std::size_t target;
        if (poles) {
          if (target_row <= 0) {
            relax(dist, heap, north, d + static_cast<double>(row) * ht);
            continue;
          }
          if (target_row >= static_cast<long>(nt)) {
            relax(dist, heap, south, d + static_cast<double>(nt - row) * ht);
            continue;
          }
          target = static_cast<std::size_t>(target_row);
        } else {
          const long r = (target_row % static_cast<long>(nt) + static_cast<long>(nt)) % static_cast<long>(nt);
          target = static_cast<std::size_t>(r);
        }
        const long jj = (static_cast<long>(j) + offsets[k].dj % static_cast<long>(ntheta) +
                         static_cast<long>(ntheta)) % static_cast<long>(ntheta);
        relax(dist, heap, node(target, static_cast<std::size_t>(jj)), d + len);
      }
    }
    for (double d : dist) raw = std::max(raw, d);
  };

  // A profile symmetric under t -> L - t has mirror-image eccentricities, so
  // half of the source rows suffice.
  bool mirror = !poles;
  for (std::size_t row = 1; mirror && row < nt; ++row) {
    const double a = w.value(static_cast<double>(row) * ht);
    const double b = w.value(static_cast<double>(nt - row) * ht);
    mirror = std::abs(a - b) <= 1e-14 * std::max(std::abs(a), 1.0);
  }
  const std::size_t last_row = mirror ? nt / 2 + 1 : row_end;
  for (std::size_t row = row_begin; row < last_row; ++row) run(node(row, 0));
  if (poles) {
    run(north);
    run(south);
  }

  DiameterBracket out;
  out.method = "graph";
  out.grid_t = nt;
  out.grid_theta = ntheta;
  // Any point lies within ht/2 of a source row after a rotation, and within
  // ht/2 + fmax*hth/2 of some node.
  out.hi = raw + ht + 0.5 * fmax * hth;
  out.lo = raw / (1.0 + kStencilKappa);
  out.converged = true;
  return out;
}

DiameterBracket diameter(const Manifold& m, const DiameterOptions& opts) {
  const WarpProfile& w = m.profile;
  const double L = w.length();
  DiameterBracket out;
  if (w.boundary() == Boundary::PoleClosed) {
    // Every point reaches a pole within min(t, L - t) along a meridian, and
    // the poles are exactly L apart.
    out.lo = out.hi = L;
    out.method = "pole-to-pole";
    return out;
  }
  if (w.kind() == ProfileKind::Constant) {
    out.lo = out.hi = std::hypot(0.5 * L, kPi * w.c());
    out.method = "closed-form";
    return out;
  }
  // Metric comparison with the flat products at the extreme warp values.
  out.lo = std::hypot(0.5 * L, kPi * w.min_value());
  out.hi = std::hypot(0.5 * L, kPi * w.max_value());
  out.method = "comparison";
  out.converged = out.hi - out.lo <= opts.tol;
  if (out.converged || m.n != 2) return out;

  std::size_t nt = opts.base_grid;
  for (int level = 0; level <= opts.max_refine; ++level, nt *= 2) {
    const DiameterBracket g = graph_diameter(m, nt);
    if (g.lo > out.lo) out.lo = g.lo;
    if (g.hi < out.hi) {
      out.hi = g.hi;
      out.method = "graph";
    }
    out.grid_t = g.grid_t;
    out.grid_theta = g.grid_theta;
    if (out.lo > out.hi) out.lo = out.hi;
    if (out.hi - out.lo <= opts.tol) break;
  }
  out.converged = out.hi - out.lo <= opts.tol;
  return out;
}

GeometryReport geometry_report(const Manifold& m, double p, double H, std::size_t samples,
                               const DiameterOptions& opts) {
  GeometryReport r;
  r.p = p;
  r.H = H;
  r.rho = rho_field(m, samples);
  r.rho_H = rho_H_field(m, H, samples);
  r.kbar = kbar(m, p, H);
  r.volume = volume(m);
  const DiameterBracket d = diameter(m, opts);
  r.diameter_lo = d.lo;
  r.diameter_hi = d.hi;
  return r;
}

}  // namespace sgv::geometry
