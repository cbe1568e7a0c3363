#include "sgv/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <thread>

#include "sgv/error.hpp"
#include "sgv/log.hpp"
#include "sgv/modelode.hpp"

namespace sgv::verify {

namespace {

constexpr double kPi = std::numbers::pi;

double tau_of(double delta) { return (3.0 + 4.0 * delta) / (2.0 * delta); }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

constants::LedgerInput ledger_input(const Manifold& m, double p, double D, double delta,
                                    const VerifyOptions& opts) {
  constants::LedgerInput in;
  in.n = m.n;
  in.p = p;
  in.D = D;
  in.delta = delta;
  in.C_s = opts.C_s;
  in.Lambda_rough = opts.Lambda_rough;
  return in;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::size_t check_grid(const spectral::SolverOptions& solver) {
  return solver.N0 << (solver.levels - 1);
}

AuxiliaryFields auxiliary_fields(const Manifold& m, double delta, std::size_t N) {
  geometry::validate(m);
  if (!(delta > 0.0 && delta < constants::delta_root()))
    throw Error(ErrorCode::DeltaTooLarge, "delta must lie in (0, sqrt(10) - 3)");
  AuxiliaryFields a;
  a.delta = delta;
  a.tau = tau_of(delta);
  a.d = spectral::assemble(m, 0, N);
  a.rho0.resize(N);
  std::vector<double> V(N);
  for (std::size_t i = 0; i < N; ++i) {
    a.rho0[i] = geometry::rho_H(m, 0.0, a.d.t[i]);
    V[i] = 2.0 * (a.tau - 1.0) * a.rho0[i];
  }
  a.ground = spectral::schrodinger_ground(a.d, V);
  a.sigma = a.ground.sigma_tilde / (a.tau - 1.0);
  a.J = spectral::build_J(a.ground, a.tau);
  a.J_deviation = max_abs(a.J.dev);
  a.residual = spectral::residual_J_equation(a.d, a.J, a.rho0, a.tau, a.sigma);
  return a;
}

SigmaCheck check_sigma_bound(const Manifold& m, double delta, double p, std::size_t N) {
  const AuxiliaryFields a = auxiliary_fields(m, delta, N);
  SigmaCheck s;
  s.sigma = a.sigma;
  s.kbar = geometry::kbar(m, p, 0.0);
  s.margin = 4.0 * s.kbar - s.sigma;
  return s;
}

JCheck check_J_bounds(const Manifold& m, double delta, double p, const VerifyOptions& opts) {
  JCheck c;
  c.kbar = geometry::kbar(m, p, 0.0);
  const double D = geometry::diameter(m, opts.diameter).hi;
  c.eps_max = constants::epsilon_max(ledger_input(m, p, D, delta, opts)).eps_max;
  c.hypothesis_met = c.kbar <= c.eps_max;
  if (!c.hypothesis_met)
    log::info(m.id + ": kbar " + format_value(c.kbar) + " exceeds eps_max " + format_value(c.eps_max) +
              "; J bound is informational");
  c.deviation = auxiliary_fields(m, delta, check_grid(opts.solver)).J_deviation;
  return c;
}

GradientCheck check_gradient_estimate(const spectral::EigenResult& eig, const AuxiliaryFields& aux,
                                      const constants::GradientConstants& g, int n) {
  const std::size_t N = aux.d.N;
  if (eig.u.size() != N) throw Error(ErrorCode::BadArgument, "eigenfunction and J grids differ");
  const int k = eig.mode;
  if (n > 2 && k >= 2)
    throw Error(ErrorCode::BadArgument, "gradient check covers fiber modes k <= 1 when n > 2");
  const double lambda1 = eig.lambda1;
  const double eta = 1.0 + g.delta;
  GradientCheck r;
  r.lambda_tilde = g.C1 * lambda1 + g.C2;
  r.tolerance = 1e-6 * r.lambda_tilde;
  r.max_Q = -std::numeric_limits<double>::infinity();
  const std::vector<double> du = spectral::gradient(aux.d, eig.u);
  const double c = static_cast<double>(k) * static_cast<double>(k);
  for (std::size_t i = 0; i < N; ++i) {
    const double J = aux.J.J[i];
    const double u = std::clamp(eig.u[i], -1.0, 1.0);
    double q;
    if (k == 0) {
      q = J * du[i] * du[i] - r.lambda_tilde * (1.0 - u * u) - 2.0 * eig.a * lambda1 * modelode::z(u, eta);
    } else {
      // a = 0 here; y^2 = 1 puts all of u on the profile, y^2 = 0 all on the fiber.
      const double fiber = c * u * u / (aux.d.f[i] * aux.d.f[i]);
      const double q1 = J * du[i] * du[i] - r.lambda_tilde * (1.0 - u * u);
      const double q0 = J * fiber - r.lambda_tilde;
      q = std::max(q0, q1);
    }
    if (q > r.max_Q) {
      r.max_Q = q;
      r.worst_t = aux.d.t[i];
    }
  }
  r.holds = r.max_Q <= r.tolerance;
  return r;
}

GradientCheck check_gradient_estimate(const Manifold& m, double delta, const VerifyOptions& opts) {
  const spectral::EigenResult eig = spectral::lambda1(m, opts.solver);
  const AuxiliaryFields aux = auxiliary_fields(m, delta, check_grid(opts.solver));
  const auto g = constants::gradient_constants(delta, std::max(aux.sigma, 0.0), opts.Lambda_rough);
  return check_gradient_estimate(eig, aux, g, m.n);
}

bool VerificationRecord::passed() const {
  if (!error.empty()) return false;
  if (!hypothesis_met) return true;
  return theorem_ok && sigma_ok && J_ok && gradient_ok;
}

VerificationRecord check_main_theorem(const Manifold& m, double alpha_target, double p,
                                      const VerifyOptions& opts) {
  geometry::validate(m);
  VerificationRecord r;
  r.id = m.id;
  r.p = p;

  const auto D = geometry::diameter(m, opts.diameter);
  r.diameter_lo = D.lo;
  r.diameter_hi = D.hi;
  r.diameter_method = D.method;
  r.kbar = geometry::kbar(m, p, 0.0);

  const auto search = constants::delta_for_alpha(alpha_target, ledger_input(m, p, D.hi, 0.1, opts));
  r.delta = search.delta;
  r.alpha = search.alpha;
  r.eps_max = search.eps_max;
  r.hypothesis_met = r.kbar <= r.eps_max;

  const spectral::EigenResult eig = spectral::lambda1(m, opts.solver);
  r.lambda1 = eig.lambda1;
  r.mode = eig.mode;
  r.bound = r.alpha * kPi * kPi / (D.hi * D.hi);
  r.theorem_margin = r.lambda1 - r.bound;
  r.sharpness_ratio = r.lambda1 * D.hi * D.hi / (kPi * kPi);

  const AuxiliaryFields aux = auxiliary_fields(m, r.delta, check_grid(opts.solver));
  r.sigma_measured = aux.sigma;
  r.sigma_bound_margin = 4.0 * r.kbar - aux.sigma;
  r.J_deviation = aux.J_deviation;
  const auto g = constants::gradient_constants(r.delta, std::max(aux.sigma, 0.0), opts.Lambda_rough);
  const GradientCheck gc = check_gradient_estimate(eig, aux, g, m.n);
  r.gradient_margin = gc.max_Q;
  r.lambda_tilde = gc.lambda_tilde;

  if (r.hypothesis_met) {
    r.theorem_ok = r.theorem_margin >= -1e-9 * r.lambda1;
    r.sigma_ok = r.sigma_measured >= -1e-12 && r.sigma_measured <= 4.0 * r.kbar + 1e-12;
    r.J_ok = r.J_deviation <= r.delta + 1e-9;
    r.gradient_ok = gc.holds;
  }
  log::debug(r.id + ": lambda1 " + format_value(r.lambda1) + ", bound " + format_value(r.bound) +
             ", kbar " + format_value(r.kbar) + ", eps_max " + format_value(r.eps_max));
  return r;
}

geometry::ManifoldSpec family_member(const SweepFamily& family, double value) {
  geometry::ManifoldSpec s = family.base;
  const std::string& p = family.parameter;
  if (p == "beta") {
    s.beta = value;
  } else if (p == "L") {
    s.L = value;
  } else if (p == "fiber") {
    s.fiber = value;
    s.c.reset();
  } else if (p == "c") {
    s.c = value;
    s.fiber.reset();
  } else if (p == "R") {
    s.R = value;
  } else if (p == "aspect") {
    s.fiber = value * s.L;
    s.c.reset();
  } else {
    throw Error(ErrorCode::BadArgument, "unknown sweep parameter '" + p + "'");
  }
  const std::string stem = family.base.id.empty() ? family.base.kind : family.base.id;
  s.id = stem + "/" + p + "=" + format_value(value);
  return s;
}

SweepSummary summarize(const std::vector<VerificationRecord>& records, bool flat_family) {
  SweepSummary s;
  s.rows = records.size();
  for (const auto& r : records) {
    if (!r.passed()) ++s.failed;
    if (!r.error.empty()) continue;
    if (r.hypothesis_met) {
      ++s.hypothesis_met;
      s.min_theorem_margin = std::min(s.min_theorem_margin.value_or(r.theorem_margin), r.theorem_margin);
    }
    if (flat_family) {
      const double dev = std::abs(r.sharpness_ratio - 1.0);
      s.max_sharpness_deviation = std::max(s.max_sharpness_deviation.value_or(dev), dev);
    }
  }
  return s;
}

SweepResult sweep(const SweepFamily& family, double alpha_target, double p, const VerifyOptions& opts,
                  unsigned jobs) {
  SweepResult out;
  const std::size_t rows = family.values.size();
  out.records.resize(rows);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows; i = next++) {
      VerificationRecord& r = out.records[i];
      std::string id;
      try {
        const auto spec = family_member(family, family.values[i]);
        id = spec.id;
        r = check_main_theorem(geometry::make_manifold(spec), alpha_target, p, opts);
      } catch (const std::exception& e) {
        r = VerificationRecord{};
        r.id = id;
        r.p = p;
        r.error = e.what();
        log::error(id + ": " + r.error);
      }
      r.parameter = family.parameter;
      r.parameter_value = family.values[i];
      log::info("row " + std::to_string(i) + " " + r.id + (r.passed() ? " ok" : " FAILED"));
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(rows, 1))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  const bool flat = family.base.kind == "flat-torus" || family.base.kind == "constant";
  out.summary = summarize(out.records, flat);
  return out;
}

}  // namespace sgv::verify
