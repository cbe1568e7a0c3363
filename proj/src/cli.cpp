#include "sgv/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "sgv/error.hpp"
#include "sgv/log.hpp"
#include "sgv/modelode.hpp"
#include "sgv/plot.hpp"

namespace sgv::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;

template <class T>
T read(const io::Json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigParse, where + "." + key + ": " + e.what());
  }
}

template <class T>
void read_into(const io::Json& j, const char* key, const std::string& where, T& target) {
  if (j.contains(key)) target = read<T>(j, key, where);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool is_config_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigParse:
    case ErrorCode::BadArgument:
    case ErrorCode::NonPositiveWarp:
    case ErrorCode::BadPoleClosure:
    case ErrorCode::BadExponent:
    case ErrorCode::DeltaTooLarge:
      return true;
    default:
      return false;
  }
}

// Flag values are bound to scratch storage and copied onto the config only
// when given, so that flags override the config file and nothing else does.
class Overrides {
 public:
  template <class T>
  void add(CLI::App* app, const std::string& name, T& target, const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    if constexpr (std::is_same_v<T, std::vector<double>>) opt->delimiter(',');
    actions_.push_back([opt, value, &target] {
      if (opt->count() > 0) target = *value;
    });
  }

  void add_optional(CLI::App* app, const std::string& name, std::optional<double>& target,
                    const std::string& help) {
    auto value = std::make_shared<double>();
    CLI::Option* opt = app->add_option(name, *value, help);
    actions_.push_back([opt, value, &target] {
      if (opt->count() > 0) target = *value;
    });
  }

  void apply() const {
    for (const auto& a : actions_) a();
  }

 private:
  std::vector<std::function<void()>> actions_;
};

void add_manifold_flags(CLI::App* app, Overrides& o, RunConfig& cfg) {
  o.add(app, "--manifold", cfg.manifold.kind,
        "flat-torus | constant | cosine-perturbed | sine-sphere | round-sphere | tabulated");
  o.add(app, "--n", cfg.manifold.n, "dimension");
  o.add(app, "--L", cfg.manifold.L, "length of the base interval");
  o.add_optional(app, "--fiber", cfg.manifold.fiber, "fiber circumference (c = fiber / 2 pi)");
  o.add_optional(app, "--c", cfg.manifold.c, "mean warp value");
  o.add(app, "--beta", cfg.manifold.beta, "cosine perturbation amplitude");
  o.add(app, "--R", cfg.manifold.R, "sphere radius");
  o.add(app, "--samples", cfg.manifold.samples, "tabulated warp samples (comma separated)");
  o.add(app, "--boundary", cfg.manifold.boundary, "periodic | pole-closed");
  o.add(app, "--id", cfg.manifold.id, "manifold id used in reports");
}

void add_solver_flags(CLI::App* app, Overrides& o, RunConfig& cfg) {
  o.add(app, "--N0", cfg.solver.N0, "coarsest grid size");
  o.add(app, "--levels", cfg.solver.levels, "number of grid doublings used for extrapolation");
}

void add_diameter_flags(CLI::App* app, Overrides& o, RunConfig& cfg) {
  o.add(app, "--tol", cfg.diameter.tol, "target bracket width");
  o.add(app, "--base-grid", cfg.diameter.base_grid, "coarsest graph grid");
  o.add(app, "--max-refine", cfg.diameter.max_refine, "graph grid doublings");
}

void add_output_flags(CLI::App* app, Overrides& o, RunConfig& cfg) {
  o.add(app, "--format", cfg.output.format, "stdout format: text | json");
  o.add(app, "--json", cfg.output.json, "write the JSON report to this file");
}

void add_constant_flags(CLI::App* app, Overrides& o, RunConfig& cfg) {
  o.add(app, "--Cs", cfg.ledger.C_s, "Sobolev constant (user supplied)");
  o.add(app, "--Lambda", cfg.ledger.Lambda_rough, "rough spectral lower bound (user supplied)");
}

verify::VerifyOptions verify_options(const RunConfig& cfg) {
  verify::VerifyOptions v;
  v.solver = cfg.solver;
  v.diameter = cfg.diameter;
  v.C_s = cfg.ledger.C_s;
  v.Lambda_rough = cfg.ledger.Lambda_rough;
  return v;
}

void emit(const RunConfig& cfg, const io::Json& report, const std::string& text, std::ostream& out) {
  const std::string doc = report.dump(2) + "\n";
  if (!cfg.output.json.empty()) io::write_text_file(cfg.output.json, doc);
  out << (cfg.output.format == "json" ? doc : text);
}

int cmd_eig(const RunConfig& cfg, std::ostream& out) {
  const auto m = geometry::make_manifold(cfg.manifold);
  const auto r = spectral::lambda1(m, cfg.solver);
  io::Json j;
  j["manifold"] = io::to_json(cfg.manifold);
  j["eigen"] = io::to_json(r);
  std::ostringstream t;
  t << "lambda1 = " << num(r.lambda1) << " (mode k = " << r.mode << ", observed order "
    << num(r.observed_order) << (r.degenerate ? ", degenerate" : "") << ")\n";
  for (const auto& mr : r.modes) t << "  k = " << mr.k << ": " << num(mr.extrapolated) << "\n";
  emit(cfg, j, t.str(), out);
  return kExitOk;
}

int cmd_curvature(const RunConfig& cfg, std::ostream& out) {
  const auto m = geometry::make_manifold(cfg.manifold);
  const auto r = geometry::geometry_report(m, cfg.p, cfg.H, cfg.samples, cfg.diameter);
  io::Json j;
  j["manifold"] = io::to_json(cfg.manifold);
  j["report"] = io::to_json(r);
  double lo = r.rho.values.front(), hi = lo;
  for (double v : r.rho.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::ostringstream t;
  t << "min Ricci in [" << num(lo) << ", " << num(hi) << "]\n"
    << "kbar(p = " << num(cfg.p) << ", H = " << num(cfg.H) << ") = " << num(r.kbar) << "\n"
    << "volume = " << num(r.volume) << "\n"
    << "diameter in [" << num(r.diameter_lo) << ", " << num(r.diameter_hi) << "]\n";
  emit(cfg, j, t.str(), out);
  return kExitOk;
}

int cmd_diameter(const RunConfig& cfg, std::ostream& out) {
  const auto m = geometry::make_manifold(cfg.manifold);
  const auto d = geometry::diameter(m, cfg.diameter);
  io::Json j;
  j["manifold"] = io::to_json(cfg.manifold);
  j["diameter"] = io::to_json(d);
  std::ostringstream t;
  t << "diameter in [" << num(d.lo) << ", " << num(d.hi) << "] (" << d.method
    << (d.converged ? "" : ", width above tolerance") << ")\n";
  emit(cfg, j, t.str(), out);
  return kExitOk;
}

int cmd_kbar(const RunConfig& cfg, std::ostream& out) {
  const auto m = geometry::make_manifold(cfg.manifold);
  const double k = geometry::kbar(m, cfg.p, cfg.H);
  io::Json j;
  j["manifold"] = io::to_json(cfg.manifold);
  j["p"] = cfg.p;
  j["H"] = cfg.H;
  j["kbar"] = k;
  emit(cfg, j, "kbar = " + num(k) + "\n", out);
  return kExitOk;
}

int cmd_ledger(const RunConfig& cfg, std::ostream& out) {
  constants::LedgerInput in = cfg.ledger;
  in.p = cfg.p;
  const auto l = constants::build_ledger(in);
  std::ostringstream t;
  auto row = [&](const std::string& name, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-16s %.10g\n", name.c_str(), v);
    t << buf;
  };
  t << "inputs (C_s and Lambda_rough are user supplied)\n";
  row("n", in.n);
  row("p", in.p);
  row("D", in.D);
  row("delta", in.delta);
  row("C_s", in.C_s);
  row("Lambda_rough", in.Lambda_rough);
  t << "gradient constants\n";
  row("sigma", l.gradient.sigma);
  row("tau", l.gradient.tau);
  row("A", l.gradient.A);
  row("B", l.gradient.B);
  row("z_tilde", l.gradient.z_tilde);
  row("C1", l.gradient.C1);
  row("C2", l.gradient.C2);
  row("b", l.gradient.b);
  row("alpha", l.gradient.alpha);
  t << "smallness\n";
  for (int i = 0; i < 4; ++i) row("term" + std::to_string(i + 1), l.eps.terms[i]);
  row("eps_max", l.eps.eps_max);
  t << "binding          term" << l.eps.binding + 1 << "\n";
  row("psi_norm", l.eps.psi_norm);
  row("A_moser", l.eps.A_moser);
  row("K1", l.eps.K1);
  row("K2", l.eps.K2);
  row("C3", l.eps.C3);
  emit(cfg, io::to_json(l), t.str(), out);
  return kExitOk;
}

int cmd_ode_check(const RunConfig& cfg, std::ostream& out) {
  const double eta = cfg.ode.eta;
  const double J_lo = cfg.ode.J_lo.value_or(2.0 - eta);
  const double J_hi = cfg.ode.J_hi.value_or(eta);
  const auto m = modelode::check_barrier_margins(eta, J_lo, J_hi, cfg.ode.grid, cfg.ode.j_count);
  double residual = 0.0;
  const std::size_t n = cfg.ode.grid;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = -1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    residual = std::max(residual, modelode::ode_residual(u, eta));
  }
  const double floor = -1e-10;
  const bool ok = m.gradient >= floor && m.linear >= floor && m.envelope >= floor && residual <= 1e-12;
  io::Json j;
  j["eta"] = eta;
  j["J_lo"] = J_lo;
  j["J_hi"] = J_hi;
  j["grid"] = n;
  j["margins"] = io::to_json(m);
  j["ode_residual"] = residual;
  j["passed"] = ok;
  std::ostringstream t;
  t << "eta = " << num(eta) << ", J in [" << num(J_lo) << ", " << num(J_hi) << "]\n"
    << "  gradient margin  " << num(m.gradient) << "\n"
    << "  linear margin    " << num(m.linear) << "\n"
    << "  envelope margin  " << num(m.envelope) << "\n"
    << "  ODE residual     " << num(residual) << "\n"
    << (ok ? "all margins >= -1e-10\n" : "MARGIN VIOLATION\n");
  emit(cfg, j, t.str(), out);
  return ok ? kExitOk : kExitFailed;
}

std::string record_text(const verify::VerificationRecord& r) {
  std::ostringstream t;
  t << r.id << ": " << (r.passed() ? "PASS" : "FAIL");
  if (!r.error.empty()) {
    t << " (" << r.error << ")\n";
    return t.str();
  }
  t << (r.hypothesis_met ? "" : " (hypothesis not met, checks informational)") << "\n"
    << "  lambda1 " << num(r.lambda1) << " >= bound " << num(r.bound) << " (alpha " << num(r.alpha)
    << ", D_hi " << num(r.diameter_hi) << ", margin " << num(r.theorem_margin) << ")\n"
    << "  kbar " << num(r.kbar) << " vs eps_max " << num(r.eps_max) << " at delta " << num(r.delta) << "\n"
    << "  sigma " << num(r.sigma_measured) << ", max|J-1| " << num(r.J_deviation) << ", max Q "
    << num(r.gradient_margin) << ", sharpness " << num(r.sharpness_ratio) << "\n";
  return t.str();
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto m = geometry::make_manifold(cfg.manifold);
  const auto r = verify::check_main_theorem(m, cfg.alpha, cfg.p, verify_options(cfg));
  emit(cfg, io::to_json(r), record_text(r), out);
  return r.passed() ? kExitOk : kExitFailed;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  verify::SweepFamily family;
  family.base = cfg.manifold;
  family.parameter = cfg.sweep_parameter;
  family.values = cfg.sweep_values;
  const auto r = verify::sweep(family, cfg.alpha, cfg.p, verify_options(cfg), cfg.jobs);
  if (!cfg.output.csv.empty()) {
    std::ostringstream csv;
    io::write_records_csv(csv, r.records);
    io::write_text_file(cfg.output.csv, csv.str());
  }
  if (!cfg.output.plot.empty()) {
    const auto kind = plot::parse_kind(cfg.output.plot);
    plot::PlotData data;
    if (kind == plot::PlotKind::AlphaVsDelta) {
      std::vector<double> deltas;
      for (int i = 1; i <= 60; ++i) deltas.push_back(0.0025 * i);
      data = plot::alpha_vs_delta(deltas, 0.0, cfg.ledger.Lambda_rough);
    } else {
      data = plot::from_records(r.records, kind);
    }
    plot::emit_plot_data(data, cfg.output.plot_dir, cfg.output.plot);
  }
  std::ostringstream t;
  for (const auto& rec : r.records) t << record_text(rec);
  t << "rows " << r.summary.rows << ", hypothesis met " << r.summary.hypothesis_met << ", failed "
    << r.summary.failed << "\n";
  if (r.summary.min_theorem_margin) t << "min theorem margin " << num(*r.summary.min_theorem_margin) << "\n";
  if (r.summary.max_sharpness_deviation)
    t << "max |sharpness - 1| " << num(*r.summary.max_sharpness_deviation) << "\n";
  emit(cfg, io::to_json(r), t.str(), out);
  return r.summary.failed == 0 ? kExitOk : kExitFailed;
}

}  // namespace

void apply_config(const io::Json& j, RunConfig& cfg) {
  io::require_keys(j, {"manifold", "solver", "diameter", "ledger", "alpha", "p", "H", "samples", "ode", "sweep",
                       "output"},
                   "config");
  if (j.contains("manifold")) cfg.manifold = io::parse_manifold_spec(j.at("manifold"));
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    io::require_keys(s, {"N0", "levels"}, "solver");
    read_into(s, "N0", "solver", cfg.solver.N0);
    read_into(s, "levels", "solver", cfg.solver.levels);
  }
  if (j.contains("diameter")) {
    const auto& d = j.at("diameter");
    io::require_keys(d, {"tol", "base_grid", "max_refine"}, "diameter");
    read_into(d, "tol", "diameter", cfg.diameter.tol);
    read_into(d, "base_grid", "diameter", cfg.diameter.base_grid);
    read_into(d, "max_refine", "diameter", cfg.diameter.max_refine);
  }
  if (j.contains("ledger")) {
    const auto& l = j.at("ledger");
    io::require_keys(l, {"n", "D", "delta", "C_s", "Lambda_rough", "sigma", "psi_norm", "tail_tol"}, "ledger");
    read_into(l, "n", "ledger", cfg.ledger.n);
    read_into(l, "D", "ledger", cfg.ledger.D);
    read_into(l, "delta", "ledger", cfg.ledger.delta);
    read_into(l, "C_s", "ledger", cfg.ledger.C_s);
    read_into(l, "Lambda_rough", "ledger", cfg.ledger.Lambda_rough);
    if (l.contains("sigma")) cfg.ledger.sigma = read<double>(l, "sigma", "ledger");
    if (l.contains("psi_norm")) cfg.ledger.psi_norm = read<double>(l, "psi_norm", "ledger");
    read_into(l, "tail_tol", "ledger", cfg.ledger.tail_tol);
  }
  read_into(j, "alpha", "config", cfg.alpha);
  read_into(j, "p", "config", cfg.p);
  read_into(j, "H", "config", cfg.H);
  read_into(j, "samples", "config", cfg.samples);
  if (j.contains("ode")) {
    const auto& o = j.at("ode");
    io::require_keys(o, {"eta", "J_lo", "J_hi", "grid", "j_count"}, "ode");
    read_into(o, "eta", "ode", cfg.ode.eta);
    if (o.contains("J_lo")) cfg.ode.J_lo = read<double>(o, "J_lo", "ode");
    if (o.contains("J_hi")) cfg.ode.J_hi = read<double>(o, "J_hi", "ode");
    read_into(o, "grid", "ode", cfg.ode.grid);
    read_into(o, "j_count", "ode", cfg.ode.j_count);
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    io::require_keys(s, {"parameter", "values", "jobs"}, "sweep");
    read_into(s, "parameter", "sweep", cfg.sweep_parameter);
    read_into(s, "values", "sweep", cfg.sweep_values);
    read_into(s, "jobs", "sweep", cfg.jobs);
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    io::require_keys(o, {"format", "json", "csv", "plot", "plot_dir"}, "output");
    read_into(o, "format", "output", cfg.output.format);
    read_into(o, "json", "output", cfg.output.json);
    read_into(o, "csv", "output", cfg.output.csv);
    read_into(o, "plot", "output", cfg.output.plot);
    read_into(o, "plot_dir", "output", cfg.output.plot_dir);
  }
}

void check_ranges(const RunConfig& cfg) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ConfigParse, what); };
  if (cfg.solver.N0 < 16 || cfg.solver.N0 > (1u << 22)) fail("solver.N0 must lie in [16, 4194304]");
  if (cfg.solver.levels < 2 || cfg.solver.levels > 8) fail("solver.levels must lie in [2, 8]");
  if (!(cfg.diameter.tol > 0.0)) fail("diameter.tol must be positive");
  if (cfg.diameter.base_grid < 8) fail("diameter.base_grid must be at least 8");
  if (cfg.diameter.max_refine < 0 || cfg.diameter.max_refine > 6) fail("diameter.max_refine must lie in [0, 6]");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail("alpha must lie in (0, 1)");
  if (cfg.samples < 4) fail("samples must be at least 4");
  if (cfg.ode.grid < 3) fail("ode.grid must be at least 3");
  if (cfg.ode.j_count < 1) fail("ode.j_count must be positive");
  if (cfg.jobs < 1 || cfg.jobs > 256) fail("jobs must lie in [1, 256]");
  if (cfg.output.format != "text" && cfg.output.format != "json") fail("format must be text or json");
  if (!cfg.output.plot.empty()) plot::parse_kind(cfg.output.plot);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string config_path;
  Overrides o;
  CLI::App app{"Numerical checks of a first-eigenvalue lower bound under integral Ricci curvature", "sgv"};
  app.require_subcommand(1);
  auto* eig = app.add_subcommand("eig", "first nonzero eigenvalue by separation of variables");
  auto* curvature = app.add_subcommand("curvature", "Ricci profile, kbar, volume and diameter");
  auto* diameter = app.add_subcommand("diameter", "diameter bracket");
  auto* kbar = app.add_subcommand("kbar", "integral curvature norm kbar(p, H)");
  auto* ledger = app.add_subcommand("ledger", "explicit constant ledger");
  auto* ode = app.add_subcommand("ode-check", "model ODE barrier margins");
  auto* ver = app.add_subcommand("verify", "end-to-end check of the eigenvalue bound on one manifold");
  auto* swp = app.add_subcommand("sweep", "verify a one-parameter manifold family");

  for (auto* sc : {eig, curvature, diameter, kbar, ledger, ode, ver, swp}) {
    sc->add_option("--config", config_path, "JSON config file (flags override it)");
    add_output_flags(sc, o, cfg);
  }
  for (auto* sc : {eig, curvature, diameter, kbar, ver, swp}) add_manifold_flags(sc, o, cfg);
  for (auto* sc : {eig, ver, swp}) add_solver_flags(sc, o, cfg);
  for (auto* sc : {curvature, diameter, ver, swp}) add_diameter_flags(sc, o, cfg);
  for (auto* sc : {curvature, kbar, ledger, ver, swp}) o.add(sc, "--p", cfg.p, "curvature norm exponent");
  for (auto* sc : {curvature, kbar}) o.add(sc, "--H", cfg.H, "curvature reference level");
  o.add(curvature, "--grid", cfg.samples, "number of Ricci samples");
  o.add(ledger, "--n", cfg.ledger.n, "dimension");
  o.add(ledger, "--D", cfg.ledger.D, "diameter bound");
  o.add(ledger, "--delta", cfg.ledger.delta, "delta");
  o.add_optional(ledger, "--sigma", cfg.ledger.sigma, "sigma (default 4 eps_max)");
  o.add_optional(ledger, "--psi-norm", cfg.ledger.psi_norm, "norm of psi used in the Moser constant");
  for (auto* sc : {ledger, ver, swp}) add_constant_flags(sc, o, cfg);
  o.add(ode, "--eta", cfg.ode.eta, "eta > 1");
  o.add_optional(ode, "--J-lo", cfg.ode.J_lo, "lower end of the J range (default 2 - eta)");
  o.add_optional(ode, "--J-hi", cfg.ode.J_hi, "upper end of the J range (default eta)");
  o.add(ode, "--grid", cfg.ode.grid, "u grid size");
  o.add(ode, "--j-count", cfg.ode.j_count, "number of J values");
  for (auto* sc : {ver, swp}) o.add(sc, "--alpha", cfg.alpha, "target fraction of pi^2 / D^2");
  o.add(swp, "--param", cfg.sweep_parameter, "beta | L | fiber | c | R | aspect");
  o.add(swp, "--values", cfg.sweep_values, "parameter values (comma separated)");
  o.add(swp, "--jobs", cfg.jobs, "worker threads");
  o.add(swp, "--csv", cfg.output.csv, "write the CSV summary to this file");
  o.add(swp, "--plot", cfg.output.plot, "sharpness-vs-aspect | kbar-vs-lambda1 | alpha-vs-delta");
  o.add(swp, "--plot-dir", cfg.output.plot_dir, "directory for plot CSV and SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (auto* sc : app.get_subcommands()) cfg.subcommand = sc->get_name();
    if (!config_path.empty()) apply_config(io::parse_json_file(config_path), cfg);
    o.apply();
    if (cfg.manifold.id.empty()) cfg.manifold.id = cfg.manifold.kind;
    check_ranges(cfg);
    log::debug("subcommand " + cfg.subcommand);
    if (cfg.subcommand == "eig") return cmd_eig(cfg, out);
    if (cfg.subcommand == "curvature") return cmd_curvature(cfg, out);
    if (cfg.subcommand == "diameter") return cmd_diameter(cfg, out);
    if (cfg.subcommand == "kbar") return cmd_kbar(cfg, out);
    if (cfg.subcommand == "ledger") return cmd_ledger(cfg, out);
    if (cfg.subcommand == "ode-check") return cmd_ode_check(cfg, out);
    if (cfg.subcommand == "verify") return cmd_verify(cfg, out);
    if (cfg.subcommand == "sweep") return cmd_sweep(cfg, out);
    err << "unknown subcommand\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "sgv: " << e.what() << "\n";
    return is_config_error(e.code()) ? kExitConfig : kExitFailed;
  } catch (const std::exception& e) {
    err << "sgv: " << e.what() << "\n";
    return kExitFailed;
  }
}

int run(int argc, char** argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace sgv::cli
