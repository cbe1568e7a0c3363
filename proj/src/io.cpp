#include "sgv/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "sgv/error.hpp"

namespace sgv::io {

namespace {

template <class T>
T get_as(const Json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigParse, where + "." + key + ": " + e.what());
  }
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigParse, where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(ErrorCode::ConfigParse, "unknown key '" + key + "' in " + where);
  }
}

Json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParse, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigParse, path + ": " + e.what());
  }
}

geometry::ManifoldSpec parse_manifold_spec(const Json& j) {
  const std::string where = "manifold";
  require_keys(j, {"kind", "n", "L", "fiber", "c", "beta", "R", "samples", "boundary", "id"}, where);
  geometry::ManifoldSpec s;
  if (j.contains("kind")) s.kind = get_as<std::string>(j, "kind", where);
  if (j.contains("n")) s.n = get_as<int>(j, "n", where);
  if (j.contains("L")) s.L = get_as<double>(j, "L", where);
  if (j.contains("fiber")) s.fiber = get_as<double>(j, "fiber", where);
  if (j.contains("c")) s.c = get_as<double>(j, "c", where);
  if (j.contains("beta")) s.beta = get_as<double>(j, "beta", where);
  if (j.contains("R")) s.R = get_as<double>(j, "R", where);
  if (j.contains("samples")) s.samples = get_as<std::vector<double>>(j, "samples", where);
  if (j.contains("boundary")) s.boundary = get_as<std::string>(j, "boundary", where);
  if (j.contains("id")) s.id = get_as<std::string>(j, "id", where);
  return s;
}

Json to_json(const geometry::ManifoldSpec& s) {
  Json j;
  j["kind"] = s.kind;
  j["n"] = s.n;
  j["L"] = s.L;
  if (s.fiber) j["fiber"] = *s.fiber;
  if (s.c) j["c"] = *s.c;
  j["beta"] = s.beta;
  j["R"] = s.R;
  if (!s.samples.empty()) j["samples"] = s.samples;
  j["boundary"] = s.boundary;
  j["id"] = s.id;
  return j;
}

Json to_json(const geometry::DiameterBracket& d) {
  Json j;
  j["lo"] = d.lo;
  j["hi"] = d.hi;
  j["method"] = d.method;
  j["converged"] = d.converged;
  j["grid_t"] = d.grid_t;
  j["grid_theta"] = d.grid_theta;
  return j;
}

Json to_json(const geometry::GeometryReport& r) {
  Json j;
  j["p"] = r.p;
  j["H"] = r.H;
  j["kbar"] = r.kbar;
  j["volume"] = r.volume;
  j["diameter_lo"] = r.diameter_lo;
  j["diameter_hi"] = r.diameter_hi;
  j["t"] = r.rho.t;
  j["rho_min"] = r.rho.values;
  j["rho_H"] = r.rho_H.values;
  return j;
}

Json to_json(const spectral::EigenResult& r) {
  auto history = [](const std::vector<std::pair<std::size_t, double>>& h) {
    Json a = Json::array();
    for (const auto& [N, v] : h) a.push_back({{"N", N}, {"lambda", v}});
    return a;
  };
  Json j;
  j["lambda1"] = r.lambda1;
  j["mode"] = r.mode;
  j["observed_order"] = r.observed_order;
  j["degenerate"] = r.degenerate;
  j["history"] = history(r.history);
  j["grid_lambda"] = r.grid_lambda;
  j["rayleigh"] = r.rayleigh;
  j["a"] = r.a;
  Json modes = Json::array();
  for (const auto& m : r.modes)
    modes.push_back({{"k", m.k},
                     {"extrapolated", m.extrapolated},
                     {"observed_order", m.observed_order},
                     {"history", history(m.history)}});
  j["modes"] = modes;
  return j;
}

Json to_json(const constants::LedgerInput& in) {
  Json j;
  j["n"] = in.n;
  j["p"] = in.p;
  j["D"] = in.D;
  j["delta"] = in.delta;
  j["C_s"] = in.C_s;
  j["Lambda_rough"] = in.Lambda_rough;
  j["sigma"] = optional_number(in.sigma);
  j["psi_norm"] = optional_number(in.psi_norm);
  j["tail_tol"] = in.tail_tol;
  return j;
}

Json to_json(const constants::GradientConstants& g) {
  Json j;
  j["delta"] = g.delta;
  j["sigma"] = g.sigma;
  j["tau"] = g.tau;
  j["A"] = g.A;
  j["B"] = g.B;
  j["z_tilde"] = g.z_tilde;
  j["C1"] = g.C1;
  j["C2"] = g.C2;
  j["b"] = g.b;
  j["alpha"] = g.alpha;
  return j;
}

Json to_json(const constants::EpsilonBreakdown& e) {
  Json j;
  j["term1"] = e.terms[0];
  j["term2"] = e.terms[1];
  j["term3"] = e.terms[2];
  j["term4"] = e.terms[3];
  j["eps_max"] = e.eps_max;
  j["binding"] = "term" + std::to_string(e.binding + 1);
  j["eps_provisional"] = e.eps_provisional;
  j["psi_norm"] = e.psi_norm;
  j["A_moser"] = e.A_moser;
  j["K1"] = e.K1;
  j["K2"] = e.K2;
  j["C3"] = e.C3;
  j["B_pn"] = e.B_pn;
  j["alpha_tilde"] = e.alpha_tilde;
  return j;
}

Json to_json(const constants::ConstantLedger& l) {
  Json j;
  j["input"] = to_json(l.input);
  j["gradient"] = to_json(l.gradient);
  j["epsilon"] = to_json(l.eps);
  j["lambda_tilde"] = {{"slope_C1", l.lambda_tilde_slope}, {"offset_C2", l.lambda_tilde_offset}};
  return j;
}

Json to_json(const modelode::BarrierMargins& m) {
  Json j;
  j["gradient"] = m.gradient;
  j["linear"] = m.linear;
  j["envelope"] = m.envelope;
  j["worst_u"] = {m.worst_u[0], m.worst_u[1], m.worst_u[2]};
  j["worst_J"] = m.worst_J;
  return j;
}

Json to_json(const verify::VerificationRecord& r) {
  Json j;
  j["id"] = r.id;
  if (!r.parameter.empty()) {
    j["parameter"] = r.parameter;
    j["parameter_value"] = r.parameter_value;
  }
  j["p"] = r.p;
  j["delta"] = r.delta;
  j["kbar"] = r.kbar;
  j["eps_max"] = r.eps_max;
  j["hypothesis_met"] = r.hypothesis_met;
  j["lambda1"] = r.lambda1;
  j["mode"] = r.mode;
  j["diameter_lo"] = r.diameter_lo;
  j["diameter_hi"] = r.diameter_hi;
  j["diameter_method"] = r.diameter_method;
  j["alpha"] = r.alpha;
  j["bound"] = r.bound;
  j["theorem_margin"] = r.theorem_margin;
  j["sigma_measured"] = r.sigma_measured;
  j["sigma_bound_margin"] = r.sigma_bound_margin;
  j["J_deviation"] = r.J_deviation;
  j["gradient_margin"] = r.gradient_margin;
  j["lambda_tilde"] = r.lambda_tilde;
  j["sharpness_ratio"] = r.sharpness_ratio;
  j["checks"] = {{"theorem", r.theorem_ok}, {"sigma", r.sigma_ok}, {"J", r.J_ok}, {"gradient", r.gradient_ok}};
  j["passed"] = r.passed();
  j["error"] = r.error.empty() ? Json(nullptr) : Json(r.error);
  return j;
}

Json to_json(const verify::SweepSummary& s) {
  Json j;
  j["rows"] = s.rows;
  j["hypothesis_met"] = s.hypothesis_met;
  j["failed"] = s.failed;
  j["min_theorem_margin"] = optional_number(s.min_theorem_margin);
  j["max_sharpness_deviation"] = optional_number(s.max_sharpness_deviation);
  return j;
}

Json to_json(const verify::SweepResult& r) {
  Json j;
  Json rows = Json::array();
  for (const auto& rec : r.records) rows.push_back(to_json(rec));
  j["records"] = rows;
  j["summary"] = to_json(r.summary);
  return j;
}

void write_records_csv(std::ostream& out, const std::vector<verify::VerificationRecord>& records) {
  out << "id,kbar,eps_max,hypothesis_met,lambda1,D_hi,alpha,bound,theorem_margin,sigma,J_dev,grad_margin,"
         "sharpness_ratio\n";
  for (const auto& r : records) {
    out << csv_field(r.id) << ',' << format_double(r.kbar) << ',' << format_double(r.eps_max) << ','
        << (r.hypothesis_met ? "true" : "false") << ',' << format_double(r.lambda1) << ','
        << format_double(r.diameter_hi) << ',' << format_double(r.alpha) << ',' << format_double(r.bound)
        << ',' << format_double(r.theorem_margin) << ',' << format_double(r.sigma_measured) << ','
        << format_double(r.J_deviation) << ',' << format_double(r.gradient_margin) << ','
        << format_double(r.sharpness_ratio) << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigParse, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorCode::ConfigParse, "write failed for '" + path + "'");
}

}  // namespace sgv::io
