#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sgv/constants.hpp"
#include "sgv/geometry.hpp"
#include "sgv/io.hpp"
#include "sgv/spectral.hpp"
#include "sgv/verify.hpp"

namespace sgv::cli {

struct OdeSettings {
  double eta = 1.1;
  std::optional<double> J_lo;  // default 2 - eta
  std::optional<double> J_hi;  // default eta
  std::size_t grid = 10000;
  std::size_t j_count = 11;
};

struct OutputSettings {
  std::string format = "text";  // text | json (stdout)
  std::string json;             // report file
  std::string csv;              // sweep summary file
  std::string plot;             // plot kind
  std::string plot_dir = ".";
};

struct RunConfig {
  std::string subcommand;
  geometry::ManifoldSpec manifold;
  spectral::SolverOptions solver;
  geometry::DiameterOptions diameter;
  constants::LedgerInput ledger;  // C_s and Lambda_rough also feed verify/sweep
  double alpha = 0.5;
  double p = 2.0;
  double H = 0.0;
  std::size_t samples = 512;
  OdeSettings ode;
  std::string sweep_parameter = "beta";
  std::vector<double> sweep_values;
  unsigned jobs = 1;
  OutputSettings output;
};

// Reads a JSON config document; unknown keys anywhere raise ConfigParse.
void apply_config(const io::Json& j, RunConfig& cfg);
// Range checks on numeric settings; raises ConfigParse.
void check_ranges(const RunConfig& cfg);

// Exit codes: 0 success, 1 failed invariant or runtime failure, 2 config error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace sgv::cli
