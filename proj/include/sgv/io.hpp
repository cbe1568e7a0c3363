#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgv/constants.hpp"
#include "sgv/geometry.hpp"
#include "sgv/modelode.hpp"
#include "sgv/spectral.hpp"
#include "sgv/verify.hpp"

namespace sgv::io {

// Insertion-ordered so that emitted documents are stable byte for byte.
using Json = nlohmann::ordered_json;

// %.17g: enough digits to round-trip any double.
std::string format_double(double v);

// Throws ConfigParse on unknown keys or mistyped values.
geometry::ManifoldSpec parse_manifold_spec(const Json& j);
Json to_json(const geometry::ManifoldSpec& s);

// Reject keys outside `allowed` (ConfigParse), naming the offending object.
void require_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where);
Json parse_json_file(const std::string& path);

Json to_json(const geometry::DiameterBracket& d);
Json to_json(const geometry::GeometryReport& r);
Json to_json(const spectral::EigenResult& r);
Json to_json(const constants::LedgerInput& in);
Json to_json(const constants::GradientConstants& g);
Json to_json(const constants::EpsilonBreakdown& e);
Json to_json(const constants::ConstantLedger& l);
Json to_json(const modelode::BarrierMargins& m);
Json to_json(const verify::VerificationRecord& r);
Json to_json(const verify::SweepSummary& s);
Json to_json(const verify::SweepResult& r);

// One row per record: id, kbar, eps_max, hypothesis_met, lambda1, D_hi, alpha,
// bound, theorem_margin, sigma, J_dev, grad_margin, sharpness_ratio.
void write_records_csv(std::ostream& out, const std::vector<verify::VerificationRecord>& records);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace sgv::io
