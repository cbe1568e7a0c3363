#include "sgv/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "sgv/constants.hpp"
#include "sgv/error.hpp"
#include "sgv/io.hpp"

namespace sgv::plot {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 70.0;
constexpr int kTicks = 5;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fmt(const char* pattern, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (hi > lo) return;
    const double d = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
    lo -= d;
    hi += d;
  }
};

std::size_t point_count(const PlotData& data) {
  std::size_t n = 0;
  for (const auto& s : data.series) n += s.x.size();
  return n;
}

}  // namespace

PlotKind parse_kind(std::string_view name) {
  if (name == "sharpness-vs-aspect") return PlotKind::SharpnessVsAspect;
  if (name == "kbar-vs-lambda1") return PlotKind::KbarVsLambda1;
  if (name == "alpha-vs-delta") return PlotKind::AlphaVsDelta;
  throw Error(ErrorCode::ConfigParse, "unknown plot kind '" + std::string(name) + "'");
}

std::string to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::SharpnessVsAspect: return "sharpness-vs-aspect";
    case PlotKind::KbarVsLambda1: return "kbar-vs-lambda1";
    case PlotKind::AlphaVsDelta: return "alpha-vs-delta";
  }
  return "unknown";
}

PlotData from_records(const std::vector<verify::VerificationRecord>& records, PlotKind kind) {
  PlotData d;
  d.kind = kind;
  switch (kind) {
    case PlotKind::SharpnessVsAspect: {
      d.title = "Sharpness ratio lambda1 D^2 / pi^2";
      d.x_label = "aspect (fiber / L)";
      d.y_label = "sharpness ratio";
      Series measured{"measured", {}, {}};
      Series closed{"1 + aspect^2", {}, {}};
      for (const auto& r : records) {
        if (!r.error.empty()) continue;
        measured.x.push_back(r.parameter_value);
        measured.y.push_back(r.sharpness_ratio);
        closed.x.push_back(r.parameter_value);
        closed.y.push_back(1.0 + r.parameter_value * r.parameter_value);
      }
      d.series = {measured, closed};
      break;
    }
    case PlotKind::KbarVsLambda1: {
      d.title = "First eigenvalue against integral curvature";
      d.x_label = "kbar(p, 0)";
      d.y_label = "lambda1";
      Series lambda{"lambda1", {}, {}};
      Series bound{"alpha pi^2 / D_hi^2", {}, {}};
      for (const auto& r : records) {
        if (!r.error.empty()) continue;
        lambda.x.push_back(r.kbar);
        lambda.y.push_back(r.lambda1);
        bound.x.push_back(r.kbar);
        bound.y.push_back(r.bound);
      }
      d.series = {lambda, bound};
      break;
    }
    case PlotKind::AlphaVsDelta:
      throw Error(ErrorCode::BadArgument, "alpha-vs-delta is built from a delta grid, not from records");
  }
  if (point_count(d) == 0) throw Error(ErrorCode::EmptySeries, "no usable records for " + to_string(kind));
  return d;
}

PlotData alpha_vs_delta(const std::vector<double>& deltas, double sigma, double Lambda_rough) {
  PlotData d;
  d.kind = PlotKind::AlphaVsDelta;
  d.title = "alpha(delta) at sigma = " + fmt("%.6g", sigma);
  d.x_label = "delta";
  d.y_label = "alpha";
  Series s{"alpha", {}, {}};
  for (double delta : deltas) {
    s.x.push_back(delta);
    s.y.push_back(constants::gradient_constants(delta, sigma, Lambda_rough).alpha);
  }
  d.series = {s};
  if (point_count(d) == 0) throw Error(ErrorCode::EmptySeries, "empty delta grid");
  return d;
}

std::string to_csv(const PlotData& data) {
  std::string out = "series,x,y\n";
  for (const auto& s : data.series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out += s.name + "," + io::format_double(s.x[i]) + "," + io::format_double(s.y[i]) + "\n";
  return out;
}

std::string to_svg(const PlotData& data) {
  if (point_count(data) == 0) throw Error(ErrorCode::EmptySeries, "nothing to plot");
  Range xr, yr;
  for (const auto& s : data.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.pad();
  yr.pad();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto X = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto Y = [&](double v) { return kTop + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  o += "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  o += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">" +
       escape(data.title) + "</text>\n";
  o += "<g stroke=\"black\" stroke-width=\"1\">\n";
  o += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", kTop + ph) + "\" x2=\"" +
       fmt("%.2f", kLeft + pw) + "\" y2=\"" + fmt("%.2f", kTop + ph) + "\"/>\n";
  o += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", kTop) + "\" x2=\"" + fmt("%.2f", kLeft) +
       "\" y2=\"" + fmt("%.2f", kTop + ph) + "\"/>\n";
  o += "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int i = 0; i < kTicks; ++i) {
    const double f = static_cast<double>(i) / (kTicks - 1);
    const double xv = xr.lo + f * (xr.hi - xr.lo);
    const double yv = yr.lo + f * (yr.hi - yr.lo);
    const std::string px = fmt("%.2f", X(xv));
    const std::string py = fmt("%.2f", Y(yv));
    o += "<line x1=\"" + px + "\" y1=\"" + fmt("%.2f", kTop + ph) + "\" x2=\"" + px + "\" y2=\"" +
         fmt("%.2f", kTop + ph + 6) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + px + "\" y=\"" + fmt("%.2f", kTop + ph + 22) + "\" text-anchor=\"middle\">" +
         fmt("%.4g", xv) + "</text>\n";
    o += "<line x1=\"" + fmt("%.2f", kLeft - 6) + "\" y1=\"" + py + "\" x2=\"" + fmt("%.2f", kLeft) +
         "\" y2=\"" + py + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fmt("%.2f", kLeft - 10) + "\" y=\"" + fmt("%.2f", Y(yv) + 4) +
         "\" text-anchor=\"end\">" + fmt("%.6g", yv) + "</text>\n";
  }
  o += "<text x=\"" + fmt("%.2f", kLeft + 0.5 * pw) + "\" y=\"" + fmt("%.2f", kHeight - 20) +
       "\" text-anchor=\"middle\" font-size=\"14\">" + escape(data.x_label) + "</text>\n";
  o += "<text x=\"20\" y=\"" + fmt("%.2f", kTop + 0.5 * ph) + "\" text-anchor=\"middle\" font-size=\"14\" "
       "transform=\"rotate(-90 20 " + fmt("%.2f", kTop + 0.5 * ph) + ")\">" + escape(data.y_label) + "</text>\n";
  o += "</g>\n";

  for (std::size_t k = 0; k < data.series.size(); ++k) {
    const Series& s = data.series[k];
    const std::string color = kColors[k % std::size(kColors)];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) points += ' ';
      points += fmt("%.2f", X(s.x[i])) + "," + fmt("%.2f", Y(s.y[i]));
    }
    o += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      o += "<circle cx=\"" + fmt("%.2f", X(s.x[i])) + "\" cy=\"" + fmt("%.2f", Y(s.y[i])) + "\" r=\"3\" fill=\"" +
           color + "\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    o += "<line x1=\"" + fmt("%.2f", kWidth - kRight - 190) + "\" y1=\"" + fmt("%.2f", ly) + "\" x2=\"" +
         fmt("%.2f", kWidth - kRight - 170) + "\" y2=\"" + fmt("%.2f", ly) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + fmt("%.2f", kWidth - kRight - 164) + "\" y=\"" + fmt("%.2f", ly + 4) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(s.name) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

PlotFiles emit_plot_data(const PlotData& data, const std::string& directory, const std::string& stem) {
  if (point_count(data) == 0) throw Error(ErrorCode::EmptySeries, "nothing to plot");
  std::filesystem::create_directories(directory);
  PlotFiles f;
  f.csv = (std::filesystem::path(directory) / (stem + ".csv")).string();
  f.svg = (std::filesystem::path(directory) / (stem + ".svg")).string();
  io::write_text_file(f.csv, to_csv(data));
  io::write_text_file(f.svg, to_svg(data));
  return f;
}

}  // namespace sgv::plot
