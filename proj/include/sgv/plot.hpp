#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sgv/verify.hpp"

namespace sgv::plot {

enum class PlotKind { SharpnessVsAspect, KbarVsLambda1, AlphaVsDelta };

// "sharpness-vs-aspect" | "kbar-vs-lambda1" | "alpha-vs-delta"
PlotKind parse_kind(std::string_view name);
std::string to_string(PlotKind kind);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotData {
  PlotKind kind = PlotKind::SharpnessVsAspect;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

// Rows that carry an error are skipped. Throws EmptySeries when nothing is left.
PlotData from_records(const std::vector<verify::VerificationRecord>& records, PlotKind kind);
// alpha(delta) from the gradient constants at fixed sigma.
PlotData alpha_vs_delta(const std::vector<double>& deltas, double sigma, double Lambda_rough);

// Long format: series,x,y with %.17g numbers.
std::string to_csv(const PlotData& data);
// Self-contained 800x600 line chart with five ticks per axis.
std::string to_svg(const PlotData& data);

struct PlotFiles {
  std::string csv;
  std::string svg;
};
PlotFiles emit_plot_data(const PlotData& data, const std::string& directory, const std::string& stem);

}  // namespace sgv::plot
