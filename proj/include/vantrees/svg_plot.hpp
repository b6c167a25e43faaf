#pragma once

// Minimal standalone SVG line/marker charts.

#include <string>
#include <vector>

namespace vantrees {

enum class SeriesStyle { line, dashed, markers, line_markers };

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;  // non-finite points are skipped
  SeriesStyle style = SeriesStyle::line;
  std::string color = "#1f77b4";
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

/// `metadata` is embedded verbatim in a CDATA block.
std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series, const std::string& metadata = {});

}  // namespace vantrees
