#pragma once

#include <string>
#include <vector>

#include "pexfem/errors.hpp"

namespace pexfem {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained SVG line chart with a log-scale y axis, one polyline per
/// series and a legend. Output is byte-identical for identical input.
void emit_plot(const std::vector<PlotSeries>& series, const std::string& path,
               const std::string& x_label = "time",
               const std::string& y_label = "relative error");

/// Convenience wrapper: plots every err_* column of an error-series CSV
/// against its time column.
void plot_csv(const std::string& csv_path, const std::string& svg_path);

} // namespace pexfem
