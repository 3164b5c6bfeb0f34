#include "pexfem/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pexfem {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#e6b800",
                          "#2ca02c", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

} // namespace

void emit_plot(const std::vector<PlotSeries>& series, const std::string& path,
               const std::string& x_label, const std::string& y_label) {
  if (series.empty())
    throw ConfigError("emit_plot: no series to plot");

  const double W = 800, Hgt = 500;
  const double ml = 70, mr = 20, mt = 20, mb = 50;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty())
      throw ConfigError("emit_plot: series '" + s.label +
                        "' is empty or ragged");
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
        continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      const double y = std::max(s.y[i], 1e-300);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin) || !std::isfinite(ymin))
    throw ConfigError("emit_plot: no finite data");
  if (xmax == xmin)
    xmax = xmin + 1.0;
  double ly0 = std::floor(std::log10(ymin));
  double ly1 = std::ceil(std::log10(ymax));
  if (ly1 <= ly0)
    ly1 = ly0 + 1;

  auto X = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  auto Y = [&](double y) {
    const double ly = std::log10(std::max(y, 1e-300));
    return Hgt - mb - (ly - ly0) / (ly1 - ly0) * (Hgt - mt - mb);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << Hgt << "\" viewBox=\"0 0 " << W << " " << Hgt
      << "\">\n";
  svg << "<rect width=\"" << W << "\" height=\"" << Hgt
      << "\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
      << "\" height=\"" << Hgt - mt - mb
      << "\" fill=\"none\" stroke=\"#333\"/>\n";

  // y grid: powers of ten
  for (double d = ly0; d <= ly1 + 0.5; d += 1.0) {
    const double y = Y(std::pow(10.0, d));
    svg << "<line x1=\"" << ml << "\" y1=\"" << num(y) << "\" x2=\""
        << W - mr << "\" y2=\"" << num(y)
        << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\" font-size=\"12\">1e" << static_cast<int>(d)
        << "</text>\n";
  }
  // x ticks: 5 evenly spaced
  for (int k = 0; k <= 4; ++k) {
    const double x = xmin + k * (xmax - xmin) / 4.0;
    svg << "<line x1=\"" << num(X(x)) << "\" y1=\"" << Hgt - mb << "\" x2=\""
        << num(X(x)) << "\" y2=\"" << Hgt - mb + 5 << "\" stroke=\"#333\"/>\n";
    svg << "<text x=\"" << num(X(x)) << "\" y=\"" << Hgt - mb + 20
        << "\" text-anchor=\"middle\" font-size=\"12\">" << num(x)
        << "</text>\n";
  }
  svg << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << Hgt - 8
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label
      << "</text>\n";
  svg << "<text x=\"16\" y=\"" << (mt + Hgt - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << (mt + Hgt - mb) / 2 << ")\">" << y_label << "</text>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % 6];
    std::ostringstream pts;
    int npts = 0;
    for (size_t i = 0; i < series[s].x.size(); ++i) {
      if (!std::isfinite(series[s].x[i]) || !std::isfinite(series[s].y[i]))
        continue;
      pts << num(X(series[s].x[i])) << "," << num(Y(series[s].y[i])) << " ";
      ++npts;
    }
    if (npts == 1) {
      svg << "<circle cx=\"" << num(X(series[s].x[0])) << "\" cy=\""
          << num(Y(std::max(series[s].y[0], 1e-300))) << "\" r=\"3\" fill=\""
          << color << "\"/>\n";
    } else {
      svg << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    }
    const double lx = ml + 12, ly = mt + 16 + 18.0 * s;
    svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24
        << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\">" << series[s].label << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path);
  if (!out)
    throw IoError("cannot write svg: " + path);
  out << svg.str();
}

void plot_csv(const std::string& csv_path, const std::string& svg_path) {
  std::ifstream in(csv_path);
  if (!in)
    throw IoError("cannot open csv: " + csv_path);
  std::string header;
  if (!std::getline(in, header))
    throw ConfigError("csv is empty: " + csv_path);

  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ','))
      cols.push_back(c);
  }
  int time_col = -1;
  std::vector<int> ycols;
  for (size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == "time")
      time_col = static_cast<int>(i);
    else if (cols[i].rfind("err_", 0) == 0 || cols[i].find("norm") != std::string::npos ||
             cols[i] == "monitor_E")
      ycols.push_back(static_cast<int>(i));
  }
  if (time_col < 0 || ycols.empty())
    throw ConfigError("csv has no time/err columns to plot: " + csv_path);

  std::vector<PlotSeries> series(ycols.size());
  for (size_t s = 0; s < ycols.size(); ++s)
    series[s].label = cols[ycols[s]];

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    std::stringstream ss(line);
    std::string item;
    std::vector<double> vals;
    while (std::getline(ss, item, ','))
      vals.push_back(std::strtod(item.c_str(), nullptr));
    if (vals.size() != cols.size())
      throw ConfigError("ragged csv row in " + csv_path);
    for (size_t s = 0; s < ycols.size(); ++s) {
      series[s].x.push_back(vals[time_col]);
      series[s].y.push_back(vals[ycols[s]]);
    }
  }
  emit_plot(series, svg_path);
}

} // namespace pexfem
