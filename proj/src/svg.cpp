#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "crowdpivot/io.hpp"

namespace crowdpivot {

namespace {

const char* kPalette[] = {"#000000", "#1f77b4", "#d62728", "#2ca02c",
                          "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void append_text(std::string& out, double x, double y, const std::string& text,
                 const char* anchor = "middle") {
  out += "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"" +
         anchor + "\">" + text + "</text>\n";
}

void append_line(std::string& out, double x1, double y1, double x2, double y2) {
  out += "<line x1=\"" + px(x1) + "\" y1=\"" + px(y1) + "\" x2=\"" + px(x2) + "\" y2=\"" +
         px(y2) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
}

}  // namespace

std::string svg_line_chart(const BootstrapCurve& curve) {
  const double width = 640.0;
  const double height = 420.0;
  const double left = 70.0;
  const double right = width - 170.0;  // legend space
  const double top = 20.0;
  const double bottom = height - 50.0;

  double x_min = 0.0;
  double x_max = 1.0;
  if (!curve.sizes.empty()) {
    x_min = static_cast<double>(curve.sizes.front());
    x_max = static_cast<double>(curve.sizes.back());
    for (std::size_t s : curve.sizes) {
      x_min = std::min(x_min, static_cast<double>(s));
      x_max = std::max(x_max, static_cast<double>(s));
    }
  }
  if (x_max == x_min) x_max = x_min + 1.0;

  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();
  for (const auto& series : curve.mean_rmse) {
    for (double v : series) {
      if (std::isfinite(v)) {
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
      }
    }
  }
  if (!(y_min <= y_max)) {
    y_min = 0.0;
    y_max = 1.0;
  }
  if (y_max == y_min) {
    const double pad = std::max(0.5, std::abs(y_min) * 0.1);
    y_min -= pad;
    y_max += pad;
  } else {
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;
  }

  const auto sx = [&](double v) { return left + (v - x_min) / (x_max - x_min) * (right - left); };
  const auto sy = [&](double v) { return bottom - (v - y_min) / (y_max - y_min) * (bottom - top); };

  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + px(width) +
      "\" height=\"" + px(height) + "\" viewBox=\"0 0 " + px(width) + " " + px(height) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + px(width) + "\" height=\"" + px(height) +
         "\" fill=\"#ffffff\"/>\n";

  append_line(out, left, bottom, right, bottom);  // x axis
  append_line(out, left, bottom, left, top);      // y axis
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_min + (x_max - x_min) * i / 4.0;
    const double fy = y_min + (y_max - y_min) * i / 4.0;
    append_line(out, sx(fx), bottom, sx(fx), bottom + 4.0);
    append_text(out, sx(fx), bottom + 18.0, format_number(fx));
    append_line(out, left - 4.0, sy(fy), left, sy(fy));
    append_text(out, left - 8.0, sy(fy) + 4.0, format_number(fy), "end");
  }
  append_text(out, (left + right) / 2.0, height - 12.0, "crowd size");
  out += "<text x=\"16\" y=\"" + px((top + bottom) / 2.0) +
         "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         px((top + bottom) / 2.0) + ")\">mean RMSE</text>\n";

  for (std::size_t mi = 0; mi < curve.methods.size(); ++mi) {
    const char* color = kPalette[mi % kPaletteSize];
    std::string points;
    for (std::size_t si = 0; si < curve.sizes.size(); ++si) {
      const double v = curve.mean_rmse[mi][si];
      if (!std::isfinite(v)) continue;
      if (!points.empty()) points += ' ';
      points += px(sx(static_cast<double>(curve.sizes[si]))) + "," + px(sy(v));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    const double ly = top + 16.0 * static_cast<double>(mi) + 8.0;
    out += "<line x1=\"" + px(right + 12.0) + "\" y1=\"" + px(ly) + "\" x2=\"" +
           px(right + 34.0) + "\" y2=\"" + px(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"3\"/>\n";
    append_text(out, right + 40.0, ly + 4.0, method_text(curve.methods[mi]), "start");
  }

  out += "</svg>\n";
  return out;
}

std::string svg_region_chart(const RegionGrid& grid) {
  const double margin = 50.0;
  const double plot = 400.0;
  const double width = plot + 2.0 * margin;
  const double height = plot + 2.0 * margin;
  const double cell = plot / static_cast<double>(grid.resolution - 1);

  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + px(width) +
      "\" height=\"" + px(height) + "\" viewBox=\"0 0 " + px(width) + " " + px(height) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + px(width) + "\" height=\"" + px(height) +
         "\" fill=\"#ffffff\"/>\n";

  for (const RegionPoint& pt : grid.points) {
    if (!pt.inside) continue;
    const double x = margin + pt.p * plot - cell / 2.0;
    const double y = margin + (1.0 - pt.w) * plot - cell / 2.0;
    out += "<rect x=\"" + px(x) + "\" y=\"" + px(y) + "\" width=\"" + px(cell) +
           "\" height=\"" + px(cell) + "\" fill=\"#6699cc\"/>\n";
  }

  append_line(out, margin, margin + plot, margin + plot, margin + plot);
  append_line(out, margin, margin + plot, margin, margin);
  for (int i = 0; i <= 2; ++i) {
    const double frac = i / 2.0;
    append_text(out, margin + frac * plot, margin + plot + 18.0, format_number(frac));
    append_text(out, margin - 12.0, margin + (1.0 - frac) * plot + 4.0, format_number(frac),
                "end");
  }
  append_text(out, margin + plot / 2.0, height - 10.0, "maven share p");
  out += "<text x=\"16\" y=\"" + px(margin + plot / 2.0) +
         "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         px(margin + plot / 2.0) + ")\">private weight w</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace crowdpivot
