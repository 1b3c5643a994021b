#include "stationplot/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace stationplot {
namespace {

// Fallback fill colors for class tags not present in PlotStyle::class_colors,
// assigned in first-seen order.
constexpr const char* kPalette[] = {"#d62728", "#9467bd", "#8c564b",
                                    "#e377c2", "#7f7f7f", "#bcbd22"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

std::string resolve_color(const PlotStyle& style, const std::string& label) {
  auto it = style.class_colors.find(label);
  if (it != style.class_colors.end()) {
    return it->second;
  }
  // Hash-free deterministic fallback: position of the label among the sorted
  // configured tags does not apply, so derive from the label bytes.
  std::size_t sum = 0;
  for (unsigned char c : label) {
    sum = sum * 131 + c;
  }
  return kPalette[sum % std::size(kPalette)];
}

// Largest "nice" step (1, 2 or 5 times a power of ten) giving at most
// `count` intervals over `range`.
double nice_step(double range, int count) {
  const double raw = range / std::max(1, count);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      return m * mag;
    }
  }
  return 10.0 * mag;
}

struct Scale {
  double lo, hi;       // data range after 5% expansion
  double p0, p1;       // pixel range (p0 maps lo, p1 maps hi)
  double at(double v) const { return p0 + (v - lo) / (hi - lo) * (p1 - p0); }
};

Scale make_scale(double lo, double hi, double p0, double p1) {
  double pad = (hi - lo) * 0.05;
  if (!(pad > 0.0)) {
    pad = std::max(1.0, std::abs(lo) * 0.05);
  }
  return Scale{lo - pad, hi + pad, p0, p1};
}

void emit_ticks(std::string& svg, const Scale& x, const Scale& y, int count) {
  const double xstep = nice_step(x.hi - x.lo, count);
  const double ystep = nice_step(y.hi - y.lo, count);
  for (double v = std::ceil(x.lo / xstep) * xstep; v <= x.hi + xstep * 1e-9;
       v += xstep) {
    const double px = x.at(v);
    svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(y.p0) + "\" x2=\"" +
           fmt(px) + "\" y2=\"" + fmt(y.p0 + 4) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(y.p0 + 16) +
           "\" font-size=\"10\" text-anchor=\"middle\">" + fmt(v) + "</text>\n";
  }
  for (double v = std::ceil(y.lo / ystep) * ystep; v <= y.hi + ystep * 1e-9;
       v += ystep) {
    const double py = y.at(v);
    svg += "<line x1=\"" + fmt(x.p0 - 4) + "\" y1=\"" + fmt(py) + "\" x2=\"" +
           fmt(x.p0) + "\" y2=\"" + fmt(py) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt(x.p0 - 6) + "\" y=\"" + fmt(py + 3) +
           "\" font-size=\"10\" text-anchor=\"end\">" + fmt(v) + "</text>\n";
  }
}

void emit_frame(std::string& svg, const Scale& x, const Scale& y) {
  svg += "<rect x=\"" + fmt(x.p0) + "\" y=\"" + fmt(y.p1) + "\" width=\"" +
         fmt(x.p1 - x.p0) + "\" height=\"" + fmt(y.p0 - y.p1) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";
}

void emit_axis_labels(std::string& svg, const Scale& x, const Scale& y,
                      const std::string& xlabel, const std::string& ylabel) {
  svg += "<text x=\"" + fmt((x.p0 + x.p1) / 2) + "\" y=\"" + fmt(y.p0 + 32) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + xml_escape(xlabel) +
         "</text>\n";
  svg += "<text x=\"" + fmt(x.p0 - 38) + "\" y=\"" + fmt((y.p0 + y.p1) / 2) +
         "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 " +
         fmt(x.p0 - 38) + " " + fmt((y.p0 + y.p1) / 2) + ")\">" +
         xml_escape(ylabel) + "</text>\n";
}

std::string svg_open(int width, int height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n<rect width=\"100%\" height=\"100%\" "
         "fill=\"white\"/>\n";
}

std::string axis_name(int diff_order) {
  return "Δ^" + std::to_string(diff_order) + " x(t)";
}

}  // namespace

void validate_style(const PlotStyle& style) {
  if (style.width <= 0 || style.height <= 0) {
    throw ValidationError("plot style: dimensions must be positive");
  }
  if (style.margin * 2 >= style.width || style.margin * 2 >= style.height) {
    throw ValidationError("plot style: margins must be below half of each dimension");
  }
  if (style.axis_tick_count < 1) {
    throw ValidationError("plot style: axis_tick_count must be >= 1");
  }
}

std::string render_stationplot(const PointCloud& cloud, const ConvexHull2D* hull,
                               const PlotStyle& style,
                               const std::string& class_label) {
  validate_style(style);
  if (cloud.count() == 0) {
    throw ValidationError("render_stationplot: empty cloud");
  }
  const std::string color = resolve_color(style, class_label);

  // A 2D cloud occupies one panel; a 3D cloud is shown as the three
  // orthogonal coordinate-pair projections side by side.
  std::vector<std::pair<int, int>> panels;
  if (cloud.dimension == 2) {
    panels = {{0, 1}};
  } else {
    panels = {{0, 1}, {0, 2}, {1, 2}};
  }
  const int doc_width = style.width * static_cast<int>(panels.size());
  std::string svg = svg_open(doc_width, style.height);

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto [cx, cy] = panels[p];
    const double x0 = static_cast<double>(style.width) * p;
    const Scale sx = make_scale(cloud.points.col(cx).minCoeff(),
                                cloud.points.col(cx).maxCoeff(),
                                x0 + style.margin, x0 + style.width - style.margin);
    const Scale sy = make_scale(cloud.points.col(cy).minCoeff(),
                                cloud.points.col(cy).maxCoeff(),
                                style.height - style.margin, style.margin);
    emit_frame(svg, sx, sy);
    emit_ticks(svg, sx, sy, style.axis_tick_count);
    emit_axis_labels(svg, sx, sy, axis_name(cloud.order + cx),
                     axis_name(cloud.order + cy));
    // The hull is defined on the (first, second) coordinates, so it only
    // belongs on that projection.
    if (hull != nullptr && cx == 0 && cy == 1) {
      std::string pts;
      for (Eigen::Index i = 0; i < hull->vertices.rows(); ++i) {
        if (i > 0) {
          pts += ' ';
        }
        pts += fmt(sx.at(hull->vertices(i, 0))) + "," +
               fmt(sy.at(hull->vertices(i, 1)));
      }
      svg += "<polygon points=\"" + pts + "\" fill=\"" + color +
             "\" fill-opacity=\"0.15\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
    }
    for (Eigen::Index i = 0; i < cloud.points.rows(); ++i) {
      svg += "<circle cx=\"" + fmt(sx.at(cloud.points(i, cx))) + "\" cy=\"" +
             fmt(sy.at(cloud.points(i, cy))) + "\" r=\"" +
             fmt(style.point_radius) + "\" fill=\"" + color +
             "\" fill-opacity=\"0.7\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_boxplot(
    const std::vector<std::pair<std::string, BoxplotSummary>>& summaries,
    const PlotStyle& style, const std::string& value_axis_label) {
  validate_style(style);
  if (summaries.empty()) {
    throw ValidationError("render_boxplot: need at least one summary");
  }

  double lo = summaries[0].second.whisker_low;
  double hi = summaries[0].second.whisker_high;
  for (const auto& [label, s] : summaries) {
    lo = std::min({lo, s.whisker_low, s.q1});
    hi = std::max({hi, s.whisker_high, s.q3});
    for (double v : s.outliers) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }

  const Scale sy = make_scale(lo, hi, style.height - style.margin, style.margin);
  const double inner_w = style.width - 2.0 * style.margin;
  const double slot = inner_w / static_cast<double>(summaries.size());
  const double box_w = slot * 0.5;

  std::string svg = svg_open(style.width, style.height);
  const Scale sx{0, 1, static_cast<double>(style.margin),
                 static_cast<double>(style.width - style.margin)};
  emit_frame(svg, sx, sy);

  // Value-axis ticks only; the category axis carries the labels.
  const double ystep = nice_step(sy.hi - sy.lo, style.axis_tick_count);
  for (double v = std::ceil(sy.lo / ystep) * ystep; v <= sy.hi + ystep * 1e-9;
       v += ystep) {
    const double py = sy.at(v);
    svg += "<line x1=\"" + fmt(sx.p0 - 4) + "\" y1=\"" + fmt(py) + "\" x2=\"" +
           fmt(sx.p0) + "\" y2=\"" + fmt(py) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt(sx.p0 - 6) + "\" y=\"" + fmt(py + 3) +
           "\" font-size=\"10\" text-anchor=\"end\">" + fmt(v) + "</text>\n";
  }
  if (!value_axis_label.empty()) {
    svg += "<text x=\"" + fmt(sx.p0 - 38) + "\" y=\"" +
           fmt((sy.p0 + sy.p1) / 2) +
           "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 " +
           fmt(sx.p0 - 38) + " " + fmt((sy.p0 + sy.p1) / 2) + ")\">" +
           xml_escape(value_axis_label) + "</text>\n";
  }

  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const auto& [label, s] = summaries[i];
    const std::string color = resolve_color(style, label);
    const double cx = style.margin + slot * (static_cast<double>(i) + 0.5);
    const double half = box_w / 2.0;

    // Whisker stems and caps.
    for (auto [from, to] : {std::pair{s.whisker_low, s.q1},
                            std::pair{s.q3, s.whisker_high}}) {
      svg += "<line x1=\"" + fmt(cx) + "\" y1=\"" + fmt(sy.at(from)) +
             "\" x2=\"" + fmt(cx) + "\" y2=\"" + fmt(sy.at(to)) +
             "\" stroke=\"#333\"/>\n";
    }
    for (double v : {s.whisker_low, s.whisker_high}) {
      svg += "<line x1=\"" + fmt(cx - half / 2) + "\" y1=\"" + fmt(sy.at(v)) +
             "\" x2=\"" + fmt(cx + half / 2) + "\" y2=\"" + fmt(sy.at(v)) +
             "\" stroke=\"#333\"/>\n";
    }
    // Box (a zero-height box degenerates to its median line, still visible).
    svg += "<rect x=\"" + fmt(cx - half) + "\" y=\"" + fmt(sy.at(s.q3)) +
           "\" width=\"" + fmt(box_w) + "\" height=\"" +
           fmt(sy.at(s.q1) - sy.at(s.q3)) + "\" fill=\"" + color +
           "\" fill-opacity=\"0.3\" stroke=\"" + color + "\"/>\n";
    svg += "<line x1=\"" + fmt(cx - half) + "\" y1=\"" + fmt(sy.at(s.median)) +
           "\" x2=\"" + fmt(cx + half) + "\" y2=\"" + fmt(sy.at(s.median)) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    for (double v : s.outliers) {
      svg += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(sy.at(v)) +
             "\" r=\"" + fmt(style.point_radius) + "\" fill=\"none\" stroke=\"" +
             color + "\"/>\n";
    }
    svg += "<text x=\"" + fmt(cx) + "\" y=\"" + fmt(sy.p0 + 16) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + xml_escape(label) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace stationplot
