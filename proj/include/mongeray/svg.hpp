#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "mongeray/densities.hpp"
#include "mongeray/errors.hpp"
#include "mongeray/geometry.hpp"
#include "mongeray/transport.hpp"

namespace mongeray {

enum class Figure { rays, reflected };

inline Figure parse_figure(const std::string& name) {
  if (name == "rays") return Figure::rays;
  if (name == "reflected") return Figure::reflected;
  throw DomainError("unknown figure '" + name + "'");
}

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string hue_color(int i, int n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "hsl(%d,75%%,45%%)", (300 * i) / std::max(1, n - 1));
  return buf;
}

struct Canvas {
  double scale = 300.0;
  double margin = 30.0;
  double y_top = 1.0;
  double y_bottom = 0.0;

  double px(double x1) const { return margin + (x1 + 1.0) * scale; }
  double py(double x2) const { return margin + (y_top - x2) * scale; }
  double width() const { return 2.0 * margin + 2.0 * scale; }
  double height() const { return 2.0 * margin + (y_top - y_bottom) * scale; }
};

}  // namespace detail

/// Static SVG of the domain, a fan of rays l_a and, for each ray, the point
/// where it crosses the vertical axis (filled) together with its image under
/// the map (open circle) in the same color. The reflected figure mirrors
/// everything across the x1-axis.
inline void render_svg(std::ostream& out, const DensityPair& pair, Figure figure, int n_rays = 9) {
  if (n_rays < 1) throw DomainError("render: need at least one ray");
  const bool mirror = figure == Figure::reflected;
  detail::Canvas cv;
  if (mirror) cv.y_bottom = -1.0;
  const auto& profile = pair.profile();

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(cv.width()) << "\" height=\""
      << detail::fmt(cv.height()) << "\" viewBox=\"0 0 " << detail::fmt(cv.width()) << ' ' << detail::fmt(cv.height())
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  std::string outline = detail::fmt(cv.px(-1)) + ',' + detail::fmt(cv.py(0)) + ' ' + detail::fmt(cv.px(1)) + ',' +
                        detail::fmt(cv.py(1)) + ' ' + detail::fmt(cv.px(1)) + ',' +
                        detail::fmt(cv.py(mirror ? -1.0 : 0.0));
  out << "<polygon points=\"" << outline << "\" fill=\"#f4f4f4\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  out << "<line x1=\"" << detail::fmt(cv.px(0)) << "\" y1=\"" << detail::fmt(cv.py(mirror ? -0.5 : 0.0))
      << "\" x2=\"" << detail::fmt(cv.px(0)) << "\" y2=\"" << detail::fmt(cv.py(0.5))
      << "\" stroke=\"gray\" stroke-dasharray=\"4,3\"/>\n";

  const TransportEvaluator map(pair);
  std::vector<double> signs{1.0};
  if (mirror) signs.push_back(-1.0);
  for (int i = 0; i < n_rays; ++i) {
    const double a = (i + 1.0) / (n_rays + 1.0);
    const double w = profile.eval(a);
    const std::string color = detail::hue_color(i, n_rays);
    const double z = map.on_ray(a, 0.0);
    for (double sg : signs) {
      out << "<line x1=\"" << detail::fmt(cv.px(-a)) << "\" y1=\"" << detail::fmt(cv.py(0)) << "\" x2=\""
          << detail::fmt(cv.px(1)) << "\" y2=\"" << detail::fmt(cv.py(sg * w * (1.0 + a))) << "\" stroke=\"" << color
          << "\" stroke-width=\"1\"/>\n";
      out << "<circle cx=\"" << detail::fmt(cv.px(0)) << "\" cy=\"" << detail::fmt(cv.py(sg * a * w))
          << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
      out << "<circle cx=\"" << detail::fmt(cv.px(z)) << "\" cy=\"" << detail::fmt(cv.py(sg * w * (z + a)))
          << "\" r=\"5\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    }
  }
  out << "<text x=\"" << detail::fmt(cv.margin) << "\" y=\"" << detail::fmt(cv.margin - 10.0)
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << profile.name() << "  c=" << pair.c() << "</text>\n";
  out << "</svg>\n";
}

}  // namespace mongeray
