// Minimal SVG line charts for sweep output. Anything fancier should read the
// CSV with external tooling.
#ifndef MEMBENCH_TOOLS_SVG_HPP
#define MEMBENCH_TOOLS_SVG_HPP

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

namespace membench::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

inline void write_line_chart(std::ostream& os, const std::string& title,
                             const std::string& xlabel,
                             const std::string& ylabel,
                             const std::vector<Series>& series) {
  const double width = 640, height = 400;
  const double ml = 60, mr = 140, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        first = false;
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  ymin = std::min(ymin, 0.0);
  if (ymax == ymin) ymax = ymin + 1;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
     << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"12\">" << xlabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
     << "transform=\"rotate(-90 16 " << mt + ph / 2 << ")\">" << ylabel
     << "</text>\n";

  // Axis extents as tick labels.
  os << "<text x=\"" << ml << "\" y=\"" << mt + ph + 16
     << "\" font-family=\"sans-serif\" font-size=\"10\">" << xmin
     << "</text>\n";
  os << "<text x=\"" << ml + pw << "\" y=\"" << mt + ph + 16
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
     << xmax << "</text>\n";
  os << "<text x=\"" << ml - 4 << "\" y=\"" << py(ymax) + 4
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
     << ymax << "</text>\n";
  os << "<text x=\"" << ml - 4 << "\" y=\"" << py(ymin)
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
     << ymin << "</text>\n";

  int color = 0;
  for (const Series& s : series) {
    const char* c = palette[color % 8];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" "
       << "points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      os << px(s.x[i]) << "," << py(s.y[i]) << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"" << ml + pw + 8 << "\" y=\"" << mt + 14 * (color + 1)
       << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << c
       << "\">" << s.label << "</text>\n";
    ++color;
  }
  os << "</svg>\n";
}

}  // namespace membench::svg

#endif
