#include "gridweave/render.hpp"

#include <cstdio>
#include <sstream>

namespace gridweave {

namespace {

std::string escape_xml(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    case '\'': out += "&apos;"; break;
    default: out += c;
    }
  }
  return out;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

} // namespace

std::string_view cluster_color(ClusterId cluster) {
  if (cluster < 0) return kEmptyColor;
  return kPalette[static_cast<std::size_t>(cluster) % kPalette.size()];
}

void validate_style(const RenderStyle& style) {
  if (style.cell_px < 4)
    throw Error("invalid_style", "cell size must be at least 4 px, got " + std::to_string(style.cell_px));
  if (!(style.stroke_width >= 0.0)) throw Error("invalid_style", "stroke width must be non-negative");
}

std::string render_svg(const GridLayout& layout, const RenderStyle& style, const SampleSet* samples) {
  validate_style(style);
  require_valid(layout);
  if (samples && samples->size() != layout.sample_count())
    throw Error("invalid_layout", "layout and sample set differ in size");
  const GridSpec& g = layout.spec;
  const int px = style.cell_px;
  const auto label = [&](int col, int row) { return layout.labels[g.index({col, row})]; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << g.width * px << "\" height=\""
      << g.height * px << "\" viewBox=\"0 0 " << g.width * px << ' ' << g.height * px << "\">\n";
  for (CellIndex i = 0; i < g.capacity(); ++i) {
    const Cell c = g.cell(i);
    out << "<rect class=\"cell\" x=\"" << c.col * px << "\" y=\"" << c.row * px << "\" width=\"" << px
        << "\" height=\"" << px << "\" fill=\"" << cluster_color(layout.labels[i]) << "\"/>\n";
  }

  const std::string stroke = number(style.stroke_width);
  const auto segment = [&](int x0, int y0, int x1, int y1) {
    out << "<path class=\"boundary\" d=\"M" << x0 * px << ' ' << y0 * px << " L" << x1 * px << ' '
        << y1 * px << "\" stroke=\"#000000\" stroke-width=\"" << stroke
        << "\" stroke-linecap=\"square\" fill=\"none\"/>\n";
  };
  // Horizontal runs lie on y = row, between rows row - 1 and row.
  for (int row = 1; row < g.height; ++row) {
    int start = -1;
    for (int col = 0; col <= g.width; ++col) {
      const bool edge = col < g.width && label(col, row - 1) != label(col, row);
      if (edge && start < 0) start = col;
      if (!edge && start >= 0) {
        segment(start, row, col, row);
        start = -1;
      }
    }
  }
  for (int col = 1; col < g.width; ++col) {
    int start = -1;
    for (int row = 0; row <= g.height; ++row) {
      const bool edge = row < g.height && label(col - 1, row) != label(col, row);
      if (edge && start < 0) start = row;
      if (!edge && start >= 0) {
        segment(col, start, col, row);
        start = -1;
      }
    }
  }

  if (style.show_ids) {
    const double font = px * 0.3;
    for (CellIndex i = 0; i < g.capacity(); ++i) {
      const SampleIndex s = layout.assignment.sample_of[i];
      if (s == kNoSample) continue;
      const Point p = g.center(i);
      const std::string text = samples ? samples->samples[s].id : std::to_string(s);
      out << "<text x=\"" << number(p.x * px) << "\" y=\"" << number(p.y * px)
          << "\" font-size=\"" << number(font)
          << "\" text-anchor=\"middle\" dominant-baseline=\"central\">" << escape_xml(text)
          << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

} // namespace gridweave
