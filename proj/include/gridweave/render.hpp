#pragma once

#include <array>
#include <string>
#include <string_view>

#include "gridweave/model.hpp"

namespace gridweave {

/// 20-color categorical cycle; cluster id k takes entry k % 20.
inline constexpr std::array<std::string_view, 20> kPalette = {
    "#1f77b4", "#aec7e8", "#ff7f0e", "#ffbb78", "#2ca02c", "#98df8a", "#d62728",
    "#ff9896", "#9467bd", "#c5b0d5", "#8c564b", "#c49c94", "#e377c2", "#f7b6d2",
    "#7f7f7f", "#c7c7c7", "#bcbd22", "#dbdb8d", "#17becf", "#9edae5"};

inline constexpr std::string_view kEmptyColor = "#ffffff";

std::string_view cluster_color(ClusterId cluster);

struct RenderStyle {
  int cell_px = 20;
  double stroke_width = 2.0;
  bool show_ids = false;
};

/// Throws Error("invalid_style") when cell_px < 4 or the stroke width is negative.
void validate_style(const RenderStyle& style);

/// SVG document: one <rect class="cell"> per grid cell in index order, then one
/// <path class="boundary"> per maximal straight run of edges separating cells
/// of different labels. With show_ids, occupied cells carry a <text> with the
/// sample id (or index when `samples` is null). Output depends only on inputs.
std::string render_svg(const GridLayout& layout, const RenderStyle& style = {},
                       const SampleSet* samples = nullptr);

} // namespace gridweave
