#include <doctest.h>

#include <cstdlib>
#include <random>
#include <regex>
#include <set>

#include "gridweave/render.hpp"
#include "support.hpp"

using namespace gridweave;
using namespace gridweave::testing;

namespace {

int count_of(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::vector<std::string> fills(const std::string& svg) {
  static const std::regex re(R"re(<rect class="cell"[^>]*fill="(#[0-9a-f]{6})")re");
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
    out.push_back((*it)[1]);
  return out;
}

// Sum of boundary path lengths in cell units; every path must be axis-aligned.
long boundary_length(const std::string& svg, int px) {
  static const std::regex re(R"re(<path class="boundary" d="M(\d+) (\d+) L(\d+) (\d+)")re");
  long total = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
    const int x0 = std::stoi((*it)[1]), y0 = std::stoi((*it)[2]);
    const int x1 = std::stoi((*it)[3]), y1 = std::stoi((*it)[4]);
    CHECK((x0 == x1 || y0 == y1));
    total += (std::abs(x1 - x0) + std::abs(y1 - y0)) / px;
  }
  return total;
}

long differing_edges(const GridLayout& l) {
  long n = 0;
  const GridSpec& g = l.spec;
  for (int r = 0; r < g.height; ++r)
    for (int c = 0; c < g.width; ++c) {
      const ClusterId here = l.labels[g.index({c, r})];
      if (c + 1 < g.width && l.labels[g.index({c + 1, r})] != here) ++n;
      if (r + 1 < g.height && l.labels[g.index({c, r + 1})] != here) ++n;
    }
  return n;
}

} // namespace

TEST_CASE("palette cycles and empty cells are white") {
  CHECK(cluster_color(0) == kPalette[0]);
  CHECK(cluster_color(21) == kPalette[1]);
  CHECK(cluster_color(kEmptyCluster) == kEmptyColor);
  CHECK(std::set<std::string_view>(kPalette.begin(), kPalette.end()).size() == 20);
}

TEST_CASE("a single cell renders one rect and no boundary") {
  const GridLayout l = layout_from_rows({"A"});
  const std::string svg = render_svg(l);
  CHECK(count_of(svg, "<rect class=\"cell\"") == 1);
  CHECK(count_of(svg, "<path") == 0);
  CHECK(svg.rfind("<svg", 0) == 0);
}

TEST_CASE("two clusters split down the middle give one boundary path") {
  const GridLayout l = layout_from_rows({"AB", "AB"});
  const std::string svg = render_svg(l, {10, 2.0, false});
  const auto f = fills(svg);
  REQUIRE(f.size() == 4);
  CHECK(std::set<std::string>(f.begin(), f.end()).size() == 2);
  CHECK(f[0] == f[2]);
  CHECK(count_of(svg, "<path class=\"boundary\"") == 1);
  CHECK(svg.find("d=\"M10 0 L10 20\"") != std::string::npos);
}

TEST_CASE("boundary paths cover exactly the edges between different labels") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int w = 2 + static_cast<int>(rng() % 9), h = 2 + static_cast<int>(rng() % 9);
    const int n = 1 + static_cast<int>(rng() % (w * h));
    const GridLayout l = random_layout(rng, {w, h}, n, 1 + static_cast<int>(rng() % 4));
    const std::string svg = render_svg(l, {8, 1.0, false});
    CHECK(count_of(svg, "<rect class=\"cell\"") == w * h);
    CHECK(boundary_length(svg, 8) == differing_edges(l));
  }
}

TEST_CASE("ids are escaped and output is deterministic") {
  const GridLayout l = layout_from_rows({"AB"});
  SampleSet s = samples_at({{0, 0}, {1, 0}}, {0, 1}, 2);
  s.samples[0].id = "a<b&\"c\"";
  const std::string svg = render_svg(l, {20, 2.0, true}, &s);
  CHECK(svg.find("a&lt;b&amp;&quot;c&quot;") != std::string::npos);
  CHECK(svg.find("a<b") == std::string::npos);
  CHECK(svg == render_svg(l, {20, 2.0, true}, &s));
  CHECK(count_of(render_svg(l, {20, 2.0, true}), "<text") == 2);
}

TEST_CASE("styles are validated") {
  const GridLayout l = layout_from_rows({"A"});
  CHECK_THROWS_AS(render_svg(l, {3, 1.0, false}), Error);
  CHECK_THROWS_AS(render_svg(l, {8, -1.0, false}), Error);
  CHECK_NOTHROW(render_svg(l, {4, 0.0, false}));
  const SampleSet two = samples_at({{0, 0}, {1, 0}}, {0, 0}, 1);
  CHECK_THROWS_AS(render_svg(l, {}, &two), Error);
}
