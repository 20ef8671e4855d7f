#include "gridweave/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace gridweave {

std::vector<ClusterId> SampleSet::clusters() const {
  std::vector<ClusterId> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.cluster);
  return out;
}

std::optional<SampleIndex> SampleSet::find(const std::string& id) const {
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (samples[i].id == id) return static_cast<SampleIndex>(i);
  return std::nullopt;
}

const std::string& SampleSet::cluster_name(ClusterId c) const {
  if (c < 0 || static_cast<std::size_t>(c) >= cluster_names.size())
    throw Error("invalid_samples", "unknown cluster id " + std::to_string(c));
  return cluster_names[c];
}

void validate_samples(const SampleSet& set) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < set.samples.size(); ++i) {
    const Sample& s = set.samples[i];
    if (!seen.insert(s.id).second)
      throw Error("invalid_samples", "duplicate sample id '" + s.id + "'");
    if (!std::isfinite(s.position.x) || !std::isfinite(s.position.y))
      throw Error("invalid_samples", "sample '" + s.id + "' has a non-finite position");
    if (s.cluster < 0 || static_cast<std::size_t>(s.cluster) >= set.cluster_names.size())
      throw Error("invalid_samples", "sample '" + s.id + "' has an unknown cluster id");
  }
  if (!set.similarities) return;
  const SimilarityMatrix& m = *set.similarities;
  const std::size_t n = set.samples.size();
  if (m.n != n || m.values.size() != n * n)
    throw Error("invalid_samples", "similarity matrix is " + std::to_string(m.n) + "x" +
                                       std::to_string(m.n) + " but there are " +
                                       std::to_string(n) + " samples");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(m.at(i, i) - 1.0) > 1e-9)
      throw Error("invalid_samples", "similarity diagonal must be 1 (row " + std::to_string(i) + ")");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m.at(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw Error("invalid_samples", "similarity outside [0,1] at (" + std::to_string(i) + "," +
                                           std::to_string(j) + ")");
      if (std::abs(v - m.at(j, i)) > 1e-9)
        throw Error("invalid_samples", "similarity matrix is not symmetric at (" +
                                           std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
}

SampleSet subset(const SampleSet& set, const std::vector<SampleIndex>& indices) {
  SampleSet out;
  out.cluster_names = set.cluster_names;
  out.samples.reserve(indices.size());
  for (SampleIndex i : indices) out.samples.push_back(set.samples.at(i));
  if (set.similarities) {
    SimilarityMatrix m;
    m.n = indices.size();
    m.values.reserve(m.n * m.n);
    for (SampleIndex i : indices)
      for (SampleIndex j : indices) m.values.push_back(set.similarities->at(i, j));
    out.similarities = std::move(m);
  }
  return out;
}

double GridSpec::diagonal() const {
  return std::sqrt(static_cast<double>(width) * width + static_cast<double>(height) * height);
}

void validate_grid(const GridSpec& spec) {
  if (spec.width < 1 || spec.height < 1)
    throw Error("invalid_grid", "grid must be at least 1x1, got " + std::to_string(spec.width) +
                                    "x" + std::to_string(spec.height));
}

GridSpec parse_grid(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw Error("invalid_grid", "expected WxH, got '" + text + "'");
  GridSpec spec;
  try {
    std::size_t used = 0;
    spec.width = std::stoi(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(text);
    const std::string h = text.substr(x + 1);
    spec.height = std::stoi(h, &used);
    if (used != h.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw Error("invalid_grid", "expected WxH, got '" + text + "'");
  }
  validate_grid(spec);
  return spec;
}

std::vector<ClusterId> GridLayout::cluster_ids() const {
  std::set<ClusterId> ids;
  for (ClusterId c : labels)
    if (c != kEmptyCluster) ids.insert(c);
  return {ids.begin(), ids.end()};
}

GridLayout make_layout(const GridSpec& spec, std::vector<ClusterId> sample_clusters,
                       std::vector<CellIndex> cell_of) {
  validate_grid(spec);
  if (cell_of.size() != sample_clusters.size())
    throw Error("invalid_layout", "cell map and cluster list differ in length");
  GridLayout layout;
  layout.spec = spec;
  layout.assignment.sample_of.assign(spec.capacity(), kNoSample);
  layout.labels.assign(spec.capacity(), kEmptyCluster);
  for (std::size_t s = 0; s < cell_of.size(); ++s) {
    const CellIndex c = cell_of[s];
    if (c < 0 || c >= spec.capacity())
      throw Error("invalid_layout", "sample " + std::to_string(s) + " mapped to out-of-range cell " +
                                        std::to_string(c));
    if (layout.assignment.sample_of[c] != kNoSample)
      throw Error("invalid_layout", "duplicate cell " + std::to_string(c));
    layout.assignment.sample_of[c] = static_cast<SampleIndex>(s);
    layout.labels[c] = sample_clusters[s];
  }
  layout.assignment.cell_of = std::move(cell_of);
  layout.sample_clusters = std::move(sample_clusters);
  return layout;
}

ValidationReport validate_layout(const GridLayout& layout) {
  ValidationReport report;
  auto& v = report.violations;
  const auto& spec = layout.spec;
  if (spec.width < 1 || spec.height < 1) {
    v.push_back("invalid grid dimensions");
    return report;
  }
  const auto cap = static_cast<std::size_t>(spec.capacity());
  const auto& a = layout.assignment;
  if (a.sample_of.size() != cap) v.push_back("sample_of size differs from grid capacity");
  if (layout.labels.size() != cap) v.push_back("labels size differs from grid capacity");
  if (a.cell_of.size() != layout.sample_clusters.size())
    v.push_back("cell_of size differs from sample count");
  if (layout.sample_clusters.size() > cap) v.push_back("more samples than cells");
  if (!v.empty()) return report;

  std::vector<int> hits(cap, 0);
  for (std::size_t s = 0; s < a.cell_of.size(); ++s) {
    const CellIndex c = a.cell_of[s];
    if (c < 0 || static_cast<std::size_t>(c) >= cap) {
      v.push_back("out-of-range cell " + std::to_string(c) + " for sample " + std::to_string(s));
      continue;
    }
    if (++hits[c] == 2) v.push_back("duplicate cell " + std::to_string(c));
    if (a.sample_of[c] != static_cast<SampleIndex>(s))
      v.push_back("sample_of/cell_of mismatch at cell " + std::to_string(c));
  }
  for (std::size_t c = 0; c < cap; ++c) {
    const SampleIndex s = a.sample_of[c];
    if (s == kNoSample) {
      if (layout.labels[c] != kEmptyCluster)
        v.push_back("label mismatch at cell " + std::to_string(c) + " (unassigned cell labeled)");
      continue;
    }
    if (s < 0 || static_cast<std::size_t>(s) >= a.cell_of.size()) {
      v.push_back("out-of-range sample " + std::to_string(s) + " at cell " + std::to_string(c));
      continue;
    }
    if (a.cell_of[s] != static_cast<CellIndex>(c))
      v.push_back("sample_of/cell_of mismatch at cell " + std::to_string(c));
    if (layout.labels[c] != layout.sample_clusters[s])
      v.push_back("label mismatch at cell " + std::to_string(c));
  }
  return report;
}

void require_valid(const GridLayout& layout) {
  const auto report = validate_layout(layout);
  if (report.ok()) return;
  std::ostringstream msg;
  msg << "invalid layout:";
  for (const auto& s : report.violations) msg << ' ' << s << ';';
  throw Error("invalid_layout", msg.str());
}

namespace {

struct Dir {
  std::int64_t dx = 0;
  std::int64_t dy = 0;
  friend bool operator==(const Dir&, const Dir&) = default;
};

} // namespace

std::vector<Ring> trace_boundary(const std::vector<Cell>& cells) {
  std::set<Cell> in(cells.begin(), cells.end());
  auto has = [&](int c, int r) { return in.count(Cell{c, r}) > 0; };

  // Directed unit edges with the interior on the left.
  std::map<LatticePoint, std::vector<Dir>> outgoing;
  std::size_t edge_count = 0;
  auto add = [&](std::int64_t x, std::int64_t y, Dir d) {
    outgoing[{x, y}].push_back(d);
    ++edge_count;
  };
  for (const Cell& c : in) {
    if (!has(c.col, c.row - 1)) add(c.col, c.row, {1, 0});
    if (!has(c.col + 1, c.row)) add(c.col + 1, c.row, {0, 1});
    if (!has(c.col, c.row + 1)) add(c.col + 1, c.row + 1, {-1, 0});
    if (!has(c.col - 1, c.row)) add(c.col, c.row + 1, {0, -1});
  }

  auto take = [&](LatticePoint at, Dir d) {
    auto& list = outgoing[at];
    list.erase(std::find(list.begin(), list.end(), d));
  };

  std::vector<Ring> rings;
  while (edge_count > 0) {
    auto start_it = std::find_if(outgoing.begin(), outgoing.end(),
                                 [](const auto& kv) { return !kv.second.empty(); });
    const LatticePoint start = start_it->first;
    Dir dir = start_it->second.front();
    take(start, dir);
    --edge_count;

    std::vector<LatticePoint> verts{start};
    std::vector<Dir> dirs{dir};
    LatticePoint at{start.x + dir.dx, start.y + dir.dy};
    while (!(at == start)) {
      auto& list = outgoing[at];
      // Left turn first, then straight, then right: keeps diagonal pinches apart.
      const Dir prefs[3] = {{-dir.dy, dir.dx}, dir, {dir.dy, -dir.dx}};
      Dir next{};
      bool found = false;
      for (const Dir& p : prefs) {
        if (std::find(list.begin(), list.end(), p) != list.end()) {
          next = p;
          found = true;
          break;
        }
      }
      if (!found) throw Error("internal", "boundary tracing lost its way");
      take(at, next);
      --edge_count;
      verts.push_back(at);
      dirs.push_back(next);
      dir = next;
      at = {at.x + dir.dx, at.y + dir.dy};
    }

    // Keep only corners: vertex i is a corner when the incoming and outgoing
    // directions differ.
    Ring ring;
    const std::size_t m = verts.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Dir& in_dir = dirs[(i + m - 1) % m];
      if (!(in_dir == dirs[i])) ring.push_back(verts[i]);
    }
    std::rotate(ring.begin(), std::min_element(ring.begin(), ring.end()), ring.end());
    rings.push_back(std::move(ring));
  }
  return rings;
}

std::vector<ClusterShape> extract_cluster_shapes(const GridLayout& layout) {
  require_valid(layout);
  std::map<ClusterId, std::vector<Cell>> by_cluster;
  for (CellIndex i = 0; i < layout.spec.capacity(); ++i) {
    const ClusterId c = layout.labels[i];
    if (c != kEmptyCluster) by_cluster[c].push_back(layout.spec.cell(i));
  }
  std::vector<ClusterShape> shapes;
  shapes.reserve(by_cluster.size());
  for (auto& [id, cells] : by_cluster) {
    std::sort(cells.begin(), cells.end());
    ClusterShape shape;
    shape.cluster = id;
    shape.boundary = trace_boundary(cells);
    shape.cells = std::move(cells);
    shapes.push_back(std::move(shape));
  }
  return shapes;
}

} // namespace gridweave
