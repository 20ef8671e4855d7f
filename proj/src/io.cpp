#include "gridweave/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gridweave {

using nlohmann::json;

namespace {

struct RawSample {
  std::string id;
  double x = 0.0, y = 0.0;
  std::string cluster;
  std::map<std::string, std::string> meta;
};

// Sorted cluster vocabulary, then samples in file order.
SampleSet assemble(std::vector<RawSample> raw) {
  std::set<std::string> names;
  for (const auto& r : raw) names.insert(r.cluster);
  SampleSet set;
  set.cluster_names.assign(names.begin(), names.end());
  std::map<std::string, ClusterId> ids;
  for (std::size_t k = 0; k < set.cluster_names.size(); ++k)
    ids[set.cluster_names[k]] = static_cast<ClusterId>(k);
  set.samples.reserve(raw.size());
  for (auto& r : raw)
    set.samples.push_back({std::move(r.id), {r.x, r.y}, ids.at(r.cluster), std::move(r.meta)});
  return set;
}

std::string record(std::size_t i) { return "record " + std::to_string(i + 1) + ": "; }

double finite_number(const json& v, const char* field, std::size_t i) {
  if (!v.is_number())
    throw Error("parse_error", record(i) + "field '" + field + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d))
    throw Error("invalid_samples", record(i) + "field '" + field + "' is not finite");
  return d;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("parse_error", std::string("malformed JSON: ") + e.what());
  }
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw Error("parse_error", "line " + std::to_string(line_no) + ": unterminated quote");
  out.push_back(std::move(field));
  return out;
}

double parse_double(const std::string& text, const char* field, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double d = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return d;
  } catch (const std::logic_error&) {
    throw Error("parse_error", "line " + std::to_string(line_no) + ": field '" + field +
                                   "' is not a number: '" + text + "'");
  }
}

} // namespace

SampleSet parse_samples_json(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("samples") || !doc["samples"].is_array())
    throw Error("parse_error", "expected an object with a 'samples' array");
  const json& arr = doc["samples"];
  std::vector<RawSample> raw;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& s = arr[i];
    if (!s.is_object()) throw Error("parse_error", record(i) + "expected an object");
    for (const char* key : {"id", "x", "y", "cluster"})
      if (!s.contains(key)) throw Error("parse_error", record(i) + "missing field '" + key + "'");
    if (!s["id"].is_string()) throw Error("parse_error", record(i) + "'id' must be a string");
    if (!s["cluster"].is_string())
      throw Error("parse_error", record(i) + "'cluster' must be a string");
    RawSample r;
    r.id = s["id"].get<std::string>();
    if (!seen.insert(r.id).second)
      throw Error("invalid_samples", record(i) + "duplicate sample id '" + r.id + "'");
    r.x = finite_number(s["x"], "x", i);
    r.y = finite_number(s["y"], "y", i);
    r.cluster = s["cluster"].get<std::string>();
    if (s.contains("meta") && !s["meta"].is_null()) {
      if (!s["meta"].is_object()) throw Error("parse_error", record(i) + "'meta' must be an object");
      for (const auto& [k, v] : s["meta"].items())
        r.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    raw.push_back(std::move(r));
  }
  SampleSet set = assemble(std::move(raw));

  if (doc.contains("similarities") && !doc["similarities"].is_null()) {
    const json& m = doc["similarities"];
    const std::size_t n = set.size();
    if (!m.is_array() || m.size() != n)
      throw Error("dimension_mismatch", "similarity matrix must have " + std::to_string(n) +
                                            " rows, got " +
                                            std::to_string(m.is_array() ? m.size() : 0));
    SimilarityMatrix sims;
    sims.n = n;
    sims.values.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!m[i].is_array() || m[i].size() != n)
        throw Error("dimension_mismatch", "similarity row " + std::to_string(i + 1) + " must have " +
                                              std::to_string(n) + " entries");
      for (const json& v : m[i]) {
        if (!v.is_number())
          throw Error("parse_error", "similarity row " + std::to_string(i + 1) + " has a non-number");
        sims.values.push_back(v.get<double>());
      }
    }
    set.similarities = std::move(sims);
  }
  validate_samples(set);
  return set;
}

SampleSet parse_samples_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) header = split_csv_line(line, line_no);
  }
  std::map<std::string, std::size_t> column;
  for (std::size_t k = 0; k < header.size(); ++k) column[header[k]] = k;
  for (const char* key : {"id", "x", "y", "cluster"})
    if (!column.count(key)) throw Error("parse_error", std::string("CSV header lacks column '") + key + "'");

  std::vector<RawSample> raw;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line, line_no);
    if (fields.size() != header.size())
      throw Error("parse_error", "line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
    RawSample r;
    r.id = fields[column["id"]];
    if (!seen.insert(r.id).second)
      throw Error("invalid_samples",
                  "line " + std::to_string(line_no) + ": duplicate sample id '" + r.id + "'");
    r.x = parse_double(fields[column["x"]], "x", line_no);
    r.y = parse_double(fields[column["y"]], "y", line_no);
    if (!std::isfinite(r.x) || !std::isfinite(r.y))
      throw Error("invalid_samples", "line " + std::to_string(line_no) + ": non-finite position");
    r.cluster = fields[column["cluster"]];
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] != "id" && header[k] != "x" && header[k] != "y" && header[k] != "cluster")
        r.meta[header[k]] = fields[k];
    raw.push_back(std::move(r));
  }
  SampleSet set = assemble(std::move(raw));
  validate_samples(set);
  return set;
}

SampleSet load_samples(const std::string& path) {
  const std::string text = read_text(path);
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  return csv ? parse_samples_csv(text) : parse_samples_json(text);
}

std::string samples_to_json(const SampleSet& samples) {
  json arr = json::array();
  for (const Sample& s : samples.samples) {
    json meta = json::object();
    for (const auto& [k, v] : s.meta) meta[k] = v;
    arr.push_back({{"id", s.id},
                   {"x", s.position.x},
                   {"y", s.position.y},
                   {"cluster", samples.cluster_name(s.cluster)},
                   {"meta", meta}});
  }
  json doc = {{"samples", arr}, {"similarities", nullptr}};
  if (samples.similarities) {
    const auto& m = *samples.similarities;
    json rows = json::array();
    for (std::size_t i = 0; i < m.n; ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < m.n; ++j) row.push_back(m.at(i, j));
      rows.push_back(row);
    }
    doc["similarities"] = rows;
  }
  return doc.dump(2) + "\n";
}

std::string layout_to_json(const GridLayout& layout, const SampleSet& samples) {
  require_valid(layout);
  if (layout.sample_count() != samples.size())
    throw Error("invalid_layout", "layout and sample set differ in size");
  json cells = json::array();
  for (CellIndex i = 0; i < layout.spec.capacity(); ++i) {
    const SampleIndex s = layout.assignment.sample_of[i];
    if (s == kNoSample) continue;
    const Cell c = layout.spec.cell(i);
    cells.push_back({{"col", c.col},
                     {"row", c.row},
                     {"sample", samples.samples[s].id},
                     {"cluster", samples.cluster_name(layout.sample_clusters[s])}});
  }
  const json doc = {{"version", kLayoutSchemaVersion},
                    {"grid", {{"w", layout.spec.width}, {"h", layout.spec.height}}},
                    {"cells", cells}};
  return doc.dump(2) + "\n";
}

namespace {

struct PlacedCell {
  Cell cell;
  std::string sample, cluster;
};

struct ParsedLayout {
  GridSpec spec;
  std::vector<PlacedCell> cells;
};

ParsedLayout parse_layout(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw Error("parse_error", "layout must be a JSON object");
  if (!doc.contains("version") || !doc["version"].is_number_integer())
    throw Error("parse_error", "layout lacks an integer 'version'");
  const int version = doc["version"].get<int>();
  if (version != kLayoutSchemaVersion)
    throw Error("unsupported_schema_version",
                "unsupported schema version " + std::to_string(version));
  ParsedLayout out;
  try {
    out.spec.width = doc.at("grid").at("w").get<int>();
    out.spec.height = doc.at("grid").at("h").get<int>();
  } catch (const json::exception&) {
    throw Error("parse_error", "layout lacks grid.w / grid.h integers");
  }
  validate_grid(out.spec);
  if (!doc.contains("cells") || !doc["cells"].is_array())
    throw Error("parse_error", "layout lacks a 'cells' array");
  const json& cells = doc["cells"];
  for (std::size_t i = 0; i < cells.size(); ++i) {
    try {
      const json& c = cells[i];
      out.cells.push_back({{c.at("col").get<int>(), c.at("row").get<int>()},
                           c.at("sample").get<std::string>(),
                           c.at("cluster").get<std::string>()});
    } catch (const json::exception&) {
      throw Error("parse_error", "cell " + std::to_string(i + 1) +
                                     ": expected col, row, sample and cluster");
    }
    if (!out.spec.contains(out.cells.back().cell))
      throw Error("invalid_layout", "cell " + std::to_string(i + 1) + " lies outside the grid");
  }
  return out;
}

} // namespace

LayoutDocument layout_document_from_json(const std::string& text) {
  const ParsedLayout parsed = parse_layout(text);
  std::vector<RawSample> raw;
  for (const auto& c : parsed.cells)
    raw.push_back({c.sample, c.cell.col + 0.5, c.cell.row + 0.5, c.cluster, {}});
  LayoutDocument out;
  out.samples = assemble(std::move(raw));
  validate_samples(out.samples);
  std::vector<CellIndex> cell_of;
  for (const auto& c : parsed.cells) cell_of.push_back(parsed.spec.index(c.cell));
  out.layout = make_layout(parsed.spec, out.samples.clusters(), std::move(cell_of));
  return out;
}

GridLayout layout_from_json(const std::string& text, const SampleSet& samples) {
  const ParsedLayout parsed = parse_layout(text);
  std::map<std::string, SampleIndex> index;
  for (std::size_t i = 0; i < samples.size(); ++i)
    index[samples.samples[i].id] = static_cast<SampleIndex>(i);
  std::vector<CellIndex> cell_of(samples.size(), -1);
  for (const auto& c : parsed.cells) {
    const auto it = index.find(c.sample);
    if (it == index.end()) throw Error("unknown_sample", "layout references unknown sample '" + c.sample + "'");
    const SampleIndex s = it->second;
    if (cell_of[s] != -1)
      throw Error("invalid_layout", "sample '" + c.sample + "' is placed twice");
    if (samples.cluster_name(samples.samples[s].cluster) != c.cluster)
      throw Error("cluster_mismatch", "sample '" + c.sample + "' is in cluster '" +
                                          samples.cluster_name(samples.samples[s].cluster) +
                                          "', layout says '" + c.cluster + "'");
    cell_of[s] = parsed.spec.index(c.cell);
  }
  for (std::size_t s = 0; s < samples.size(); ++s)
    if (cell_of[s] == -1)
      throw Error("invalid_layout", "layout does not place sample '" + samples.samples[s].id + "'");
  return make_layout(parsed.spec, samples.clusters(), std::move(cell_of));
}

void save_layout(const GridLayout& layout, const SampleSet& samples, const std::string& path) {
  write_text(path, layout_to_json(layout, samples));
}

LayoutDocument read_layout(const std::string& path) {
  return layout_document_from_json(read_text(path));
}

GridLayout load_layout(const std::string& path, const SampleSet& samples) {
  return layout_from_json(read_text(path), samples);
}

std::string report_to_json(const MeasureReport& r) {
  const json doc = {{"proximity", r.proximity},
                    {"compactness", r.compactness},
                    {"area_ratio", r.area_ratio},
                    {"triple_ratio", r.triple_ratio},
                    {"perimeter_ratio", r.perimeter_ratio},
                    {"cut_ratio", r.cut_ratio},
                    {"raw", {{"prox2", r.prox2}, {"comp", r.comp}}}};
  return doc.dump(2) + "\n";
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io_error", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io_error", "cannot write '" + path + "'");
    out << text;
    out.flush();
    if (!out) throw Error("io_error", "failed writing '" + path + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error("io_error", "cannot move '" + tmp + "' to '" + path + "'");
  }
}

LambdaSchedule parse_lambda_schedule(const std::string& text) {
  if (text == "adaptive") return LambdaSchedule::adaptive();
  double lambda = 0.0;
  try {
    std::size_t used = 0;
    lambda = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw Error("invalid_argument", "lambda must be 'adaptive' or a number, got '" + text + "'");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw Error("invalid_argument", "lambda must lie in [0, 1], got '" + text + "'");
  return LambdaSchedule::fixed(lambda);
}

BenchConfig parse_bench_config(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw Error("invalid_config", "bench config must be a JSON object");
  BenchConfig cfg;
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "grid_sizes") cfg.grid_sizes = v.get<std::vector<int>>();
      else if (key == "clusters") cfg.cluster_counts = v.get<std::vector<int>>();
      else if (key == "samples") cfg.samples = v.get<int>();
      else if (key == "spread") cfg.spread = v.get<double>();
      else if (key == "repeats") cfg.repeats = v.get<int>();
      else if (key == "seeds") cfg.seeds = v.get<std::vector<std::uint64_t>>();
      else if (key == "threads") cfg.threads = v.get<int>();
      else if (key == "lambda")
        cfg.schedule = parse_lambda_schedule(v.is_string() ? v.get<std::string>() : v.dump());
      else if (key == "pipelines") {
        cfg.pipelines.clear();
        for (const json& p : v) cfg.pipelines.push_back(parse_pipeline(p.get<std::string>()));
      } else
        throw Error("invalid_config", "unknown bench config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error("invalid_config", std::string("bad bench config value: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == "invalid_config") throw;
    throw Error("invalid_config", e.what());
  }
  validate_config(cfg);
  return cfg;
}

std::string bench_summary_json(const BenchResult& result) {
  json cells = json::array();
  for (const BenchCell& c : result.cells)
    cells.push_back({{"pipeline", to_string(c.pipeline)},
                     {"grid", c.grid},
                     {"clusters", c.clusters},
                     {"runs", c.runs},
                     {"proximity", c.mean.proximity},
                     {"compactness", c.mean.compactness},
                     {"area_ratio", c.mean.area_ratio},
                     {"triple_ratio", c.mean.triple_ratio},
                     {"perimeter_ratio", c.mean.perimeter_ratio},
                     {"cut_ratio", c.mean.cut_ratio},
                     {"wall_ms", c.wall_ms},
                     {"lap_solves", c.lap_solves},
                     {"swap_passes", c.swap_passes}});
  return json{{"runs", result.rows.size()}, {"cells", cells}}.dump(2) + "\n";
}

} // namespace gridweave
