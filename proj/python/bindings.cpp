#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "gridweave/bench.hpp"
#include "gridweave/geometry.hpp"
#include "gridweave/io.hpp"
#include "gridweave/lap.hpp"
#include "gridweave/measures.hpp"
#include "gridweave/pipeline.hpp"
#include "gridweave/render.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace gridweave;

namespace {

py::dict report_dict(const MeasureReport& r) {
  py::dict d;
  d["proximity"] = r.proximity;
  d["compactness"] = r.compactness;
  d["area_ratio"] = r.area_ratio;
  d["triple_ratio"] = r.triple_ratio;
  d["perimeter_ratio"] = r.perimeter_ratio;
  d["cut_ratio"] = r.cut_ratio;
  d["prox2"] = r.prox2;
  d["comp"] = r.comp;
  return d;
}

py::dict stats_dict(const PipelineStats& s) {
  py::dict d;
  d["wall_ms"] = s.wall_ms;
  d["lap_solves"] = s.lap_solves;
  d["adaptive_solves"] = s.adaptive_solves;
  d["swap_passes"] = s.swap_passes;
  d["swaps"] = s.swaps;
  return d;
}

SampleSet make_samples(const std::vector<std::string>& ids, const std::vector<double>& xs,
                       const std::vector<double>& ys, const std::vector<std::string>& clusters) {
  const std::size_t n = ids.size();
  if (xs.size() != n || ys.size() != n || clusters.size() != n)
    throw Error("dimension_mismatch", "ids, xs, ys and clusters must have equal length");
  SampleSet set;
  std::map<std::string, ClusterId> ids_of;
  for (const auto& c : clusters) ids_of.emplace(c, 0);
  for (auto& [name, id] : ids_of) {
    id = static_cast<ClusterId>(set.cluster_names.size());
    set.cluster_names.push_back(name);
  }
  for (std::size_t i = 0; i < n; ++i) set.samples.push_back({ids[i], {xs[i], ys[i]}, ids_of[clusters[i]], {}});
  validate_samples(set);
  return set;
}

GridSpec grid_arg(const py::object& grid) {
  if (py::isinstance<py::str>(grid)) return parse_grid(grid.cast<std::string>());
  const auto wh = grid.cast<std::pair<int, int>>();
  GridSpec spec{wh.first, wh.second};
  validate_grid(spec);
  return spec;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cluster-aware grid layout engine";

  py::register_exception<Error>(m, "GridweaveError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object type = py::module_::import("gridweave._core").attr("GridweaveError");
      PyErr_SetString(type.ptr(), (e.code() + ": " + e.what()).c_str());
    }
  });

  py::class_<SampleSet>(m, "SampleSet")
      .def("__len__", &SampleSet::size)
      .def_property_readonly("cluster_names", [](const SampleSet& s) { return s.cluster_names; })
      .def_property_readonly("ids", [](const SampleSet& s) {
        std::vector<std::string> out;
        for (const auto& x : s.samples) out.push_back(x.id);
        return out;
      })
      .def_property_readonly("positions", [](const SampleSet& s) {
        std::vector<std::pair<double, double>> out;
        for (const auto& x : s.samples) out.emplace_back(x.position.x, x.position.y);
        return out;
      })
      .def_property_readonly("clusters", &SampleSet::clusters)
      .def("to_json", [](const SampleSet& s) { return samples_to_json(s); });

  py::class_<GridLayout>(m, "GridLayout")
      .def_property_readonly("width", [](const GridLayout& l) { return l.spec.width; })
      .def_property_readonly("height", [](const GridLayout& l) { return l.spec.height; })
      .def_property_readonly("cell_of", [](const GridLayout& l) { return l.assignment.cell_of; })
      .def_property_readonly("labels", [](const GridLayout& l) { return l.labels; })
      .def_property_readonly("sample_clusters", [](const GridLayout& l) { return l.sample_clusters; })
      .def("cells_of_sample", [](const GridLayout& l) {
        std::vector<std::pair<int, int>> out;
        for (const CellIndex c : l.assignment.cell_of) {
          const Cell cell = l.spec.cell(c);
          out.emplace_back(cell.col, cell.row);
        }
        return out;
      })
      .def("violations", [](const GridLayout& l) { return validate_layout(l).violations; })
      .def("__eq__", [](const GridLayout& a, const GridLayout& b) { return a == b; });

  py::class_<PipelineResult>(m, "PipelineResult")
      .def_readonly("input", &PipelineResult::input)
      .def_readonly("layout", &PipelineResult::layout)
      .def_property_readonly("report", [](const PipelineResult& r) { return report_dict(r.report); })
      .def_property_readonly("stats", [](const PipelineResult& r) { return stats_dict(r.stats); })
      .def_property_readonly("swaps", [](const PipelineResult& r) { return r.swap_log.size(); });

  m.def("make_samples", &make_samples, py::arg("ids"), py::arg("xs"), py::arg("ys"),
        py::arg("clusters"), "Sample set from parallel lists.");
  m.def("gen_synthetic", &gen_synthetic, py::arg("clusters"), py::arg("n"), py::arg("spread"),
        py::arg("seed"), "Seeded Gaussian-mixture sample set in the unit square.");
  m.def("load_samples", &load_samples, py::arg("path"));
  m.def("parse_samples_json", &parse_samples_json, py::arg("text"));
  m.def("parse_samples_csv", &parse_samples_csv, py::arg("text"));

  m.def(
      "run_pipeline",
      [](const SampleSet& samples, const py::object& grid, const std::string& pipeline,
         std::uint64_t seed, const std::string& lambda) {
        PipelineOptions options;
        options.schedule = parse_lambda_schedule(lambda);
        const GridSpec spec = grid_arg(grid);
        const PipelineId id = parse_pipeline(pipeline);
        py::gil_scoped_release release;
        return run_pipeline(samples, spec, id, seed, options);
      },
      py::arg("samples"), py::arg("grid"), py::arg("pipeline") = "g-l-t", py::arg("seed") = 0,
      py::arg("schedule") = "adaptive",
      "Baseline layout followed by the phases of the named pipeline.");

  m.def(
      "report",
      [](const GridLayout& layout, const GridLayout& input) { return report_dict(report(layout, input)); },
      py::arg("layout"), py::arg("input"));

  m.def(
      "convexity",
      [](const std::vector<std::pair<int, int>>& cells, const std::string& measure) {
        std::vector<Cell> cs;
        for (const auto& [c, r] : cells) cs.push_back({c, r});
        return convexity(cs, parse_measure(measure));
      },
      py::arg("cells"), py::arg("measure"), "Score of a cell set: area, triple, perimeter or cut.");

  m.def(
      "solve_lap",
      [](const std::vector<std::vector<double>>& cost) {
        CostMatrix mtx(cost.size(), cost.empty() ? 0 : cost.front().size());
        for (std::size_t i = 0; i < cost.size(); ++i) {
          if (cost[i].size() != mtx.cols) throw Error("invalid_cost_matrix", "ragged cost matrix");
          for (std::size_t j = 0; j < mtx.cols; ++j) mtx.at(i, j) = cost[i][j];
        }
        const LapSolution sol = solve_lap(mtx);
        return py::make_tuple(sol.total_cost, sol.col_of_row);
      },
      py::arg("cost"), "Minimum-cost assignment: (total, column of each row).");

  m.def("layout_to_json", &layout_to_json, py::arg("layout"), py::arg("samples"));
  m.def("layout_from_json", &layout_from_json, py::arg("text"), py::arg("samples"));

  m.def(
      "render_svg",
      [](const GridLayout& layout, int cell_px, bool show_ids, const SampleSet* samples) {
        RenderStyle style;
        style.cell_px = cell_px;
        style.show_ids = show_ids;
        return render_svg(layout, style, samples);
      },
      py::arg("layout"), py::arg("cell_px") = 20, py::arg("show_ids") = false,
      py::arg("samples") = nullptr);

  m.attr("PIPELINES") = [] {
    std::vector<std::string> out;
    for (const PipelineId p : kAllPipelines) out.emplace_back(to_string(p));
    return out;
  }();

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
