#pragma once

#include <string>

#include "gridweave/bench.hpp"
#include "gridweave/global_assign.hpp"
#include "gridweave/measures.hpp"
#include "gridweave/model.hpp"

namespace gridweave {

/// Sample files. JSON:
///   {"samples":[{"id":"s1","x":0.1,"y":0.2,"cluster":"A","meta":{...}}, ...],
///    "similarities": null | [[...], ...]}
/// CSV: a header naming at least id,x,y,cluster; further columns become meta.
/// Cluster ids follow the sorted cluster names. Errors carry the record
/// number: Error("parse_error"), Error("invalid_samples") for duplicates or
/// non-finite coordinates, Error("dimension_mismatch") for a similarity
/// matrix of the wrong size.
SampleSet parse_samples_json(const std::string& text);
SampleSet parse_samples_csv(const std::string& text);
/// Dispatches on the extension (.csv, anything else is JSON).
SampleSet load_samples(const std::string& path);
std::string samples_to_json(const SampleSet& samples);

inline constexpr int kLayoutSchemaVersion = 1;

/// {"version":1,"grid":{"w":W,"h":H},"cells":[{"col","row","sample","cluster"}, ...]}
/// Only occupied cells are listed, in cell index order.
std::string layout_to_json(const GridLayout& layout, const SampleSet& samples);

/// A layout file read on its own: samples carry ids and clusters, and their
/// positions are their cell centers.
struct LayoutDocument {
  SampleSet samples;
  GridLayout layout;
};

LayoutDocument layout_document_from_json(const std::string& text);

/// Binds a layout file to `samples`: every sample must be placed exactly once
/// with its own cluster. Errors: Error("unsupported_schema_version"),
/// Error("unknown_sample"), Error("cluster_mismatch"), Error("invalid_layout").
GridLayout layout_from_json(const std::string& text, const SampleSet& samples);

void save_layout(const GridLayout& layout, const SampleSet& samples, const std::string& path);
LayoutDocument read_layout(const std::string& path);
GridLayout load_layout(const std::string& path, const SampleSet& samples);

/// {"proximity":..,"compactness":..,"area_ratio":..,"triple_ratio":..,
///  "perimeter_ratio":..,"cut_ratio":..,"raw":{"prox2":..,"comp":..}}
std::string report_to_json(const MeasureReport& report);

/// "adaptive" or a fixed weight in [0, 1]. Throws Error("invalid_argument").
LambdaSchedule parse_lambda_schedule(const std::string& text);

/// Bench configuration object; every key is optional:
///   {"grid_sizes":[20,30,40], "clusters":[5], "samples":0, "spread":0.05,
///    "repeats":1, "seeds":[0,...], "lambda":"adaptive"|0.5,
///    "pipelines":["baseline",...], "threads":0}
/// Unknown keys are rejected with Error("invalid_config").
BenchConfig parse_bench_config(const std::string& text);

/// {"runs": n, "cells":[{"pipeline","grid","clusters","runs","proximity",...,
///  "wall_ms","lap_solves","swap_passes"}, ...]}
std::string bench_summary_json(const BenchResult& result);

std::string read_text(const std::string& path);
/// Writes through a temporary file and renames it into place.
void write_text(const std::string& path, const std::string& text);

} // namespace gridweave
