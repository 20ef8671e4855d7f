#include <csignal>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridweave/bench.hpp"
#include "gridweave/io.hpp"
#include "gridweave/measures.hpp"
#include "gridweave/pipeline.hpp"
#include "gridweave/render.hpp"
#include "gridweave/service.hpp"

using namespace gridweave;

namespace {

int fail(const std::string& code, const std::string& detail) {
  std::cerr << nlohmann::json{{"error", code}, {"detail", detail}}.dump() << '\n';
  return 1;
}

HttpServer* active_server = nullptr;

void on_signal(int) {
  if (active_server) active_server->stop();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster-aware grid layouts"};
  app.require_subcommand(1);

  std::string input, out, grid = "30x30", pipeline = "g-l-t", lambda = "adaptive";
  std::string report_out;
  std::uint64_t seed = 0;
  auto* layout_cmd = app.add_subcommand("layout", "Lay out samples on a grid");
  layout_cmd->add_option("--input", input, "Sample file (.json or .csv)")->required();
  layout_cmd->add_option("--grid", grid, "Grid size WxH")->required();
  layout_cmd->add_option("--pipeline", pipeline, "baseline|g|l-t|l-p|l-t-g|l-p-g|g-l-t|g-l-p");
  layout_cmd->add_option("--lambda", lambda, "adaptive or a fixed weight in [0,1]");
  layout_cmd->add_option("--seed", seed, "Random seed");
  layout_cmd->add_option("--out", out, "Layout file to write")->required();
  layout_cmd->add_option("--report", report_out, "Also write the measure report here");

  std::string layout_path, baseline_path;
  auto* eval_cmd = app.add_subcommand("eval", "Score a layout against a baseline layout");
  eval_cmd->add_option("--layout", layout_path)->required();
  eval_cmd->add_option("--baseline", baseline_path)->required();
  eval_cmd->add_option("--input", input)->required();
  eval_cmd->add_option("--out", out)->required();

  int cell_px = 20;
  bool show_ids = false;
  auto* render_cmd = app.add_subcommand("render", "Render a layout file as SVG");
  render_cmd->add_option("--layout", layout_path)->required();
  render_cmd->add_option("--out", out)->required();
  render_cmd->add_option("--cell-px", cell_px, "Cell size in pixels (>= 4)");
  render_cmd->add_flag("--ids", show_ids, "Print sample ids in cells");

  std::string config_path, out_dir;
  auto* bench_cmd = app.add_subcommand("bench", "Run the synthetic benchmark matrix");
  bench_cmd->add_option("--config", config_path)->required();
  bench_cmd->add_option("--out-dir", out_dir)->required();

  int port = 8080;
  std::string host = "127.0.0.1";
  auto* serve_cmd = app.add_subcommand("serve", "Serve hierarchical layouts over HTTP");
  serve_cmd->add_option("--input", input)->required();
  serve_cmd->add_option("--grid", grid)->required();
  serve_cmd->add_option("--port", port, "0 picks a free port");
  serve_cmd->add_option("--seed", seed);
  serve_cmd->add_option("--pipeline", pipeline);
  serve_cmd->add_option("--host", host);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what());
  }

  try {
    if (*layout_cmd) {
      const SampleSet samples = load_samples(input);
      PipelineOptions options;
      options.schedule = parse_lambda_schedule(lambda);
      const PipelineResult r =
          run_pipeline(samples, parse_grid(grid), parse_pipeline(pipeline), seed, options);
      save_layout(r.layout, samples, out);
      if (!report_out.empty()) write_text(report_out, report_to_json(r.report));
    } else if (*eval_cmd) {
      const SampleSet samples = load_samples(input);
      const GridLayout layout = load_layout(layout_path, samples);
      const GridLayout baseline = load_layout(baseline_path, samples);
      write_text(out, report_to_json(report(layout, baseline)));
    } else if (*render_cmd) {
      const LayoutDocument doc = read_layout(layout_path);
      RenderStyle style;
      style.cell_px = cell_px;
      style.show_ids = show_ids;
      write_text(out, render_svg(doc.layout, style, &doc.samples));
    } else if (*bench_cmd) {
      const BenchConfig cfg = parse_bench_config(read_text(config_path));
      std::filesystem::create_directories(out_dir);
      const BenchResult result = run_matrix(cfg);
      const std::filesystem::path dir(out_dir);
      write_text((dir / "bench.csv").string(), bench_csv(result));
      write_text((dir / "summary.json").string(), bench_summary_json(result));
    } else if (*serve_cmd) {
      ServiceConfig cfg;
      cfg.grid = parse_grid(grid);
      cfg.seed = seed;
      cfg.options.pipeline = parse_pipeline(pipeline);
      LayoutService service(std::make_shared<const SampleSet>(load_samples(input)), cfg);
      HttpServer server(service);
      const int bound = server.bind(host, port);
      std::cout << "listening on http://" << host << ':' << bound << std::endl;
      active_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.run();
      active_server = nullptr;
    }
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("io_error", e.what());
  } catch (const std::exception& e) {
    return fail("internal_error", e.what());
  }
  return 0;
}
