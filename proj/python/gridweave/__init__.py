"""Cluster-aware grid layouts."""

from ._core import (
    PIPELINES,
    GridLayout,
    GridweaveError,
    PipelineResult,
    SampleSet,
    __version__,
    convexity,
    gen_synthetic,
    layout_from_json,
    layout_to_json,
    load_samples,
    make_samples,
    parse_samples_csv,
    parse_samples_json,
    render_svg,
    report,
    run_pipeline,
    solve_lap,
)

__all__ = [
    "PIPELINES",
    "GridLayout",
    "GridweaveError",
    "PipelineResult",
    "SampleSet",
    "__version__",
    "convexity",
    "gen_synthetic",
    "layout_from_json",
    "layout_to_json",
    "load_samples",
    "make_samples",
    "parse_samples_csv",
    "parse_samples_json",
    "render_svg",
    "report",
    "run_pipeline",
    "solve_lap",
]
