import itertools
import json
import math

import pytest

import gridweave as gw


def test_pipelines_listed():
    assert gw.PIPELINES == ["baseline", "g", "l-t", "l-p", "l-t-g", "l-p-g", "g-l-t", "g-l-p"]


def test_run_pipeline_produces_a_valid_layout():
    samples = gw.gen_synthetic(3, 60, 0.05, 1)
    result = gw.run_pipeline(samples, "8x8", "g-l-t", seed=1)
    layout = result.layout
    assert (layout.width, layout.height) == (8, 8)
    assert layout.violations() == []
    assert len(set(layout.cell_of)) == 60
    assert result.report == gw.report(layout, result.input)
    for key in ("proximity", "compactness", "area_ratio", "triple_ratio", "perimeter_ratio", "cut_ratio"):
        assert 0.0 <= result.report[key] <= 1.0 + 1e-12


def test_baseline_proximity_is_one_and_runs_repeat():
    samples = gw.gen_synthetic(4, 100, 0.05, 2)
    base = gw.run_pipeline(samples, (10, 10), "baseline", seed=2)
    assert base.report["proximity"] == 1.0
    a = gw.run_pipeline(samples, (10, 10), "g-l-p", seed=5)
    b = gw.run_pipeline(samples, (10, 10), "g-l-p", seed=5)
    assert a.layout == b.layout
    assert gw.layout_to_json(a.layout, samples) == gw.layout_to_json(b.layout, samples)


def test_fixed_lambda_schedule():
    samples = gw.gen_synthetic(3, 36, 0.05, 3)
    result = gw.run_pipeline(samples, "6x6", "g", seed=3, schedule="1")
    assert result.layout == result.input


def test_convexity_of_small_shapes():
    tromino = [(0, 0), (1, 0), (0, 1)]
    assert gw.convexity(tromino, "area") == pytest.approx(3 / 3.5, abs=1e-12)
    assert gw.convexity(tromino, "perimeter") == pytest.approx((6 + math.sqrt(2)) / 8, abs=1e-12)
    assert gw.convexity(tromino, "cut") == pytest.approx(11 / 12, abs=1e-12)
    assert gw.convexity([(0, 0), (1, 0), (2, 0), (0, 1), (2, 1)], "triple") == 0.5


def test_solve_lap_matches_brute_force():
    cost = [[4, 1, 3, 7], [2, 0, 5, 1], [3, 2, 2, 6], [8, 3, 1, 2]]
    best = min(sum(cost[i][p[i]] for i in range(4)) for p in itertools.permutations(range(4)))
    total, cols = gw.solve_lap(cost)
    assert total == best
    assert sorted(cols) == [0, 1, 2, 3]
    assert sum(cost[i][cols[i]] for i in range(4)) == best


def test_json_round_trip_and_errors():
    samples = gw.make_samples(["a", "b", "c"], [0.1, 0.5, 0.9], [0.2, 0.5, 0.8], ["y", "x", "y"])
    assert samples.cluster_names == ["x", "y"]
    result = gw.run_pipeline(samples, "2x2", "baseline")
    text = gw.layout_to_json(result.layout, samples)
    assert json.loads(text)["version"] == 1
    assert gw.layout_from_json(text, samples) == result.layout
    with pytest.raises(gw.GridweaveError, match="unsupported_schema_version"):
        doc = json.loads(text)
        doc["version"] = 9
        gw.layout_from_json(json.dumps(doc), samples)
    with pytest.raises(gw.GridweaveError):
        gw.run_pipeline(samples, "1x1", "baseline")
    with pytest.raises(gw.GridweaveError):
        gw.parse_samples_json("{")


def test_render_svg():
    samples = gw.gen_synthetic(2, 16, 0.05, 4)
    layout = gw.run_pipeline(samples, "4x4", "g").layout
    svg = gw.render_svg(layout, cell_px=10, show_ids=True, samples=samples)
    assert svg.startswith("<svg")
    assert svg.count('<rect class="cell"') == 16
    assert svg.count("<text") == 16
