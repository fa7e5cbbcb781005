import math

import numpy as np
import pytest

from blevans import DegenerateIndexError, EvansEvaluator, LayerParams, limit_comparison, real_axis_scan, semicircle, stability_index, vstar, winding_number
from blevans.analysis import write_scan_csv
from blevans.evans import Variant

G = 5.0 / 3.0


def test_vstar():
    assert math.exp(-2 / 0.81) == pytest.approx(0.0847, abs=1e-4)
    v = vstar()
    assert v == pytest.approx(0.0899, abs=5e-4)
    assert abs(v - math.exp(-2 / (1 - v) ** 2)) < 1e-10
    for s in (0.001, 0.05, 0.19):
        assert vstar(s) == pytest.approx(v, abs=1e-10)


def test_scan_on_polynomial():
    scan = real_axis_scan(lambda z: z * (z - 4.0), R=15, n=50)
    assert scan.zero_at_origin and scan.linear_near_origin
    assert scan.transversal_slope == pytest.approx(-4.0, rel=1e-6)
    assert scan.sign_changes == 1
    assert scan.lambdas[:4].tolist() == [0, 1e-6, 2e-6, 3e-6]
    assert scan.R == 15.0 and len(scan.lambdas) == 53


def test_scan_rejects_bad_grid():
    with pytest.raises(ValueError):
        real_axis_scan(lambda z: z, R=0.0)
    with pytest.raises(ValueError):
        real_axis_scan(lambda z: z, n=5)


def test_scan_limit_inflow_transversal():
    scan = real_axis_scan(EvansEvaluator(LayerParams.create(G, 0.0, 0.7)))
    assert scan.zero_at_origin and scan.linear_near_origin
    assert abs(scan.transversal_slope) > 1e-6
    assert scan.sign_changes == 0
    assert scan.max_imag <= 1e-8 * scan.meta["scale"]


def test_scan_outflow_transversal():
    scan = real_axis_scan(EvansEvaluator(LayerParams.create(G, 1e-3, 0.3, "outflow")))
    assert scan.zero_at_origin and scan.linear_near_origin
    assert scan.sign_changes == 0
    assert scan.max_imag <= 1e-8 * scan.meta["scale"]


def test_scan_inflow_no_root():
    scan = real_axis_scan(EvansEvaluator(LayerParams.create(G, 0.1, 0.5)))
    assert not scan.zero_at_origin and scan.transversal_slope is None
    assert scan.sign_changes == 0


def test_scan_agrees_with_contour_value():
    ev = EvansEvaluator(LayerParams.create(G, 1e-3, 0.4))
    scan = real_axis_scan(ev, R=15, n=31)
    k = int(np.argmin(np.abs(scan.lambdas - 10.0)))
    assert scan.lambdas[k] == 10.0
    c = semicircle(10.0, 60)
    d10 = ev(complex(c.points[c.n // 2]))  # contour point 10 + 0j
    assert c.points[c.n // 2] == 10
    assert scan.values[k] == pytest.approx(d10.real, rel=1e-6)


@pytest.mark.parametrize(
    "params",
    [
        LayerParams.create(G, 1e-3, 0.4),
        LayerParams.create(1.2, 1e-2, 0.1),
        LayerParams.create(3.0, 1e-5, 0.7),
        LayerParams.create(G, 1e-2, 0.6, "outflow"),
        LayerParams.create(G, 0.0, 0.6, "outflow"),
        LayerParams.create(G, 0.0, 0.4),
    ],
    ids=lambda p: f"{p.side.value}-g{p.gamma:.2f}-vp{p.v_plus:g}-v0{p.v0}",
)
def test_index_and_winding_agree(params):
    ev = EvansEvaluator(params)
    idx = stability_index(ev)
    indent = 0.0 if ev.variant is Variant.IN else 1e-4
    w = winding_number(ev, semicircle(10.0, 60, indent)).winding
    assert idx == 1 and w == 0
    assert stability_index(lambda z: 3.5 * ev(z), ev.variant) == idx


def test_index_on_known_functions():
    assert stability_index(lambda z: z + 1.0) == 1
    assert stability_index(lambda z: z - 1.0) == -1
    assert stability_index(lambda z: z * (z - 2.0), True) == -1
    assert stability_index(lambda z: z * (z + 2.0), True) == 1
    with pytest.raises(DegenerateIndexError):
        stability_index(lambda z: z**3, True)
    with pytest.raises(DegenerateIndexError):
        stability_index(lambda z: z * (z + 1.0), False)


def test_limit_comparison_inflow_nesting():
    base = LayerParams.create(G, 1e-2, 0.2)
    d = limit_comparison(base, [1e-2, 1e-3, 1e-4], semicircle(10.0, 60))
    assert d[0] > d[1] > d[2] > 0
    assert limit_comparison(base, [0.0], semicircle(10.0, 16)) == [0.0]


def test_limit_comparison_outflow_is_tight():
    base = LayerParams.create(G, 1e-2, 0.4, "outflow")
    c = semicircle(10.0, 60, 1e-4)
    ref = EvansEvaluator(base.limit())
    scale = max(abs(ref(z)) for z in c.distinct())
    (dist,) = limit_comparison(base, [1e-2], c)
    assert dist < 1e-2 * scale


def test_scan_csv(tmp_path):
    scan = real_axis_scan(lambda z: z - 3.0, R=5, n=10)
    lines = write_scan_csv(scan, tmp_path / "scan.csv").read_text().splitlines()
    assert lines[0] == "lambda,D" and len(lines) == 14
    assert float(lines[-1].split(",")[1]) == pytest.approx(2.0)
