"""Figure families stored as golden CSVs under ``tests/data``.

Regenerate with ``python3 tests/golden.py`` after an intentional change to
the numerics, and review the diff before committing.
"""
from __future__ import annotations

import sys
from pathlib import Path

from blevans import EvansEvaluator, LayerParams, real_axis_scan, semicircle, shock_correction
from blevans.analysis import write_scan_csv
from blevans.evans import EvansSample, write_samples_csv

DATA = Path(__file__).with_name("data")
G = 5.0 / 3.0


def nesting():
    """Inflow images at v0 = 0.2 for a v_plus family and the pressureless limit."""
    out = {}
    for vp in (1e-2, 1e-4, 0.0):
        params = LayerParams.create(G, vp, 0.2)
        c = semicircle(10.0, 60, 1e-4 if vp == 0 else 0.0)
        out[f"nesting_vp{vp:g}"] = EvansEvaluator(params).samples(c.points)
    return out


def outflow_pair():
    """Outflow images at v0 = 0.4 on the indented contour, finite and limit."""
    c = semicircle(10.0, 60, 1e-4)
    return {f"outflow_vp{vp:g}": EvansEvaluator(LayerParams.create(G, vp, 0.4, "outflow")).samples(c.points) for vp in (1e-2, 0.0)}


def real_axis():
    """Real-axis traces with a transversal origin root."""
    return {
        "scan_lim_in_v0.7": real_axis_scan(EvansEvaluator(LayerParams.create(G, 0.0, 0.7))),
        "scan_out_v0.3": real_axis_scan(EvansEvaluator(LayerParams.create(G, 1e-3, 0.3, "outflow"))),
    }


def corrected_shock_limit():
    """Inflow at v0 = 0.99 multiplied by the shock correction factor."""
    params = LayerParams.create(G, 0.1, 0.99)
    ev = EvansEvaluator(params)
    pts = semicircle(10.0, 60).points
    return {"shock_v0.99": [EvansSample(complex(l), ev(l) * shock_correction(params, l), ev.variant) for l in pts]}


FAMILIES = {"nesting": nesting, "outflow": outflow_pair, "real_axis": real_axis, "shock": corrected_shock_limit}


def write_all(root: Path = DATA) -> list[Path]:
    root.mkdir(parents=True, exist_ok=True)
    paths = []
    for build in FAMILIES.values():
        for name, data in build().items():
            path = root / f"{name}.csv"
            if isinstance(data, list):
                write_samples_csv(data, path)
            else:
                write_scan_csv(data, path)
            paths.append(path)
    return paths


if __name__ == "__main__":
    for p in write_all(Path(sys.argv[1]) if len(sys.argv) > 1 else DATA):
        print(p)
