import csv
import json

import pytest

from blevans import ConfigError, EvansEvaluator, LayerParams, SweepConfig, Side, real_axis_scan, run_sweep, semicircle
from blevans.cli import main
from blevans.harness import SWEEP_HEADER, auto_v_plus_grid, contour_for, convergence_study, emit_plot, write_convergence_csv
from blevans.evans import Variant


def _small(tmp_path, **kw):
    base = dict(gamma=[5 / 3], v0=[0.4], v_plus=[1e-2, 1e-3], contour={"radius": 10, "points": 20}, out=str(tmp_path))
    base.update(kw)
    return SweepConfig.from_dict(base)


def _rows(path):
    with path.open() as fh:
        return list(csv.reader(fh))


def test_sweep_rows_and_determinism(tmp_path):
    cfg = _small(tmp_path, v0=[0.005, 0.4], v_plus=[1e-2, 0.0])
    recs = run_sweep(cfg)
    statuses = [r.status for r in recs]
    assert statuses == ["skipped", "ok", "ok", "ok"]  # v0 = 0.005 < v_plus = 0.01
    rows = _rows(tmp_path / "sweep.csv")
    assert rows[0] == SWEEP_HEADER
    assert len(rows) - 1 == sum(s != "skipped" for s in statuses)
    assert all(r[6] == "0" and r[7] == "1" for r in rows[1:])
    first = (tmp_path / "sweep.csv").read_bytes()
    run_sweep(cfg)
    assert (tmp_path / "sweep.csv").read_bytes() == first
    assert (tmp_path / "sweep_timings.csv").exists()


def test_sweep_with_workers_matches_serial(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    run_sweep(_small(a))
    run_sweep(_small(b, workers=2))
    assert (a / "sweep.csv").read_bytes() == (b / "sweep.csv").read_bytes()


def test_empty_v_plus_list(tmp_path):
    recs = run_sweep(_small(tmp_path, v_plus=[]))
    assert recs == []
    assert (tmp_path / "sweep.csv").read_text() == ",".join(SWEEP_HEADER) + "\n"


def test_outflow_sweep_uses_indent(tmp_path):
    recs = run_sweep(_small(tmp_path, side="outflow", v0=[0.6], v_plus=[1e-2, 0]))
    assert [r.winding for r in recs] == [0, 0]
    assert [r.variant for r in recs] == ["out", "lim_out"]


def test_indent_policy():
    assert contour_for(Variant.IN, 10, 60, None).indent_radius == 0.0
    for v in (Variant.OUT, Variant.LIM_IN, Variant.LIM_OUT):
        assert contour_for(v, 10, 60, None).indent_radius == 1e-4
    assert contour_for(Variant.OUT, 10, 60, 0.01).indent_radius == 0.01


def test_auto_grid():
    g = auto_v_plus_grid(0.5)
    assert g[0] == pytest.approx(0.45) and g[-1] == pytest.approx(1e-6)
    assert all(a > b for a, b in zip(g, g[1:]))
    assert auto_v_plus_grid(0.99)[0] == pytest.approx(0.891)
    cfg = SweepConfig.from_dict({"v0": [0.2, 0.9], "v_plus": "auto"})
    assert len(cfg.triples()) == 16


@pytest.mark.parametrize(
    "bad",
    [
        {"gamma": 0.5},
        {"contour": {"points": 15}},
        {"contour": {"radius": -1}},
        {"tolerances": {"abs": 0}},
        {"workers": 0},
        {"side": "upflow"},
        {"colour": "red"},
        {"v0": {"a": 1}},
        {"contour": [1, 2]},
    ],
)
def test_config_errors(bad):
    with pytest.raises(ConfigError):
        SweepConfig.from_dict(bad)


def test_config_round_trip(tmp_path):
    cfg = _small(tmp_path, side="outflow", tolerances={"abs": 1e-7, "rel": 1e-9}, L=16)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert SweepConfig.load(path) == cfg
    (tmp_path / "broken.json").write_text("{")
    with pytest.raises(ConfigError):
        SweepConfig.load(tmp_path / "broken.json")
    with pytest.raises(ConfigError):
        SweepConfig.load(tmp_path / "missing.json")


def test_convergence_tables(tmp_path):
    cfg = _small(tmp_path, gamma=[1.666], convergence={"L": [8, 12, 16], "tolerances": [[1e-3, 1e-5], [1e-5, 1e-7], [1e-7, 1e-9]]})
    (tl,) = convergence_study(cfg, "L")
    (tt,) = convergence_study(cfg, "tol")
    assert tl.levels == (8.0, 12.0) and tl.errors[0] > tl.errors[1]
    assert tt.errors[0] > tt.errors[1]
    text = tl.to_markdown()
    assert text.startswith("| L |") and "| 8 |" in text
    rows = _rows(write_convergence_csv([tl, tt], tmp_path / "c.csv"))
    assert rows[0] == ["study", "side", "gamma", "level", "max_rel_error"] and len(rows) == 5
    with pytest.raises(ConfigError):
        convergence_study(cfg, "grid")


def test_emit_plot_variants(tmp_path):
    p = LayerParams.create(5 / 3, 1e-2, 0.4)
    ev = EvansEvaluator(p)
    samples = ev.samples(semicircle(10, 20).points)
    svg = emit_plot(samples, tmp_path / "one.svg", title="image", params=p.as_dict()).read_text()
    assert svg.startswith("<svg") and svg.count("<polygon") == 1 and "origin" in svg
    assert "gamma=" in svg
    fam = {f"v+={vp:g}": EvansEvaluator(p.with_v_plus(vp)).samples(semicircle(10, 20).points) for vp in (1e-2, 1e-3)}
    svg = emit_plot(fam, tmp_path / "fam.svg").read_text()
    assert svg.count("<polygon") == 2 and "v+=0.001" in svg
    scan = real_axis_scan(ev, R=15, n=10)
    svg = emit_plot(scan, tmp_path / "scan.svg").read_text()
    assert svg.count("<polyline") == 1
    with pytest.raises(ValueError):
        emit_plot([], tmp_path / "none.svg")


def _cli(tmp_path, *args):
    return main([*args, "--out", str(tmp_path), "--points", "20"])


def test_cli_commands(tmp_path, capsys):
    assert _cli(tmp_path, "profile", "--gamma", "1.4", "--v-plus", "0.01", "--v0", "0.5") == 0
    assert (tmp_path / "profile.csv").read_text().startswith("x,vhat,dvhat")
    assert _cli(tmp_path, "evans", "--v-plus", "0.01", "--v0", "0.5", "--lam", "1+2j") == 0
    out = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert out["variant"] == "in" and len(out["D"]) == 2
    assert _cli(tmp_path, "evans", "--v-plus", "0.01", "--v0", "0.5") == 0
    assert (tmp_path / "evans.svg").exists() and len(_rows(tmp_path / "evans.csv")) == 22
    assert _cli(tmp_path, "winding", "--v-plus", "0.01", "--v0", "0.5", "--side", "outflow") == 0
    assert json.loads(capsys.readouterr().out.strip().splitlines()[-1])["winding"] == 0
    assert _cli(tmp_path, "index", "--v-plus", "0.01", "--v0", "0.5") == 0
    assert json.loads(capsys.readouterr().out.strip())["stability_index"] == 1
    assert _cli(tmp_path, "scan", "--v-plus", "0", "--v0", "0.7") == 0
    assert json.loads(capsys.readouterr().out.strip())["zero_at_origin"] is True


def test_cli_sweep_and_converge(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"v0": [0.4], "v_plus": [1e-2], "convergence": {"L": [10, 14], "tolerances": [[1e-4, 1e-6], [1e-6, 1e-8]]}}))
    assert _cli(tmp_path, "sweep", "--config", str(cfg)) == 0
    assert "1 ok" in capsys.readouterr().out
    assert _cli(tmp_path, "converge", "--config", str(cfg), "--study", "L") == 0
    assert len(_rows(tmp_path / "convergence.csv")) == 2


def test_cli_exit_codes(tmp_path, capsys):
    assert _cli(tmp_path, "evans", "--v-plus", "0.5", "--v0", "0.4", "--lam", "1") == 2
    assert "config error" in capsys.readouterr().err
    assert _cli(tmp_path, "winding", "--radius", "-3") == 2
    assert main(["sweep", "--config", str(tmp_path / "nope.json")]) == 2
    # the pressureless inflow function vanishes at the origin: an unindented
    # contour through it is a numerical failure
    assert _cli(tmp_path, "winding", "--v-plus", "0", "--v0", "0.4", "--indent", "0") == 3
    assert "NearZeroError" in capsys.readouterr().err


def test_side_parse():
    assert Side.parse("Outflow") is Side.OUTFLOW
