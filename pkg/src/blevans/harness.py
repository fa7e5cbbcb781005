"""Parameter sweeps, convergence studies and figure output.

A sweep is described by one JSON document (see ``SweepConfig.from_dict``);
every admissible ``(gamma, v0, v_plus)`` triple gets one CSV row, written in
configuration order so that re-running a sweep reproduces the file byte for
byte.  Wall times are not part of that file; they go to a separate timing
log.
"""
from __future__ import annotations

import csv
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .analysis import RealAxisScan, stability_index
from .contour import Contour, semicircle, winding_number
from .errors import BLEvansError, ConfigError, DomainError, NumericalError
from .evans import EvansEvaluator, ShootingOptions, Variant
from .params import LayerParams, Side
from .svgplot import render_curves

__all__ = [
    "SweepConfig",
    "SweepRecord",
    "ConvergenceTable",
    "run_sweep",
    "convergence_study",
    "emit_plot",
    "auto_v_plus_grid",
    "contour_for",
]

log = logging.getLogger(__name__)

SWEEP_HEADER = ["gamma", "v0", "v_plus", "side", "variant", "status", "winding", "stability_index", "max_arg_step", "n_points"]
DEFAULT_TOLERANCE_LADDER = ((1e-3, 1e-5), (1e-4, 1e-6), (1e-5, 1e-7), (1e-6, 1e-8), (1e-7, 1e-9))
DEFAULT_L_LADDER = (8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0)


def auto_v_plus_grid(v0: float, count: int = 8, smallest: float = 1e-6) -> list[float]:
    """Geometric ``v_plus`` grid from ``min(0.9, 0.9 v0)`` down to ``smallest``."""
    start = min(0.9, 0.9 * v0)
    if count < 2 or start <= smallest:
        return [start]
    return [float(v) for v in np.geomspace(start, smallest, count)]


def _as_list(value, name: str) -> list:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return list(value)
    if isinstance(value, (int, float, str)):
        return [value]
    raise ConfigError(f"{name} must be a number or a list, got {value!r}")


@dataclass(frozen=True)
class SweepConfig:
    """Sweep description.

    ``v_plus`` may hold the string ``"auto"``, which expands per ``v0`` with
    :func:`auto_v_plus_grid`; ``0`` selects the pressureless limit.
    ``indent=None`` applies the default policy: no indentation for the
    inflow Evans function with ``v_plus > 0`` (it does not vanish at the
    origin) and ``1e-4`` for every variant with a known root there.
    """

    gamma: tuple[float, ...] = (5.0 / 3.0,)
    v0: tuple[float, ...] = (0.5,)
    v_plus: tuple = (1e-2,)
    side: Side = Side.INFLOW
    radius: float = 10.0
    points: int = 60
    indent: float | None = None
    abs_tol: float = 1e-6
    rel_tol: float = 1e-8
    L: float = 18.0
    out: Path = Path("out")
    workers: int = 1
    scan_R: float = 15.0
    scan_points: int = 50
    L_ladder: tuple[float, ...] = DEFAULT_L_LADDER
    tolerance_ladder: tuple[tuple[float, float], ...] = DEFAULT_TOLERANCE_LADDER

    def __post_init__(self):
        object.__setattr__(self, "side", Side.parse(self.side))
        object.__setattr__(self, "out", Path(self.out))

    @classmethod
    def from_dict(cls, data: Mapping) -> "SweepConfig":
        known = {
            "gamma", "v0", "v_plus", "side", "contour", "tolerances", "L", "out", "workers",
            "scan", "convergence",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kw: dict = {}
        try:
            if "gamma" in data:
                kw["gamma"] = tuple(float(g) for g in _as_list(data["gamma"], "gamma"))
            if "v0" in data:
                kw["v0"] = tuple(float(v) for v in _as_list(data["v0"], "v0"))
            if "v_plus" in data:
                vp = data["v_plus"]
                kw["v_plus"] = ("auto",) if vp == "auto" else tuple(float(v) for v in _as_list(vp, "v_plus"))
            if "side" in data:
                kw["side"] = Side.parse(data["side"])
            c = data.get("contour", {})
            if not isinstance(c, Mapping):
                raise ConfigError("contour must be an object")
            if "radius" in c:
                kw["radius"] = float(c["radius"])
            if "points" in c:
                kw["points"] = int(c["points"])
            if "indent" in c:
                kw["indent"] = None if c["indent"] is None else float(c["indent"])
            t = data.get("tolerances", {})
            if "abs" in t:
                kw["abs_tol"] = float(t["abs"])
            if "rel" in t:
                kw["rel_tol"] = float(t["rel"])
            if "L" in data:
                kw["L"] = float(data["L"])
            if "out" in data:
                kw["out"] = Path(data["out"])
            if "workers" in data:
                kw["workers"] = int(data["workers"])
            s = data.get("scan", {})
            if "R" in s:
                kw["scan_R"] = float(s["R"])
            if "points" in s:
                kw["scan_points"] = int(s["points"])
            cv = data.get("convergence", {})
            if "L" in cv:
                kw["L_ladder"] = tuple(float(x) for x in cv["L"])
            if "tolerances" in cv:
                kw["tolerance_ladder"] = tuple((float(a), float(r)) for a, r in cv["tolerances"])
        except (TypeError, ValueError, DomainError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid config: {exc}") from exc
        cfg = cls(**kw)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "SweepConfig":
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, Mapping):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "gamma": list(self.gamma),
            "v0": list(self.v0),
            "v_plus": "auto" if self.v_plus == ("auto",) else list(self.v_plus),
            "side": self.side.value,
            "contour": {"radius": self.radius, "points": self.points, "indent": self.indent},
            "tolerances": {"abs": self.abs_tol, "rel": self.rel_tol},
            "L": self.L,
            "out": str(self.out),
            "workers": self.workers,
            "scan": {"R": self.scan_R, "points": self.scan_points},
            "convergence": {"L": list(self.L_ladder), "tolerances": [list(t) for t in self.tolerance_ladder]},
        }

    def validate(self) -> None:
        if any(not g >= 1.0 for g in self.gamma):
            raise ConfigError("every gamma must be >= 1")
        if self.points < 16 or self.points % 2:
            raise ConfigError("contour points must be even and >= 16")
        if not self.radius > 0:
            raise ConfigError("contour radius must be positive")
        if self.indent is not None and not 0.0 <= self.indent < self.radius:
            raise ConfigError("indent must lie in [0, radius)")
        if not (self.abs_tol > 0 and self.rel_tol > 0 and self.L > 0):
            raise ConfigError("tolerances and L must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def with_overrides(self, **kw) -> "SweepConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        cfg = replace(self, **kw)
        cfg.validate()
        return cfg

    @property
    def options(self) -> ShootingOptions:
        return ShootingOptions(L=self.L, abs_tol=self.abs_tol, rel_tol=self.rel_tol)

    def v_plus_for(self, v0: float) -> list[float]:
        if self.v_plus == ("auto",):
            return auto_v_plus_grid(v0)
        return [float(v) for v in self.v_plus]

    def triples(self) -> list[tuple[float, float, float]]:
        return [(g, v0, vp) for g in self.gamma for v0 in self.v0 for vp in self.v_plus_for(v0)]


def contour_for(variant: Variant, radius: float, points: int, indent: float | None) -> Contour:
    if indent is None:
        indent = 0.0 if variant is Variant.IN else 1e-4
    return semicircle(radius, points, indent)


@dataclass(frozen=True)
class SweepRecord:
    params: dict
    status: str
    winding: int | None = None
    stability_index: int | None = None
    max_arg_step: float | None = None
    n_points: int | None = None
    wall_time: float = 0.0
    reason: str = ""
    variant: str = ""

    def row(self) -> list[str]:
        p = self.params

        def fmt(x):
            return "" if x is None else (f"{x:.12g}" if isinstance(x, float) else str(x))

        return [
            f"{p['gamma']:.12g}",
            f"{p['v0']:.12g}",
            f"{p['v_plus']:.12g}",
            p["side"],
            self.variant,
            self.status,
            fmt(self.winding),
            fmt(self.stability_index),
            "" if self.max_arg_step is None else f"{self.max_arg_step:.6f}",
            fmt(self.n_points),
        ]


def _evaluate_triple(args) -> SweepRecord:
    (gamma, v0, vp), cfg = args
    pdict = {"gamma": gamma, "v0": v0, "v_plus": vp, "side": cfg.side.value}
    t0 = time.perf_counter()
    try:
        params = LayerParams.create(gamma, vp, v0, cfg.side)
    except DomainError as exc:
        return SweepRecord(params=pdict, status="skipped", reason=str(exc))
    variant = Variant.for_params(params)
    try:
        ev = EvansEvaluator(params, cfg.options)
        contour = contour_for(variant, cfg.radius, cfg.points, cfg.indent)
        rep = winding_number(ev, contour)
        idx = stability_index(ev, variant, R=cfg.scan_R)
    except (NumericalError, BLEvansError) as exc:
        return SweepRecord(
            params=pdict,
            status="error",
            reason=f"{type(exc).__name__}: {exc}",
            wall_time=time.perf_counter() - t0,
            variant=variant.value,
        )
    return SweepRecord(
        params=pdict,
        status="ok",
        winding=rep.winding,
        stability_index=idx,
        max_arg_step=rep.max_arg_step,
        n_points=rep.n_points_final,
        wall_time=time.perf_counter() - t0,
        variant=variant.value,
    )


def run_sweep(config: SweepConfig, csv_name: str = "sweep.csv") -> list[SweepRecord]:
    """Winding number and stability index for every admissible triple.

    Inadmissible triples (ordering violated) are recorded as ``skipped`` and
    logged but get no CSV row; numerical failures are recorded as ``error``
    rows and never abort the sweep.
    """
    triples = config.triples()
    jobs = [(t, config) for t in triples]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_evaluate_triple, jobs))
    else:
        records = [_evaluate_triple(j) for j in jobs]

    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    with (out / csv_name).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_HEADER)
        for rec in records:
            if rec.status == "skipped":
                log.info("skipped %s: %s", rec.params, rec.reason)
                continue
            if rec.status == "error":
                log.warning("error at %s: %s", rec.params, rec.reason)
            w.writerow(rec.row())
    with (out / (Path(csv_name).stem + "_timings.csv")).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gamma", "v0", "v_plus", "status", "wall_time_s"])
        for rec in records:
            p = rec.params
            w.writerow([f"{p['gamma']:.12g}", f"{p['v0']:.12g}", f"{p['v_plus']:.12g}", rec.status, f"{rec.wall_time:.4f}"])
    return records


# ------------------------------------------------------------ convergence


@dataclass(frozen=True)
class ConvergenceTable:
    """Max relative errors between successive refinement levels.

    ``rows[k]`` compares level ``k`` against level ``k + 1`` (the baseline),
    as ``max_lam |D_k - D_{k+1}| / |D_{k+1}|`` over the contour points.
    """

    study: str
    side: str
    gamma: float
    levels: tuple
    errors: tuple[float, ...]
    n_points: int

    def to_rows(self) -> list[list[str]]:
        return [
            [self.study, self.side, f"{self.gamma:.12g}", _level_label(lv), f"{err:.3e}"]
            for lv, err in zip(self.levels, self.errors)
        ]

    def to_markdown(self) -> str:
        head = "L" if self.study == "L" else "abs/rel"
        lines = [f"| {head} | {self.side}, gamma={self.gamma:g} |", "|---|---|"]
        for lv, err in zip(self.levels, self.errors):
            lines.append(f"| {_level_label(lv)} | {err:.1e} |")
        return "\n".join(lines)


def _level_label(level) -> str:
    if isinstance(level, tuple):
        return f"{level[0]:.0e}/{level[1]:.0e}"
    return f"{level:g}"


def _contour_values(params: LayerParams, options: ShootingOptions, points: np.ndarray) -> np.ndarray:
    ev = EvansEvaluator(params, options)
    return np.array([ev(lam) for lam in points])


def convergence_study(
    config: SweepConfig,
    study: str = "L",
    *,
    v_plus: float = 1e-4,
    v0: float = 0.6,
) -> list[ConvergenceTable]:
    """Successive-level relative errors over the contour, one table per ``gamma``.

    ``study='L'`` varies the domain length over ``config.L_ladder`` at the
    configured tolerances; ``study='tol'`` varies ``(abs, rel)`` over
    ``config.tolerance_ladder`` at ``L = config.L``.
    """
    tables = []
    for gamma in config.gamma:
        params = LayerParams.create(gamma, v_plus, v0, config.side)
        variant = Variant.for_params(params)
        pts = contour_for(variant, config.radius, config.points, config.indent).distinct()
        if study == "L":
            levels = tuple(config.L_ladder)
            opts = [ShootingOptions(L=L, abs_tol=config.abs_tol, rel_tol=config.rel_tol) for L in levels]
        elif study == "tol":
            levels = tuple(config.tolerance_ladder)
            opts = [ShootingOptions(L=config.L, abs_tol=a, rel_tol=r) for a, r in levels]
        else:
            raise ConfigError(f"study must be 'L' or 'tol', got {study!r}")
        if len(levels) < 2:
            raise ConfigError("a convergence study needs at least two levels")
        vals = [_contour_values(params, o, pts) for o in opts]
        errs = tuple(
            float(np.max(np.abs(vals[k] - vals[k + 1]) / np.abs(vals[k + 1]))) for k in range(len(vals) - 1)
        )
        tables.append(
            ConvergenceTable(study=study, side=config.side.value, gamma=gamma, levels=levels[:-1], errors=errs, n_points=len(pts))
        )
    return tables


def write_convergence_csv(tables: Sequence[ConvergenceTable], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["study", "side", "gamma", "level", "max_rel_error"])
        for t in tables:
            w.writerows(t.to_rows())
    return path


# ---------------------------------------------------------------- figures


def emit_plot(samples, path, *, title: str = "", params: Mapping | None = None) -> Path:
    """Write a self-contained SVG of Evans data.

    ``samples`` may be a list of :class:`EvansSample` (one closed image
    curve), a mapping ``label -> list of samples`` (nested family with a
    legend), or a :class:`RealAxisScan` (a real-axis trace).
    """
    if isinstance(samples, RealAxisScan):
        curves = {"D(lambda)": (samples.lambdas, samples.values)}
        svg = render_curves(curves, title=_title(title, params), xlabel="lambda", ylabel="D", closed=False, origin=False)
    else:
        family = samples if isinstance(samples, Mapping) else {"": samples}
        if not family or any(len(s) == 0 for s in family.values()):
            raise ValueError("emit_plot needs nonempty samples")
        curves = {}
        for label, ss in family.items():
            vals = np.array([s.value for s in ss], dtype=complex)
            curves[str(label)] = (vals.real, vals.imag)
        svg = render_curves(curves, title=_title(title, params), xlabel="Re D", ylabel="Im D", closed=True, origin=True)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg)
    return path


def _title(title: str, params: Mapping | None) -> str:
    if params:
        extra = ", ".join(f"{k}={v}" for k, v in params.items())
        return f"{title} ({extra})" if title else extra
    return title
