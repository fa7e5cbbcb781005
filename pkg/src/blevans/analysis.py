"""Stability-index checks, real-axis scans and limit comparisons."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .contour import Contour
from .errors import DegenerateIndexError
from .evans import EvansEvaluator, ShootingOptions
from .params import LayerParams

__all__ = [
    "RealAxisScan",
    "real_axis_scan",
    "stability_index",
    "vstar",
    "limit_comparison",
    "write_scan_csv",
    "EPS0",
]

EPS0 = 1e-6
ORIGIN_ZERO = 1e-8


@dataclass(frozen=True)
class RealAxisScan:
    """Samples of ``D`` on ``[0, R]``.

    ``lambdas`` starts with ``0, eps0, 2 eps0, 3 eps0`` followed by a uniform
    grid on ``(0, R]``.  ``values`` are the real parts; ``max_imag`` records
    the largest imaginary part seen.
    """

    lambdas: np.ndarray
    values: np.ndarray
    zero_at_origin: bool
    transversal_slope: float | None
    sign_changes: int
    max_imag: float
    linear_near_origin: bool | None = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def R(self) -> float:
        return float(self.lambdas[-1])

    @property
    def value_at_origin(self) -> float:
        return float(self.values[0])

    @property
    def value_at_R(self) -> float:
        return float(self.values[-1])


def _finite_difference_slope(d1: float, d2: float, d3: float, eps: float) -> float:
    return (-3.0 * d1 + 4.0 * d2 - d3) / (2.0 * eps)


def real_axis_scan(evaluator: Callable[[complex], complex], R: float = 15.0, n: int = 50, *, eps0: float = EPS0) -> RealAxisScan:
    """Evaluate ``D`` along ``[0, R]`` and classify its behaviour near the origin.

    A zero at the origin is declared when ``|D(0)| <= 1e-8 max |D|``; its
    transversality is measured by the slope of a second-order one-sided
    difference on ``eps0, 2 eps0, 3 eps0``.  Sign changes are counted on
    ``(0, R]``.
    """
    if not R > 0:
        raise ValueError(f"R must be positive, got {R}")
    if n < 10:
        raise ValueError(f"need n >= 10 scan points, got {n}")
    grid = np.linspace(0.0, R, n)[1:]
    lambdas = np.concatenate([[0.0, eps0, 2 * eps0, 3 * eps0], grid])
    raw = np.array([complex(evaluator(complex(lam))) for lam in lambdas])
    values = raw.real
    scale = float(np.max(np.abs(raw)))
    max_imag = float(np.max(np.abs(raw.imag)))
    zero = abs(raw[0]) <= ORIGIN_ZERO * scale
    slope = None
    linear = None
    if zero:
        slope = _finite_difference_slope(values[1], values[2], values[3], eps0)
        if values[1] != 0:
            r2 = values[2] / values[1]
            r3 = values[3] / values[1]
            linear = abs(r2 - 2.0) <= 0.4 and abs(r3 - 3.0) <= 0.6
        else:
            linear = False
    tail = values[1:] if zero else values
    signs = np.sign(tail)
    signs = signs[signs != 0]
    changes = int(np.count_nonzero(signs[1:] != signs[:-1]))
    return RealAxisScan(
        lambdas=lambdas,
        values=values,
        zero_at_origin=bool(zero),
        transversal_slope=slope,
        sign_changes=changes,
        max_imag=max_imag,
        linear_near_origin=linear,
        meta={"scale": scale},
    )


def stability_index(evaluator: Callable[[complex], complex], variant=None, *, R: float = 15.0, eps0: float = EPS0) -> int:
    """``sgn(D(0) D(R))``, or ``sgn(D'(0) D(R))`` for variants with a root at the origin.

    ``variant`` may be an :class:`~blevans.evans.Variant` or a bool saying
    whether the origin root is present; when omitted it is taken from
    ``evaluator.variant`` if available, else inferred from ``|D(0)|``.
    ``+1`` means an even number of unstable real-axis-crossing roots.
    """
    d_r = complex(evaluator(complex(R))).real
    d_0 = complex(evaluator(0j)).real
    if variant is None:
        variant = getattr(evaluator, "variant", None)
    if variant is None:
        origin_root = abs(d_0) <= ORIGIN_ZERO * abs(d_r)
    elif isinstance(variant, bool):
        origin_root = variant
    else:
        origin_root = variant.has_origin_root
    if origin_root:
        d = [complex(evaluator(complex(k * eps0))).real for k in (1, 2, 3)]
        lead = _finite_difference_slope(*d, eps0)
        label = "slope D'(0)"
    else:
        lead = d_0
        label = "D(0)"
    if abs(lead) < 1e-10 * abs(d_r) or d_r == 0.0:
        raise DegenerateIndexError(f"{label} = {lead:.3e} is degenerate against D(R) = {d_r:.3e}")
    return 1 if lead * d_r > 0 else -1


def vstar(start: float = 0.1, tol: float = 1e-10, max_iter: int = 10_000) -> float:
    """Fixed point of ``v = exp(-2 / (1 - v)^2)``.

    This is the threshold below which the reduced energy estimate closes;
    simple iteration contracts on ``[0, 0.2]``.
    """
    v = float(start)
    for _ in range(max_iter):
        nxt = math.exp(-2.0 / (1.0 - v) ** 2)
        if abs(nxt - v) < tol:
            return nxt
        v = nxt
    raise ArithmeticError("v* iteration did not converge")


def limit_comparison(
    params_base: LayerParams,
    v_plus_list: Sequence[float],
    contour: Contour | Sequence[complex],
    options: ShootingOptions | None = None,
) -> list[float]:
    """``max_k |D(lam_k; v_plus) - D0(lam_k)|`` for each ``v_plus``.

    The reference is the pressureless Evans function of the same
    ``(gamma, v0, side)``.  Every member of the family is continued from the
    same seed point, so the Kato gauge is shared.
    """
    pts = contour.points if isinstance(contour, Contour) else np.asarray(contour, dtype=complex)
    ref_eval = EvansEvaluator(params_base.limit(), options)
    ref = np.array([ref_eval(lam) for lam in pts])
    out = []
    for vp in v_plus_list:
        ev = ref_eval if vp == 0.0 else EvansEvaluator(params_base.with_v_plus(vp), options)
        vals = np.array([ev(lam) for lam in pts])
        out.append(float(np.max(np.abs(vals - ref))))
    return out


def write_scan_csv(scan: RealAxisScan, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lambda", "D"])
        for lam, d in zip(scan.lambdas, scan.values):
            w.writerow([f"{lam:.17g}", f"{d:.17g}"])
    return path
