"""Semicircular contours and winding numbers.

The contour is the boundary of the right half disk ``{Re lam >= 0, |lam| <= R}``,
traversed counterclockwise, optionally with a small semicircular indentation
into ``Re lam > 0`` around the origin.  Point lists are closed (first point
repeated at the end) and start at the origin, or at ``lam = indent`` when
indented, so that the point set is symmetric under conjugation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, NearZeroError, RefinementCapError
from .params import Side

__all__ = ["Contour", "WindingReport", "hf_bound", "semicircle", "winding_number", "signed_area"]

REFINEMENT_CAP = 2048
NEAR_ZERO = 1e-12
ARG_STEP_LIMIT = math.pi / 2


def hf_bound(gamma: float, side: Side | str) -> float:
    """Bound on ``Re lam + |Im lam|`` for nonstable eigenvalues.

    Inflow: ``(2 sqrt(gamma) + 1)^2 / 2``; outflow:
    ``max(3 sqrt(2) / 2, 3 gamma + 3/8)``.
    """
    if not gamma >= 1.0:
        raise ConfigError(f"gamma must be >= 1, got {gamma}")
    side = Side.parse(side)
    if side is Side.INFLOW:
        return 0.5 * (2.0 * math.sqrt(gamma) + 1.0) ** 2
    return max(3.0 * math.sqrt(2.0) / 2.0, 3.0 * gamma + 3.0 / 8.0)


# A contour piece is either a straight segment or an arc about the origin;
# refinement midpoints are placed on the true geometry.
@dataclass(frozen=True)
class _Piece:
    kind: str  # "line" or "arc"
    radius: float = 0.0

    def midpoint(self, a: complex, b: complex) -> complex:
        if self.kind == "arc":
            ta, tb = math.atan2(a.imag, a.real), math.atan2(b.imag, b.real)
            return self.radius * complex(math.cos(0.5 * (ta + tb)), math.sin(0.5 * (ta + tb)))
        return 0.5 * (a + b)


@dataclass(frozen=True)
class Contour:
    """Closed, counterclockwise contour in the closed right half plane.

    ``points`` has ``n + 1`` entries with ``points[0] == points[-1]``;
    ``pieces[k]`` describes the geometry between ``points[k]`` and
    ``points[k + 1]``.
    """

    points: np.ndarray
    radius: float
    indent_radius: float
    pieces: tuple = field(repr=False, default=())
    orientation: int = 1

    @property
    def n(self) -> int:
        return len(self.points) - 1

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def distinct(self) -> np.ndarray:
        return self.points[:-1]

    def midpoint(self, k: int) -> complex:
        return self.pieces[k].midpoint(complex(self.points[k]), complex(self.points[k + 1]))


def signed_area(points) -> float:
    """Shoelace area of a closed polygon; positive when counterclockwise."""
    z = np.asarray(points, dtype=complex)
    return 0.5 * float(np.sum(z[:-1].real * z[1:].imag - z[1:].real * z[:-1].imag))


def semicircle(radius: float = 10.0, n: int = 60, indent_radius: float = 0.0) -> Contour:
    """The half-disk boundary with ``n`` distinct points.

    ``n`` must be even and at least 16.  The upper half carries ``n/2 + 1``
    points, mirrored by conjugation: the quarter arc from ``R`` to ``iR``
    followed by the imaginary-axis segment down to the origin, or down to
    ``i*indent`` and around the indentation arc to ``indent``.
    """
    if n < 16 or n % 2:
        raise ConfigError(f"contour needs an even number of points >= 16, got {n}")
    if not radius > indent_radius >= 0.0:
        raise ConfigError(f"need radius > indent_radius >= 0, got {radius}, {indent_radius}")
    m = n // 2 + 1  # upper-half points including both real-axis ends
    intervals = m - 1
    arc_len = 0.5 * math.pi * radius
    seg_len = radius - indent_radius
    fixed = 2 if indent_radius > 0 else 0  # intervals on the indentation arc
    avail = intervals - fixed
    n_arc = max(1, min(avail - 1, round(avail * arc_len / (arc_len + seg_len))))
    n_seg = avail - n_arc

    theta = np.linspace(0.0, 0.5 * math.pi, n_arc + 1)
    upper = list(radius * np.exp(1j * theta))
    pieces = [_Piece("arc", radius)] * n_arc
    seg = 1j * np.linspace(radius, indent_radius, n_seg + 1)
    upper += list(seg[1:])
    pieces += [_Piece("line")] * n_seg
    if indent_radius > 0:
        phi = np.linspace(0.5 * math.pi, 0.0, fixed + 1)
        upper += list(indent_radius * np.exp(1j * phi[1:]))
        pieces += [_Piece("arc", indent_radius)] * fixed
    upper = np.array(upper, dtype=complex)
    upper[0] = complex(radius, 0.0)
    upper[n_arc] = complex(0.0, radius)
    upper[-1] = complex(indent_radius, 0.0)
    if indent_radius > 0:
        upper[n_arc + n_seg] = complex(0.0, indent_radius)

    # counterclockwise from the real-axis point nearest the origin:
    # lower half (conjugates, reversed) then the upper half
    lower = np.conj(upper[::-1])
    points = np.concatenate([lower, upper[1:]])
    lower_pieces = list(reversed(pieces))
    all_pieces = tuple(lower_pieces + pieces)
    return Contour(points=points, radius=float(radius), indent_radius=float(indent_radius), pieces=all_pieces)


@dataclass(frozen=True)
class WindingReport:
    winding: int
    max_arg_step: float
    n_points_final: int
    refined: bool
    points: np.ndarray = field(repr=False, compare=False, default=None)
    values: np.ndarray = field(repr=False, compare=False, default=None)
    raw_turns: float = field(compare=False, default=0.0)


def winding_number(
    evaluator: Callable[[complex], complex],
    contour: Contour,
    *,
    cap: int = REFINEMENT_CAP,
    values=None,
) -> WindingReport:
    """Winding number of ``evaluator`` over ``contour`` about the origin.

    The argument increment is accumulated from principal arguments of
    successive quotients ``D_{k+1} / D_k``.  Any step of at least ``pi/2`` is
    bisected (on the contour geometry) until all steps are smaller or the
    point count reaches ``cap``.  Precomputed ``values`` at
    ``contour.points`` may be passed to skip the initial evaluations.
    """
    pts = [complex(p) for p in contour.points]
    pieces = list(contour.pieces)
    if values is None:
        cache: dict[complex, complex] = {}
        vals = []
        for p in pts:
            if p not in cache:
                cache[p] = complex(evaluator(p))
            vals.append(cache[p])
    else:
        vals = [complex(v) for v in values]
        if len(vals) != len(pts):
            raise ValueError("values must match the contour points")
    _check_nonzero(vals, pts)

    refined = False
    k = 0
    while k < len(pts) - 1:
        step = abs(np.angle(vals[k + 1] / vals[k]))
        if step < ARG_STEP_LIMIT:
            k += 1
            continue
        if len(pts) - 1 >= cap:
            raise RefinementCapError(f"argument step {step:.3f} rad persists at {len(pts) - 1} points")
        piece = pieces[k]
        mid = piece.midpoint(pts[k], pts[k + 1])
        val = complex(evaluator(mid))
        pts.insert(k + 1, mid)
        vals.insert(k + 1, val)
        pieces.insert(k + 1, piece)
        refined = True
        _check_nonzero(vals, pts)

    arr = np.array(vals, dtype=complex)
    steps = np.angle(arr[1:] / arr[:-1])
    turns = float(np.sum(steps) / (2.0 * math.pi))
    return WindingReport(
        winding=int(round(turns)),
        max_arg_step=float(np.max(np.abs(steps))) if steps.size else 0.0,
        n_points_final=len(pts) - 1,
        refined=refined,
        points=np.array(pts, dtype=complex),
        values=arr,
        raw_turns=turns,
    )


def _check_nonzero(vals, pts) -> None:
    mags = np.abs(np.asarray(vals))
    top = float(np.max(mags))
    k = int(np.argmin(mags))
    if not np.all(np.isfinite(mags)):
        raise NearZeroError("evaluator returned a non-finite value on the contour")
    if top == 0.0 or mags[k] < NEAR_ZERO * top:
        raise NearZeroError(f"|D| vanishes (relative {mags[k] / top if top else 0:.2e}) at lam={pts[k]}; indent the contour")
