"""Background boundary-layer profiles.

The profile solves the scalar autonomous ODE ``v' = H(v)`` from ``v(0) = v0``
towards the attracting rest point in the direction of integration: forward
to ``v_plus`` on ``[0, L]`` (inflow) or backward to ``1`` on ``[-L, 0]``
(outflow).

The unknown actually integrated is the offset ``u = v - anchor`` from that
rest point.  The tail of the profile sits exponentially close to the anchor,
far below the float resolution of ``v`` itself when ``gamma`` is large, and
the Evans shooting restarts the profile from that tail.  Evaluation between
nodes is cubic Hermite in ``u`` with the exact slopes at the nodes.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq
from scipy.special import expit

from .errors import DomainError, IntegrationError
from .params import LayerParams, Side, profile_rhs_offset

__all__ = ["Profile", "solve_profile", "limiting_profile", "write_profile_csv"]

DEFAULT_L = 18.0


@dataclass(frozen=True)
class Profile:
    """A computed profile on ``[0, L]`` (inflow) or ``[-L, 0]`` (outflow).

    ``x`` is strictly increasing; ``v`` holds the profile at those nodes and
    ``u`` the offset ``v - anchor`` from the endstate approached in the domain.
    """

    params: LayerParams
    x: np.ndarray
    v: np.ndarray
    u: np.ndarray
    domain: tuple[float, float]
    delta: float
    _offset: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def L(self) -> float:
        return self.domain[1] - self.domain[0]

    @property
    def anchor(self) -> float:
        return self.params.anchor

    @property
    def dv(self) -> np.ndarray:
        return profile_rhs_offset(self.u, self.params, self.anchor)

    def offset_at(self, x):
        out = self._offset(np.asarray(x, dtype=float))
        return float(out) if out.ndim == 0 else out

    def vhat_at(self, x):
        return self.anchor + self.offset_at(x)

    def dvhat_at(self, x):
        return profile_rhs_offset(self.offset_at(x), self.params, self.anchor)

    __call__ = vhat_at

    @property
    def far_end(self) -> float:
        """The abscissa at which Evans shooting starts: ``L`` or ``-L``."""
        return self.domain[1] if self.params.side is Side.INFLOW else self.domain[0]

    def to_csv(self, path) -> Path:
        return write_profile_csv(self, path)


def solve_profile(
    params: LayerParams,
    L: float = DEFAULT_L,
    *,
    rtol: float = 1e-11,
    atol: float = 1e-300,
    max_step: float = 0.05,
) -> Profile:
    """Integrate the profile ODE from ``v(0) = v0`` across a domain of length ``L``.

    Step control is relative to the offset from the endstate, so the default
    ``atol`` is negligible.  The pressureless point (``v_plus == 0``) is
    dispatched to :func:`limiting_profile`, which is exact.
    """
    if not L > 0:
        raise DomainError(f"domain length must be positive, got {L}")
    if params.is_limit:
        return limiting_profile(params.v0, L=L, side=params.side, gamma=params.gamma)

    anchor = params.anchor

    def rhs(_x, y):
        return profile_rhs_offset(y, params, anchor)

    end = L if params.side is Side.INFLOW else -L
    u0 = params.v0 - anchor
    sol = solve_ivp(rhs, (0.0, end), [u0], method="RK45", rtol=rtol, atol=atol, max_step=max_step)
    if sol.status != 0:
        raise IntegrationError(f"profile integration failed: {sol.message}")
    x = sol.t
    u = sol.y[0]
    if np.any(np.sign(u) != np.sign(u0)):
        raise IntegrationError("profile crossed its endstate; tolerance too loose")
    if end < 0:
        x = x[::-1]
        u = u[::-1]
    spline = CubicHermiteSpline(x, u, profile_rhs_offset(u, params, anchor))
    domain = (float(x[0]), float(x[-1]))

    def offset(xq):
        return spline(np.clip(xq, domain[0], domain[1]))

    delta = _locate_delta(spline, domain, params)
    return Profile(
        params=params,
        x=x,
        v=anchor + u,
        u=u,
        domain=domain,
        delta=delta,
        _offset=offset,
        stats={"nfev": int(sol.nfev), "nsteps": int(x.size - 1)},
    )


def _locate_delta(spline, domain, params: LayerParams) -> float:
    target = params.v_mid - params.anchor
    g = lambda s: float(spline(s)) - target
    lo, hi = domain
    if g(lo) * g(hi) > 0:
        # midpoint lies on the continuation of the orbit outside the domain
        return params.delta
    return brentq(g, lo, hi, xtol=1e-12, rtol=4 * np.finfo(float).eps)


def limiting_profile(
    v0: float,
    *,
    L: float = DEFAULT_L,
    side: Side | str = Side.INFLOW,
    gamma: float = 1.0,
    spacing: float = 0.05,
) -> Profile:
    """Closed-form pressureless profile ``(1 - tanh((x - delta)/2)) / 2``.

    ``delta = 2 artanh(2 v0 - 1)`` so that the profile passes through ``v0``
    at the origin.  ``gamma`` is carried along only so that the returned
    parameter point can be compared with its finite-``v_plus`` family.
    """
    if not 0.0 < v0 < 1.0:
        raise DomainError(f"v0 must lie in (0, 1), got {v0}")
    params = LayerParams.create(gamma, 0.0, v0, side)
    delta = 2.0 * math.atanh(2.0 * v0 - 1.0)
    if params.side is Side.INFLOW:
        domain = (0.0, float(L))

        def offset(xq):
            return expit(-(xq - delta))

    else:
        domain = (-float(L), 0.0)

        def offset(xq):
            return -expit(xq - delta)

    n = max(2, int(math.ceil(L / spacing)) + 1)
    x = np.linspace(domain[0], domain[1], n)
    u = offset(x)
    return Profile(
        params=params,
        x=x,
        v=params.anchor + u,
        u=u,
        domain=domain,
        delta=delta,
        _offset=offset,
        stats={"exact": True},
    )


def write_profile_csv(profile: Profile, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "vhat", "dvhat"])
        for xi, vi, di in zip(profile.x, profile.v, profile.dv):
            w.writerow([f"{xi:.17g}", f"{vi:.17g}", f"{di:.17g}"])
    return path
