"""Rescaled parameter point of a compressive boundary layer.

Coordinates are the rescaled pseudo-Lagrangian ones in which the left
endstate of the continued standing shock is ``v_- = 1``.  A parameter point
is ``(gamma, v_plus, v0, side)``; ``v_plus = 0`` selects the pressureless
strong-layer limit, whose profile equation is ``v' = v (v - 1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, OrderingError

__all__ = [
    "Side",
    "LayerParams",
    "derive_constants",
    "profile_rhs",
    "profile_rhs_offset",
]


class Side(str, Enum):
    INFLOW = "inflow"
    OUTFLOW = "outflow"

    @classmethod
    def parse(cls, value: "Side | str") -> "Side":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise DomainError(f"unknown side {value!r}; expected 'inflow' or 'outflow'") from None


def derive_constants(gamma: float, v_plus: float) -> tuple[float, dict[str, float]]:
    """Return the pressure constant ``a`` and residual checks.

    ``a = v_+^gamma (1 - v_+) / (1 - v_+^gamma)`` is fixed by requiring
    that ``v_+`` be a rest point of the profile equation.  At ``gamma = 1``
    the removable singularity gives ``a = v_+``.

    The returned dict holds the residuals ``H(v_+)`` and ``H(1)`` of the
    profile right-hand side, both of which vanish analytically.
    """
    if not gamma >= 1.0:
        raise DomainError(f"gamma must be >= 1, got {gamma}")
    if not 0.0 < v_plus < 1.0:
        raise DomainError(f"v_plus must lie in (0, 1), got {v_plus}")
    if gamma == 1.0:
        a = v_plus
    else:
        log_vp = math.log(v_plus)
        # 1 - v+^gamma and 1 - v+ without cancellation
        a = math.exp(gamma * log_vp) * (-math.expm1(log_vp)) / (-math.expm1(gamma * log_vp))
    checks = {
        "H(v_plus)": _rhs(v_plus, gamma, a),
        "H(1)": _rhs(1.0, gamma, a),
    }
    return a, checks


def _rhs(v, gamma: float, a: float):
    return v * (v - 1.0 + a * (v ** (-gamma) - 1.0))


def profile_rhs(v, params: "LayerParams"):
    """``H(v) = v (v - 1 + a (v^-gamma - 1))``, the profile slope.

    Accepts scalars or arrays of positive ``v``.  With ``v_plus = 0`` this is
    the pressureless slope ``v (v - 1)``.
    """
    if isinstance(v, np.ndarray):
        return _rhs(v.astype(float), params.gamma, params.a)
    return _rhs(float(v), params.gamma, params.a)


def _offset_bracket(u, gamma: float, a: float, anchor: float):
    # v - 1 + a (v^-gamma - 1) at v = anchor + u, written so that it is
    # accurate relative to u when the anchor is a zero of the bracket
    if a == 0.0:
        return (anchor - 1.0) + u
    ratio = np.log1p(u / anchor) if isinstance(u, np.ndarray) else math.log1p(u / anchor)
    em = np.expm1(-gamma * ratio) if isinstance(u, np.ndarray) else math.expm1(-gamma * ratio)
    return u + a * anchor ** (-gamma) * em


def profile_rhs_offset(u, params: "LayerParams", anchor: float):
    """``H(anchor + u)`` evaluated without cancellation near the anchor.

    ``anchor`` must be a rest point, ``v_plus`` or ``1`` (or ``0`` in the
    pressureless limit).  The profile approaches its endstate exponentially,
    so the offset ``u`` may be far below the resolution of ``anchor`` itself;
    this form keeps full relative accuracy in ``u``.
    """
    if isinstance(u, np.ndarray):
        u = u.astype(float)
    else:
        u = float(u)
    return (anchor + u) * _offset_bracket(u, params.gamma, params.a, anchor)


@dataclass(frozen=True)
class LayerParams:
    """Immutable parameter point with derived constants.

    Use :meth:`create` rather than the raw constructor; it validates the
    compressive ordering and fills in ``a`` and ``delta``.  ``delta`` is the
    abscissa where the (continued) profile crosses the midpoint
    ``(1 + v_plus) / 2``; it may lie outside the physical half-line.
    """

    gamma: float
    v_plus: float
    v0: float
    side: Side
    a: float = field(default=float("nan"))
    delta: float = field(default=float("nan"))

    @classmethod
    def create(cls, gamma: float, v_plus: float, v0: float, side: Side | str = Side.INFLOW) -> "LayerParams":
        side = Side.parse(side)
        gamma = float(gamma)
        v_plus = float(v_plus)
        v0 = float(v0)
        if not gamma >= 1.0:
            raise DomainError(f"gamma must be >= 1, got {gamma}")
        if v_plus == 0.0:
            a = 0.0
        else:
            a, _ = derive_constants(gamma, v_plus)
        if not v_plus < v0 < 1.0:
            raise OrderingError(
                f"compressive ordering requires v_plus < v0 < 1, got v_plus={v_plus}, v0={v0}"
            )
        delta = _displacement(gamma, v_plus, v0, a)
        return cls(gamma=gamma, v_plus=v_plus, v0=v0, side=side, a=a, delta=delta)

    @property
    def is_limit(self) -> bool:
        return self.v_plus == 0.0

    @property
    def anchor(self) -> float:
        """The endstate approached inside the domain: ``v_plus`` (inflow) or ``1`` (outflow)."""
        return self.v_plus if self.side is Side.INFLOW else 1.0

    @property
    def v_mid(self) -> float:
        return 0.5 * (1.0 + self.v_plus)

    def with_v_plus(self, v_plus: float) -> "LayerParams":
        return LayerParams.create(self.gamma, v_plus, self.v0, self.side)

    def with_side(self, side: Side | str) -> "LayerParams":
        return LayerParams.create(self.gamma, self.v_plus, self.v0, side)

    def limit(self) -> "LayerParams":
        """The pressureless point with the same ``gamma``, ``v0`` and side."""
        return self.with_v_plus(0.0)

    def as_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "v_plus": self.v_plus,
            "v0": self.v0,
            "side": self.side.value,
            "a": self.a,
            "delta": self.delta,
        }


def _displacement(gamma: float, v_plus: float, v0: float, a: float) -> float:
    v_mid = 0.5 * (1.0 + v_plus)
    if v_plus == 0.0:
        return 2.0 * math.atanh(2.0 * v0 - 1.0)
    if v0 == v_mid:
        return 0.0
    # x(v) = int_{v0}^{v} dw / H(w); H has no zero strictly between v0 and v_mid
    val, _ = quad(lambda w: 1.0 / _rhs(w, gamma, a), v0, v_mid, epsabs=1e-14, epsrel=1e-13, limit=200)
    return float(val)
