"""Coefficient matrices of the first-order eigenvalue system.

The eigenvalue problem is written as ``W' = A(x, lam) W`` in the variables
``W = (w, u - v, v)``, where

    A(x, lam) = [[0,    lam,  lam        ],
                 [0,    0,    lam        ],
                 [vhat, vhat, f(vhat)-lam]].

Its endstate limits ``A_+`` (``vhat -> v_plus``) and ``A_-`` (``vhat -> 1``)
share the characteristic polynomial

    mu^3 - (f - lam) mu^2 - 2 lam v mu - lam^2 v = 0

with ``(v, f)`` the endstate values.  Eigenvectors are available in closed
form,

    right: (lam (lam + mu), lam mu, mu^2)
    left:  (v mu, v (lam + mu), mu^2)      (row vector, bilinear pairing)

and both degenerate only at ``lam = mu = 0``, where the ``lam -> 0+`` limit
is taken through the slope variable ``t = lam / mu``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import SplittingError
from .params import LayerParams

__all__ = [
    "MatrixKind",
    "CoeffMatrix",
    "Mode",
    "scalar_h",
    "scalar_f",
    "scalar_f_alt",
    "endstate_values",
    "coeff_matrix",
    "endpoint_matrix",
    "asymptotic_modes",
    "unstable_mode",
    "limiting_adjoint_direction",
    "characteristic_roots",
    "limit_gauge_factor",
]

_ZERO_LAMBDA = 1e-100
# Roots with |Re mu| <= _NEUTRAL |mu| count as neutral in the splitting
# check: their sign is rounding noise.  At the minus end the cubic factors as
# (mu + lam)(mu^2 - mu - lam) when f(1) = 1, so for tiny v_plus one root sits
# within O(a) of the axis whenever lam is imaginary.
_NEUTRAL = 1e-13


class MatrixKind(str, Enum):
    FULL = "full"
    LIMITING = "limiting"
    ADJOINT = "adjoint"
    ASYMPTOTIC_PLUS = "asymptotic_plus"
    ASYMPTOTIC_MINUS = "asymptotic_minus"


@dataclass(frozen=True)
class CoeffMatrix:
    entries: np.ndarray
    kind: MatrixKind

    def adjoint(self) -> "CoeffMatrix":
        """``-A^*``, the generator of the adjoint eigenvalue ODE."""
        return CoeffMatrix(-self.entries.conj().T, MatrixKind.ADJOINT)

    def eigvals(self) -> np.ndarray:
        return np.linalg.eigvals(self.entries)

    def __matmul__(self, other):
        return self.entries @ other


@dataclass(frozen=True)
class Mode:
    """One eigen-triple of an endpoint matrix.

    ``right`` satisfies ``(A - mu) right = 0``; ``left`` is the row vector with
    ``left @ (A - mu) = 0``.  Both have unit Euclidean norm.  ``slope`` is
    ``mu / lam`` in the ``lam -> 0+`` limit and is only set at ``lam = 0``.
    """

    mu: complex
    right: np.ndarray
    left: np.ndarray
    slope: float | None = None


def scalar_h(v, params: LayerParams):
    """``h(v) = -v^(gamma+1) + a (gamma - 1) + (a + 1) v^gamma``."""
    g, a = params.gamma, params.a
    return -(v ** (g + 1.0)) + a * (g - 1.0) + (a + 1.0) * v**g


def scalar_f(v, params: LayerParams):
    """``f(v) = 2 v - a (gamma - 1) v^-gamma - (a + 1)``; ``2 v - 1`` in the limit."""
    g, a = params.gamma, params.a
    return 2.0 * v - a * (g - 1.0) * v ** (-g) - (a + 1.0)


def scalar_f_alt(v, params: LayerParams):
    """The same ``f`` written through the ratio ``v_plus / v``.

    This form avoids evaluating ``a`` and is used as an independent check.
    """
    g, vp = params.gamma, params.v_plus
    if vp == 0.0:
        return 2.0 * v - 1.0
    if g == 1.0:
        q = 1.0
    else:
        q = (1.0 - vp) / (1.0 - vp**g)
    return 2.0 * v - (g - 1.0) * q * (vp / v) ** g - q * vp**g - 1.0


def endstate_values(params: LayerParams, end: str) -> tuple[float, float]:
    """``(v, f(v))`` at the requested end: ``'plus'`` (``v_plus``) or ``'minus'`` (``1``)."""
    if end == "plus":
        v = params.v_plus
    elif end == "minus":
        v = 1.0
    else:
        raise ValueError(f"end must be 'plus' or 'minus', got {end!r}")
    if params.is_limit:
        return v, 2.0 * v - 1.0
    return v, float(scalar_f(v, params))


def _matrix(lam: complex, v: float, f: float) -> np.ndarray:
    return np.array(
        [[0.0, lam, lam], [0.0, 0.0, lam], [v, v, f - lam]],
        dtype=complex,
    )


def coeff_matrix(x: float, lam: complex, profile) -> CoeffMatrix:
    """``A(x, lam)`` along ``profile``; the pressureless matrix when ``v_plus == 0``."""
    params = profile.params
    v = float(profile.vhat_at(x))
    f = float(scalar_f(v, params))
    kind = MatrixKind.LIMITING if params.is_limit else MatrixKind.FULL
    return CoeffMatrix(_matrix(complex(lam), v, f), kind)


def endpoint_matrix(lam: complex, params: LayerParams, end: str) -> CoeffMatrix:
    v, f = endstate_values(params, end)
    kind = MatrixKind.ASYMPTOTIC_PLUS if end == "plus" else MatrixKind.ASYMPTOTIC_MINUS
    return CoeffMatrix(_matrix(complex(lam), v, f), kind)


def characteristic_roots(lam: complex, v: float, f: float) -> np.ndarray:
    """Roots of the endpoint characteristic cubic, via the companion matrix.

    Each root is polished by two Newton steps on the cubic itself.
    """
    lam = complex(lam)
    coeffs = np.array([1.0, -(f - lam), -2.0 * lam * v, -lam * lam * v], dtype=complex)
    roots = np.roots(coeffs)
    out = []
    for mu in roots:
        for _ in range(2):
            p = ((mu - (f - lam)) * mu - 2.0 * lam * v) * mu - lam * lam * v
            dp = (3.0 * mu - 2.0 * (f - lam)) * mu - 2.0 * lam * v
            if dp == 0:
                break
            step = p / dp
            if not np.isfinite(step):
                break
            mu = mu - step
        out.append(complex(mu))
    return np.array(out, dtype=complex)


def _unit(vec: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(vec)
    return vec / n


def _vectors(lam: complex, mu: complex, v: float) -> tuple[np.ndarray, np.ndarray]:
    right = np.array([lam * (lam + mu), lam * mu, mu * mu], dtype=complex)
    left = np.array([v * mu, v * (lam + mu), mu * mu], dtype=complex)
    return right, left


def _sort_key(mu: complex):
    return (round(mu.real, 12), mu.imag)


def asymptotic_modes(lam: complex, params: LayerParams, end: str, *, check: bool = True) -> list[Mode]:
    """Eigen-decomposition of ``A_+`` or ``A_-``, sorted by ``Re mu`` ascending.

    Ties (possible on the imaginary axis) are broken by ``Im mu``.  At
    ``lam = 0`` the two vanishing eigenvalues are ordered by their
    ``lam -> 0+`` slopes ``mu / lam``.

    With ``check`` set, a :class:`SplittingError` is raised when, away from
    ``lam = 0`` and for ``v_plus > 0``, the ``plus`` end does not have exactly
    two decaying modes or the ``minus`` end exactly one growing mode.
    """
    lam = complex(lam)
    v, f = endstate_values(params, end)
    if v == 0.0:
        return _jordan_limit_modes(lam, f)
    if abs(lam) < _ZERO_LAMBDA:
        return _zero_lambda_modes(v, f)

    roots = characteristic_roots(lam, v, f)
    modes = []
    for mu in roots:
        r, l = _vectors(lam, mu, v)
        modes.append(Mode(mu=complex(mu), right=_unit(r), left=_unit(l)))
    modes.sort(key=lambda m: _sort_key(m.mu))

    if check and not params.is_limit and abs(lam) > 1e-8 and lam.real >= -1e-12:
        n_neg = sum(1 for m in modes if m.mu.real < -_NEUTRAL * abs(m.mu))
        n_pos = sum(1 for m in modes if m.mu.real > _NEUTRAL * abs(m.mu))
        if end == "plus" and n_neg != 2:
            raise SplittingError(f"A_+({lam}) has {n_neg} decaying modes, expected 2")
        if end == "minus" and n_pos != 1:
            raise SplittingError(f"A_-({lam}) has {n_pos} growing modes, expected 1")
    return modes


def _zero_lambda_modes(v: float, f: float) -> list[Mode]:
    # lam = 0: eigenvalues {0, 0, f}; the double zero is semisimple and its
    # lam -> 0+ eigenvectors come from v t^2 + 2 v t + f = 0, t = lam / mu.
    disc = cmath.sqrt(1.0 - f / v)
    ts = sorted([-1.0 + disc, -1.0 - disc], key=lambda t: (1.0 / t).real)
    modes = []
    for t in ts:
        right = np.array([t * (t + 1.0), t, 1.0], dtype=complex)
        left = np.array([1.0, t + 1.0, 0.0], dtype=complex)
        modes.append(Mode(mu=0j, right=_unit(right), left=_unit(left), slope=float((1.0 / t).real)))
    fast = Mode(
        mu=complex(f),
        right=np.array([0.0, 0.0, 1.0], dtype=complex),
        left=_unit(np.array([v / f, v / f, 1.0], dtype=complex)),
    )
    modes.append(fast)
    modes.sort(key=lambda m: (m.mu.real, m.slope if m.slope is not None else 0.0))
    return modes


def _jordan_limit_modes(lam: complex, f: float) -> list[Mode]:
    # pressureless plus end: eigenvalues {0, 0, f - lam} with a Jordan block at 0
    mu_fast = f - lam
    r_fast, _ = _vectors(lam, mu_fast, 0.0)
    if np.linalg.norm(r_fast) == 0.0:
        r_fast = np.array([0.0, 0.0, 1.0], dtype=complex)
    fast = Mode(mu=complex(mu_fast), right=_unit(r_fast), left=np.array([0.0, 0.0, 1.0], dtype=complex))
    kernel_left = np.array([0.0, -1.0, lam / mu_fast], dtype=complex)
    zero = Mode(mu=0j, right=np.array([1.0, 0.0, 0.0], dtype=complex), left=_unit(kernel_left))
    return [fast, zero, zero]


def unstable_mode(lam: complex, params: LayerParams, end: str) -> Mode:
    """The single growing mode (``Re mu > 0``) of the endpoint matrix."""
    return asymptotic_modes(lam, params, end)[-1]


def limiting_adjoint_direction(lam: complex) -> np.ndarray:
    """``(0, -1, conj(lam) / conj(mu))`` with ``mu = -1 - lam``.

    This spans the bounded solutions at ``+inf`` of the pressureless
    adjoint system; it is conjugate-orthogonal to ``(1, 0, 0)`` and to the
    fast eigenvector of the pressureless ``A_+``.
    """
    lam = complex(lam)
    mu = -1.0 - lam
    return np.array([0.0, -1.0, lam.conjugate() / mu.conjugate()], dtype=complex)


def limit_gauge_factor(lam: complex, gamma: float, lam_ref: float) -> complex:
    """Strong-layer limit of the Kato normalization of the ``plus`` left mode.

    Transporting the growing left eigenvector of ``A_+`` by Kato's rule, with
    its second component fixed to ``-1`` at ``lam_ref``, multiplies the
    explicitly normalized vector by ``((lam + gamma) / (lam_ref + gamma))^(1/4)``
    as ``v_plus -> 0``.  The pressureless adjoint seed is scaled by this factor
    so that both live in the same gauge.
    """
    return complex(((complex(lam) + gamma) / (lam_ref + gamma)) ** 0.25)

