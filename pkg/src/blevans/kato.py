"""Analytic continuation of endpoint eigenvectors along paths in ``lam``.

Vectors are transported by the second-order projector scheme

    V_{k+1} = [I + 1/2 P_{k+1} (I - P_k)] P_{k+1} V_k
    y_{k+1} = y_k P_{k+1} [I + 1/2 (I - P_k) P_{k+1}]

where ``P = V y / (y V)`` is the rank-one spectral projector written with
the bilinear pairing.  This discretizes Kato's ODE: the pairing ``y V`` is
conserved and ``y dV/dlam = 0``.  The conjugate-side vector ``dual =
conj(y)`` is what the adjoint shooting consumes.

Each path segment is subdivided until one pass and a pass with twice the
substeps agree to ``tol``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Protocol, Sequence

import numpy as np

from .eigensystem import Mode, asymptotic_modes
from .errors import EigenvalueCollisionError
from .params import LayerParams

__all__ = [
    "KatoFrame",
    "EndpointSource",
    "MatrixFamilySource",
    "seed_frame",
    "transport",
    "kato_continue",
]

COLLISION_TOL = 1e-8
_EYE = np.eye(3, dtype=complex)


class ModeSource(Protocol):
    def mode(self, lam: complex) -> Mode: ...


@dataclass(frozen=True)
class EndpointSource:
    """The growing mode of ``A_+`` or ``A_-`` for a parameter point."""

    params: LayerParams
    end: str

    def mode(self, lam: complex) -> Mode:
        return asymptotic_modes(lam, self.params, self.end)[-1]


@dataclass(frozen=True)
class MatrixFamilySource:
    """The eigenvalue of largest real part of an arbitrary matrix family."""

    matrix: Callable[[complex], np.ndarray]

    def mode(self, lam: complex) -> Mode:
        a = np.asarray(self.matrix(lam), dtype=complex)
        w, vr = np.linalg.eig(a)
        k = int(np.argmax(w.real))
        wl, vl = np.linalg.eig(a.T)
        kl = int(np.argmin(np.abs(wl - w[k])))
        return Mode(mu=complex(w[k]), right=vr[:, k], left=vl[:, kl])


@dataclass(frozen=True)
class KatoFrame:
    """Continued eigen-pair at one spectral point.

    ``vector`` is the right eigenvector ``V``; ``dual`` the conjugate-side left
    eigenvector ``Vt`` with ``conj(Vt) @ (A - mu) = 0``; ``projector`` the
    spectral projector ``V conj(Vt)^T / <Vt, V>``.
    """

    lam: complex
    mu: complex
    vector: np.ndarray
    dual: np.ndarray
    projector: np.ndarray
    source: ModeSource = field(repr=False, compare=False)

    @property
    def pairing(self) -> complex:
        """``<Vt, V>`` with the adjoint-side vector conjugated."""
        return complex(np.vdot(self.dual, self.vector))

    @property
    def left_row(self) -> np.ndarray:
        return self.dual.conj()

    def conjugate(self) -> "KatoFrame":
        """Frame at ``conj(lam)`` for a real-coefficient family."""
        return replace(
            self,
            lam=self.lam.conjugate(),
            mu=self.mu.conjugate(),
            vector=self.vector.conj(),
            dual=self.dual.conj(),
            projector=self.projector.conj(),
        )


def _projector(mode: Mode) -> np.ndarray:
    r, y = mode.right, mode.left
    pair = complex(y @ r)
    cond = abs(pair) / (np.linalg.norm(y) * np.linalg.norm(r))
    if not cond > COLLISION_TOL:
        raise EigenvalueCollisionError(f"eigenvalue {mode.mu} is (nearly) defective: |<l, r>| = {cond:.3g}")
    return np.outer(r, y) / pair


def seed_frame(source: ModeSource, lam0: complex, primary: str = "right") -> KatoFrame:
    """Normalized frame at ``lam0``.

    ``primary='left'`` fixes the second component of the left row vector to
    ``-1``; ``primary='right'`` gives the right vector unit length with a
    positive real last component.  The partner is scaled so that the pairing
    equals one.
    """
    lam0 = complex(lam0)
    mode = source.mode(lam0)
    r = mode.right.astype(complex)
    y = mode.left.astype(complex)
    if primary == "left":
        y = y / (-y[1])
        r = r / complex(y @ r)
    elif primary == "right":
        r = r / np.linalg.norm(r)
        k = int(np.argmax(np.abs(r)))
        phase = r[2] if abs(r[2]) > 1e-12 else r[k]
        r = r * (abs(phase) / phase)
        y = y / complex(y @ r)
    else:
        raise ValueError(f"primary must be 'left' or 'right', got {primary!r}")
    proj = _projector(Mode(mode.mu, r, y))
    return KatoFrame(lam=lam0, mu=mode.mu, vector=r, dual=y.conj(), projector=proj, source=source)


def _march(source: ModeSource, lam_a: complex, lam_b: complex, r, y, p_a, n: int, cache: dict):
    p_prev = p_a
    mode = None
    for k in range(1, n + 1):
        lam = lam_a + (lam_b - lam_a) * (k / n)
        key = (k / n)
        hit = cache.get(key)
        if hit is None:
            mode = source.mode(lam)
            hit = (mode, _projector(mode))
            cache[key] = hit
        mode, p_next = hit
        r = p_next @ r
        r = r + 0.5 * (p_next @ ((_EYE - p_prev) @ r))
        y = y @ p_next
        y = y + 0.5 * ((y @ (_EYE - p_prev)) @ p_next)
        p_prev = p_next
    return r, y, mode, p_prev


def transport(frame: KatoFrame, lam: complex, *, tol: float = 1e-8, max_substeps: int = 4096) -> KatoFrame:
    """Continue ``frame`` along the straight segment to ``lam``."""
    lam = complex(lam)
    if lam == frame.lam:
        return frame
    source = frame.source
    r0 = frame.vector
    y0 = frame.dual.conj()
    cache: dict = {}
    n = max(1, int(np.ceil(abs(lam - frame.lam) / 0.25)))
    r1, y1, mode, proj = _march(source, frame.lam, lam, r0, y0, frame.projector, n, cache)
    while True:
        n2 = 2 * n
        r2, y2, mode2, proj2 = _march(source, frame.lam, lam, r0, y0, frame.projector, n2, cache)
        err = max(
            np.linalg.norm(r2 - r1) / np.linalg.norm(r2),
            np.linalg.norm(y2 - y1) / np.linalg.norm(y2),
        )
        if err <= tol:
            break
        if n2 >= max_substeps:
            raise EigenvalueCollisionError(
                f"Kato transport {frame.lam} -> {lam} did not settle ({err:.2e} with {n2} substeps)"
            )
        n, r1, y1 = n2, r2, y2
    return KatoFrame(lam=lam, mu=mode2.mu, vector=r2, dual=y2.conj(), projector=proj2, source=source)


def kato_continue(seed: KatoFrame, path: Sequence[complex], *, tol: float = 1e-8) -> list[KatoFrame]:
    """Frames at every point of ``path``, continued from ``seed`` in order."""
    frames = []
    current = seed
    for lam in path:
        current = transport(current, complex(lam), tol=tol)
        frames.append(current)
    return frames
