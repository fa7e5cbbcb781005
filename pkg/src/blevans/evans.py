"""Evans functions by one-sided shooting.

Four variants are provided:

``in``       inflow layer, ``v_plus > 0``: the adjoint solution decaying at
             ``+inf`` is shot from ``x = L`` to the boundary and paired with
             ``W0_1 = (1, 0, 0)``.
``out``      outflow layer: the growing solution at ``-inf`` is shot from
             ``x = -L`` to the boundary and paired with ``Wt0_1``.
``lim_in``   pressureless inflow limit, seeded with the exact adjoint kernel
             vector ``(0, -1, conj(lam / mu))``.
``lim_out``  pressureless outflow limit.

All pairings conjugate the adjoint-side vector so that every ``D`` is
analytic in ``lam``.  The exponential growth of the shot solution is removed
by integrating the system shifted by the endpoint eigenvalue, and the
removed factor is never reattached: values are reported in the gauge fixed
by Kato continuation of the endpoint eigenvectors from ``lam_ref = 10``.
The profile is co-integrated with the eigenvalue system, so no
interpolation error of the background enters ``D``.
"""
from __future__ import annotations

import csv
import threading
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import kernel
from .eigensystem import limit_gauge_factor, limiting_adjoint_direction, unstable_mode
from .errors import DomainError, IntegrationError, ShootingOverflowError
from .kato import EndpointSource, KatoFrame, seed_frame, transport
from .params import LayerParams, Side, profile_rhs
from .profile import DEFAULT_L, Profile, solve_profile

__all__ = [
    "Variant",
    "EvansSample",
    "BoundaryData",
    "ShootingOptions",
    "FrameBook",
    "EvansEvaluator",
    "boundary_data",
    "shoot_adjoint_inflow",
    "shoot_unstable_outflow",
    "evans_inflow",
    "evans_outflow",
    "evans_limit",
    "shock_correction",
    "boundary_mismatch",
    "write_samples_csv",
    "read_samples_csv",
    "LAMBDA_REF",
]

LAMBDA_REF = 10.0
_RE_GUARD = -1e-9


class Variant(str, Enum):
    IN = "in"
    OUT = "out"
    LIM_IN = "lim_in"
    LIM_OUT = "lim_out"

    @classmethod
    def for_params(cls, params: LayerParams) -> "Variant":
        if params.side is Side.INFLOW:
            return cls.LIM_IN if params.is_limit else cls.IN
        return cls.LIM_OUT if params.is_limit else cls.OUT

    @property
    def has_origin_root(self) -> bool:
        """Whether ``D(0) = 0`` is known analytically for this variant."""
        return self is not Variant.IN

    @property
    def side(self) -> Side:
        return Side.INFLOW if self in (Variant.IN, Variant.LIM_IN) else Side.OUTFLOW


@dataclass(frozen=True)
class EvansSample:
    lam: complex
    value: complex
    variant: Variant
    meta: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class BoundaryData:
    """Boundary vectors at ``x = 0`` for spectral parameter ``lam``.

    ``dvhat0`` is the profile slope ``vhat'(0) = H(v0) < 0``.
    """

    side: Side
    lam: complex
    dvhat0: float

    @property
    def w01(self) -> np.ndarray:
        return np.array([1.0, 0.0, 0.0], dtype=complex)

    @property
    def alpha(self) -> complex:
        return -self.dvhat0 / (self.lam - self.dvhat0)

    @property
    def w0_basis(self) -> np.ndarray:
        """Columns ``W0_2 = (1, 0, 0)`` and ``W0_3 = (0, alpha - 1, 1)``."""
        lam, d = self.lam, self.dvhat0
        return np.array([[1.0, 0.0], [0.0, -lam / (lam - d)], [0.0, 1.0]], dtype=complex)

    @property
    def wtilde0(self) -> np.ndarray:
        lc = self.lam.conjugate()
        return np.array([0.0, -1.0, -lc / (lc - self.dvhat0)], dtype=complex)

    def pair(self, w: np.ndarray) -> complex:
        """``<Wt0_1, w>`` (outflow) or ``<w, W0_1>`` (inflow), conjugate pairing."""
        if self.side is Side.INFLOW:
            return complex(np.conj(w[0]))
        return complex(np.vdot(self.wtilde0, w))


def boundary_data(params: LayerParams, lam: complex) -> BoundaryData:
    return BoundaryData(side=params.side, lam=complex(lam), dvhat0=float(profile_rhs(params.v0, params)))


@dataclass(frozen=True)
class ShootingOptions:
    L: float = DEFAULT_L
    abs_tol: float = 1e-6
    rel_tol: float = 1e-8
    kato_tol: float = 1e-8
    lam_ref: float = LAMBDA_REF

    def __post_init__(self):
        if not self.L > 0:
            raise DomainError(f"L must be positive, got {self.L}")
        if not (self.abs_tol > 0 and self.rel_tol > 0 and self.kato_tol > 0):
            raise DomainError("tolerances must be positive")


# ---------------------------------------------------------------- frames


class FrameBook:
    """Kato frames of one endpoint family, shared by every ``v0`` and side.

    Frames are seeded at the real point ``lam_ref`` and continued along
    straight segments from the nearest frame already known; lower
    half-plane frames are conjugates of upper half-plane ones.  Because the
    endpoint eigen-pair is analytic on the closed right half plane the
    result does not depend on the order in which points are requested.
    """

    def __init__(self, source: EndpointSource, primary: str, lam_ref: float, tol: float):
        self.source = source
        self.tol = tol
        self._lock = threading.Lock()
        seed = seed_frame(source, lam_ref, primary)
        self._frames: dict[complex, KatoFrame] = {seed.lam: seed}

    def __len__(self) -> int:
        return len(self._frames)

    def frame(self, lam: complex) -> KatoFrame:
        lam = complex(lam)
        if lam.imag < 0:
            return self.frame(lam.conjugate()).conjugate()
        with self._lock:
            hit = self._frames.get(lam)
            if hit is not None:
                return hit
            keys = np.array(list(self._frames), dtype=complex)
            start = self._frames[complex(keys[int(np.argmin(np.abs(keys - lam)))])]
            fr = transport(start, lam, tol=self.tol)
            self._frames[lam] = fr
            return fr


_BOOKS: dict[tuple, FrameBook] = {}
_BOOKS_LOCK = threading.Lock()


def _frame_book(params: LayerParams, end: str, opts: ShootingOptions) -> FrameBook:
    key = (params.gamma, params.v_plus, end, opts.lam_ref, opts.kato_tol)
    with _BOOKS_LOCK:
        book = _BOOKS.get(key)
        if book is None:
            primary = "left" if end == "plus" else "right"
            book = FrameBook(EndpointSource(params, end), primary, opts.lam_ref, opts.kato_tol)
            if len(_BOOKS) > 64:
                _BOOKS.pop(next(iter(_BOOKS)))
            _BOOKS[key] = book
        return book


# -------------------------------------------------------------- shooting


def _check_lambda(lam: complex) -> complex:
    lam = complex(lam)
    if lam.real < _RE_GUARD:
        raise DomainError(f"Evans functions are evaluated on Re(lam) >= 0, got {lam}")
    return lam


def _run(profile: Profile, lam, shift, adjoint: bool, z0, x_start: float, x_end: float, opts: ShootingOptions):
    params = profile.params
    u0 = profile.offset_at(x_start)
    z, u, nsteps, nrej, status = kernel.shoot(
        complex(lam),
        complex(shift),
        adjoint,
        params.gamma,
        params.a,
        profile.anchor,
        u0,
        float(x_start),
        float(x_end),
        tuple(complex(c) for c in z0),
        opts.abs_tol,
        opts.rel_tol,
    )
    if status == kernel.STATUS_OVERFLOW:
        raise ShootingOverflowError(f"shot solution exceeded 1e100 at lam={lam}; wrong mode selected?")
    if status != kernel.STATUS_OK:
        raise IntegrationError(f"Evans integration failed at lam={lam} (status {status})")
    meta = {"steps": int(nsteps), "rejected": int(nrej), "backend": kernel.BACKEND}
    return np.array(z, dtype=complex), profile.anchor + u, meta


def shoot_adjoint_inflow(profile: Profile, lam: complex, seed: np.ndarray, mu: complex, opts: ShootingOptions | None = None):
    """Adjoint solution decaying at ``+inf``, evaluated at ``x = 0``.

    Integrates ``Z' = (-A^* + conj(mu)) Z`` from ``Z(L) = seed`` down to the
    boundary, where ``mu`` is the growing eigenvalue of ``A_+`` whose left
    eigenvector ``seed`` (in conjugate form) spans the decaying adjoint
    direction.  Returns ``(Z(0), meta)``; ``meta['rescale_rate']`` is the
    removed exponential rate ``conj(mu)``.
    """
    opts = opts or ShootingOptions(L=profile.L)
    lam = _check_lambda(lam)
    z, vhat0, meta = _run(profile, lam, np.conj(mu), True, seed, profile.far_end, 0.0, opts)
    meta.update(rescale_rate=complex(np.conj(mu)), vhat0=vhat0)
    return z, meta


def shoot_unstable_outflow(profile: Profile, lam: complex, seed: np.ndarray, mu: complex, opts: ShootingOptions | None = None):
    """Growing solution at ``-inf``, evaluated at ``x = 0``.

    Integrates ``Z' = (A - mu) Z`` from ``Z(-L) = seed`` up to the boundary.
    """
    opts = opts or ShootingOptions(L=profile.L)
    lam = _check_lambda(lam)
    z, vhat0, meta = _run(profile, lam, mu, False, seed, profile.far_end, 0.0, opts)
    meta.update(rescale_rate=complex(mu), vhat0=vhat0)
    return z, meta


class EvansEvaluator:
    """``lam -> D(lam)`` for one parameter point.

    The variant follows from the parameters: inflow or outflow, finite or
    pressureless.  The profile is computed once; Kato frames are shared
    between evaluators of the same endpoint family.
    """

    def __init__(self, params: LayerParams, options: ShootingOptions | None = None, *, profile: Profile | None = None):
        self.params = params
        self.options = options or ShootingOptions()
        self.variant = Variant.for_params(params)
        self.profile = profile if profile is not None else solve_profile(params, self.options.L)
        self.boundary_slope = float(profile_rhs(params.v0, params))
        if self.variant is Variant.LIM_IN:
            self.book = None
        else:
            end = "plus" if self.variant is Variant.IN else "minus"
            self.book = _frame_book(params, end, self.options)

    def seed(self, lam: complex) -> tuple[np.ndarray, complex]:
        """Shooting seed and shift eigenvalue at ``lam``."""
        if self.variant is Variant.LIM_IN:
            gauge = limit_gauge_factor(lam, self.params.gamma, self.options.lam_ref)
            return np.conj(gauge) * limiting_adjoint_direction(lam), 0j
        fr = self.book.frame(lam)
        if self.variant is Variant.IN:
            return fr.dual, fr.mu
        return fr.vector, fr.mu

    def shoot(self, lam: complex):
        """The shot vector at ``x = 0`` and integrator statistics."""
        lam = _check_lambda(lam)
        seed, mu = self.seed(lam)
        if self.variant.side is Side.INFLOW:
            return shoot_adjoint_inflow(self.profile, lam, seed, mu, self.options)
        return shoot_unstable_outflow(self.profile, lam, seed, mu, self.options)

    def sample(self, lam: complex) -> EvansSample:
        lam = complex(lam)
        z, meta = self.shoot(lam)
        bd = BoundaryData(self.params.side, lam, self.boundary_slope)
        return EvansSample(lam=lam, value=bd.pair(z), variant=self.variant, meta=meta)

    def __call__(self, lam: complex) -> complex:
        return self.sample(lam).value

    def samples(self, lams: Iterable[complex]) -> list[EvansSample]:
        return [self.sample(lam) for lam in lams]


def evans_inflow(params: LayerParams, lam: complex, options: ShootingOptions | None = None) -> EvansSample:
    if params.side is not Side.INFLOW or params.is_limit:
        raise DomainError("evans_inflow needs an inflow point with v_plus > 0")
    return EvansEvaluator(params, options).sample(lam)


def evans_outflow(params: LayerParams, lam: complex, options: ShootingOptions | None = None) -> EvansSample:
    if params.side is not Side.OUTFLOW or params.is_limit:
        raise DomainError("evans_outflow needs an outflow point with v_plus > 0")
    return EvansEvaluator(params, options).sample(lam)


def evans_limit(params: LayerParams, lam: complex, options: ShootingOptions | None = None) -> EvansSample:
    """``D0_in`` or ``D0_out`` for the pressureless point (``v_plus = 0``)."""
    if not params.is_limit:
        raise DomainError("evans_limit needs v_plus = 0; use params.limit()")
    return EvansEvaluator(params, options).sample(lam)


def shock_correction(params: LayerParams, lam: complex, x0: float | None = None) -> complex:
    """Factor ``exp((mu1_plus - mu1_minus) x0)`` with ``x0 = delta`` by default.

    ``mu1_minus`` is the growing eigenvalue of ``A_-`` and ``mu1_plus`` that of
    ``A_+`` (so ``-conj(mu1_plus)`` is the decay rate of the adjoint mode).
    Multiplying the boundary-layer Evans function by this factor undoes the
    exponential weights the two endpoint modes pick up when the boundary is
    moved a distance ``x0`` into the shock; the result tends to the Evans
    function of the full shock as ``v0 -> 1``.
    """
    lam = complex(lam)
    if x0 is None:
        x0 = params.delta
    if x0 == 0.0:
        return 1.0 + 0j
    mu_p = unstable_mode(lam, params, "plus").mu
    mu_m = unstable_mode(lam, params, "minus").mu
    return complex(np.exp((mu_p - mu_m) * x0))


def boundary_mismatch(
    params: LayerParams,
    lam: complex,
    L_list: Sequence[float],
    options: ShootingOptions | None = None,
    *,
    tail: float = 12.0,
) -> list[float]:
    """``|Wt1(L + delta) - Wt1_limit|`` for each ``L`` in ``L_list``.

    ``Wt1`` is the Kato-normalized decaying adjoint solution of the finite
    ``v_plus`` inflow problem, shot from ``max(L) + delta + tail``;
    ``Wt1_limit`` is the pressureless kernel direction in the same gauge.
    Small values confirm that, beyond the displaced layer, the solution has
    already settled onto the limiting direction.
    """
    if params.side is not Side.INFLOW or params.is_limit:
        raise DomainError("boundary_mismatch is defined for inflow points with v_plus > 0")
    opts = options or ShootingOptions()
    lam = _check_lambda(lam)
    targets = sorted((float(L) + params.delta for L in L_list), reverse=True)
    if targets[-1] < 0:
        raise DomainError("every L + delta must be nonnegative")
    far = targets[0] + tail
    profile = solve_profile(params, far)
    fr = _frame_book(params, "plus", opts).frame(lam)
    limit = np.conj(limit_gauge_factor(lam, params.gamma, opts.lam_ref)) * limiting_adjoint_direction(lam)
    shift = np.conj(fr.mu)
    z = fr.dual
    x = far
    out = {}
    for xt in targets:
        z, _, _ = _run(profile, lam, shift, True, z, x, xt, opts)
        x = xt
        out[xt] = float(np.linalg.norm(z - limit))
    return [out[float(L) + params.delta] for L in L_list]


# ------------------------------------------------------------------ I/O


def write_samples_csv(samples: Iterable[EvansSample], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["re_lambda", "im_lambda", "re_D", "im_D", "variant"])
        for s in samples:
            w.writerow([f"{s.lam.real:.17g}", f"{s.lam.imag:.17g}", f"{s.value.real:.17g}", f"{s.value.imag:.17g}", s.variant.value])
    return path


def read_samples_csv(path) -> list[EvansSample]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [
        EvansSample(
            lam=complex(float(r["re_lambda"]), float(r["im_lambda"])),
            value=complex(float(r["re_D"]), float(r["im_D"])),
            variant=Variant(r["variant"]),
        )
        for r in rows
    ]
