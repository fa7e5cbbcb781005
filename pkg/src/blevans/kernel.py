"""Backend selection for the shooting kernel.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``BLEVANS_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the pure-Python reference is used.  Both expose

    shoot(lam, shift, adjoint, gamma, a, anchor, u0, x0, x1, z0, atol, rtol,
          max_steps=1_000_000) -> (z, u, nsteps, nreject, status)

which integrates, from ``x0`` to ``x1`` with Dormand-Prince 5(4),

    Z' = (-A(x, lam)^* + shift) Z      if adjoint
    Z' = ( A(x, lam)   - shift) Z      otherwise

while co-integrating the profile offset ``u = vhat - anchor`` from ``u0``.
Step control mirrors Matlab's ode45 on ``Z`` and is purely relative on
``u``.  ``status`` is one of the ``STATUS_*`` codes below.
"""
from __future__ import annotations

import os

from . import _kernel_py
from ._kernel_py import STATUS_MAX_STEPS, STATUS_OK, STATUS_OVERFLOW, STATUS_STEP_UNDERFLOW

__all__ = [
    "shoot",
    "BACKEND",
    "available_backends",
    "get_backend",
    "STATUS_OK",
    "STATUS_OVERFLOW",
    "STATUS_MAX_STEPS",
    "STATUS_STEP_UNDERFLOW",
]

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

_FORCE_PURE = os.environ.get("BLEVANS_PURE_PYTHON", "") not in ("", "0")


def available_backends() -> list[str]:
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def get_backend(name: str | None = None):
    """The ``shoot`` callable for ``name`` (``'cython'`` or ``'python'``; default: active)."""
    if name is None:
        name = BACKEND
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernel is not built; run `pip install -e .`")
        return _compiled.shoot
    if name == "python":
        return _kernel_py.shoot
    raise ValueError(f"unknown backend {name!r}")


BACKEND = "cython" if (_compiled is not None and not _FORCE_PURE) else "python"
shoot = get_backend(BACKEND)
