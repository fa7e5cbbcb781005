"""Pure-Python shooting kernel.

Reference implementation of the compiled kernel in ``_kernel.pyx``; both
follow the same algorithm step for step, so their results agree to
rounding.  See :func:`blevans.kernel.shoot` for the argument contract.
"""
from __future__ import annotations

import math

# Dormand-Prince 5(4) tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
A71, A73, A74, A75, A76 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40

STATUS_OK = 0
STATUS_OVERFLOW = 1
STATUS_MAX_STEPS = 2
STATUS_STEP_UNDERFLOW = 3

OVERFLOW = 1e100
EPS = 2.220446049250313e-16


class _System:
    __slots__ = ("lam", "lamc", "shift", "adjoint", "gamma", "a", "anchor", "b0", "apow")

    def __init__(self, lam, shift, adjoint, gamma, a, anchor):
        self.lam = lam
        self.lamc = lam.conjugate()
        self.shift = shift
        self.adjoint = adjoint
        self.gamma = gamma
        self.a = a
        self.anchor = anchor
        self.b0 = anchor - 1.0
        self.apow = a * anchor ** (-gamma) if a != 0.0 else 0.0

    def rhs(self, z1, z2, z3, u):
        g = self.gamma
        v = self.anchor + u
        if self.a == 0.0:
            bracket = self.b0 + u
            f = 2.0 * v - 1.0
        else:
            lr = math.log1p(u / self.anchor)
            bracket = u + self.apow * math.expm1(-g * lr)
            f = 2.0 * v - self.apow * (g - 1.0) * math.exp(-g * lr) - (self.a + 1.0)
        du = v * bracket
        s = self.shift
        if self.adjoint:
            lc = self.lamc
            d1 = -v * z3 + s * z1
            d2 = -lc * z1 - v * z3 + s * z2
            d3 = -lc * (z1 + z2) - (f - lc) * z3 + s * z3
        else:
            lam = self.lam
            d1 = lam * (z2 + z3) - s * z1
            d2 = lam * z3 - s * z2
            d3 = v * (z1 + z2) + (f - lam) * z3 - s * z3
        return d1, d2, d3, du


def _stage(y, h, ks, coeffs):
    out = list(y)
    for c, k in zip(coeffs, ks):
        if c != 0.0:
            for i in range(4):
                out[i] += h * c * k[i]
    out[3] = out[3].real
    return out


def shoot(lam, shift, adjoint, gamma, a, anchor, u0, x0, x1, z0, atol, rtol, max_steps=1_000_000):
    """Integrate the shifted eigenvalue system from ``x0`` to ``x1``.

    Returns ``(z, u, nsteps, nreject, status)``.
    """
    sysm = _System(complex(lam), complex(shift), bool(adjoint), float(gamma), float(a), float(anchor))
    y = [complex(z0[0]), complex(z0[1]), complex(z0[2]), float(u0)]
    x = float(x0)
    span = float(x1) - x
    direction = 1.0 if span >= 0 else -1.0
    if span == 0.0:
        return (y[0], y[1], y[2]), y[3], 0, 0, STATUS_OK
    thresh = atol / rtol
    hmax = abs(span) / 10.0
    pow_ = 1.0 / 5.0

    k1 = sysm.rhs(*y)
    # initial step as in ode45
    absh = min(hmax, abs(span))
    rh = max(abs(k1[i]) / max(abs(y[i]), thresh) for i in range(3))
    rh = max(rh, abs(k1[3]) / max(abs(y[3]), 1e-300))
    rh /= 0.8 * rtol**pow_
    if absh * rh > 1.0:
        absh = 1.0 / rh

    nsteps = 0
    nreject = 0
    while True:
        hmin = 16.0 * EPS * abs(x)
        absh = min(hmax, max(hmin, absh))
        h = direction * absh
        last = False
        if 1.1 * absh >= abs(float(x1) - x):
            h = float(x1) - x
            absh = abs(h)
            last = True
        failed = False
        while True:
            k2 = sysm.rhs(*_stage(y, h, (k1,), (A21,)))
            k3 = sysm.rhs(*_stage(y, h, (k1, k2), (A31, A32)))
            k4 = sysm.rhs(*_stage(y, h, (k1, k2, k3), (A41, A42, A43)))
            k5 = sysm.rhs(*_stage(y, h, (k1, k2, k3, k4), (A51, A52, A53, A54)))
            k6 = sysm.rhs(*_stage(y, h, (k1, k2, k3, k4, k5), (A61, A62, A63, A64, A65)))
            ynew = _stage(y, h, (k1, k3, k4, k5, k6), (A71, A73, A74, A75, A76))
            k7 = sysm.rhs(*ynew)
            err = 0.0
            for i in range(4):
                e = abs(h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]))
                if i < 3:
                    scale = max(abs(y[i]), abs(ynew[i]), thresh)
                else:
                    scale = max(abs(y[i]), abs(ynew[i]), 1e-300)
                err = max(err, e / scale)
            if err <= rtol:
                break
            nreject += 1
            if absh <= hmin:
                return (y[0], y[1], y[2]), y[3], nsteps, nreject, STATUS_STEP_UNDERFLOW
            if not failed:
                failed = True
                absh = max(hmin, absh * max(0.1, 0.8 * (rtol / err) ** pow_))
            else:
                absh = max(hmin, 0.5 * absh)
            h = direction * absh
            last = False
        nsteps += 1
        x = float(x1) if last else x + h
        y = ynew
        k1 = k7
        if max(abs(y[0]), abs(y[1]), abs(y[2])) > OVERFLOW or not math.isfinite(abs(y[0]) + abs(y[1]) + abs(y[2])):
            return (y[0], y[1], y[2]), y[3], nsteps, nreject, STATUS_OVERFLOW
        if last:
            return (y[0], y[1], y[2]), y[3], nsteps, nreject, STATUS_OK
        if nsteps >= max_steps:
            return (y[0], y[1], y[2]), y[3], nsteps, nreject, STATUS_MAX_STEPS
        if not failed:
            temp = 1.25 * (err / rtol) ** pow_
            absh = absh / temp if temp > 0.2 else 5.0 * absh
