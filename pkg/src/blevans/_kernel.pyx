# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled shooting kernel (Dormand-Prince 5(4) on the shifted 3x3 system).

Step for step identical to ``_kernel_py.shoot``; see that module and
``blevans.kernel`` for the contract.
"""
from libc.math cimport log1p, expm1, exp, fabs, pow, isfinite

cdef extern from "<complex.h>" nogil:
    double cabs(double complex)
    double complex conj(double complex)


cdef double C_A21 = 1.0 / 5
cdef double C_A31 = 3.0 / 40, C_A32 = 9.0 / 40
cdef double C_A41 = 44.0 / 45, C_A42 = -56.0 / 15, C_A43 = 32.0 / 9
cdef double C_A51 = 19372.0 / 6561, C_A52 = -25360.0 / 2187, C_A53 = 64448.0 / 6561, C_A54 = -212.0 / 729
cdef double C_A61 = 9017.0 / 3168, C_A62 = -355.0 / 33, C_A63 = 46732.0 / 5247
cdef double C_A64 = 49.0 / 176, C_A65 = -5103.0 / 18656
cdef double C_A71 = 35.0 / 384, C_A73 = 500.0 / 1113, C_A74 = 125.0 / 192
cdef double C_A75 = -2187.0 / 6784, C_A76 = 11.0 / 84
cdef double C_E1 = 71.0 / 57600, C_E3 = -71.0 / 16695, C_E4 = 71.0 / 1920
cdef double C_E5 = -17253.0 / 339200, C_E6 = 22.0 / 525, C_E7 = -1.0 / 40

cdef double OVERFLOW = 1e100
cdef double EPS = 2.220446049250313e-16


cdef struct System:
    double complex lam
    double complex lamc
    double complex shift
    int adjoint
    double gamma
    double a
    double anchor
    double b0
    double apow


cdef inline void rhs(System* s, double complex* y, double u, double complex* dz, double* du) nogil:
    cdef double g = s.gamma
    cdef double v = s.anchor + u
    cdef double bracket, f, lr
    cdef double complex z1 = y[0], z2 = y[1], z3 = y[2]
    if s.a == 0.0:
        bracket = s.b0 + u
        f = 2.0 * v - 1.0
    else:
        lr = log1p(u / s.anchor)
        bracket = u + s.apow * expm1(-g * lr)
        f = 2.0 * v - s.apow * (g - 1.0) * exp(-g * lr) - (s.a + 1.0)
    du[0] = v * bracket
    if s.adjoint:
        dz[0] = -v * z3 + s.shift * z1
        dz[1] = -s.lamc * z1 - v * z3 + s.shift * z2
        dz[2] = -s.lamc * (z1 + z2) - (f - s.lamc) * z3 + s.shift * z3
    else:
        dz[0] = s.lam * (z2 + z3) - s.shift * z1
        dz[1] = s.lam * z3 - s.shift * z2
        dz[2] = v * (z1 + z2) + (f - s.lam) * z3 - s.shift * z3


def shoot(lam, shift, adjoint, double gamma, double a, double anchor, double u0,
          double x0, double x1, z0, double atol, double rtol, long max_steps=1000000):
    """Integrate the shifted eigenvalue system from ``x0`` to ``x1``.

    Returns ``(z, u, nsteps, nreject, status)``.
    """
    cdef System s
    s.lam = lam
    s.lamc = conj(s.lam)
    s.shift = shift
    s.adjoint = 1 if adjoint else 0
    s.gamma = gamma
    s.a = a
    s.anchor = anchor
    s.b0 = anchor - 1.0
    s.apow = a * pow(anchor, -gamma) if a != 0.0 else 0.0

    cdef double complex y[3]
    cdef double complex yn[3]
    cdef double complex yt[3]
    cdef double complex k1[3]
    cdef double complex k2[3]
    cdef double complex k3[3]
    cdef double complex k4[3]
    cdef double complex k5[3]
    cdef double complex k6[3]
    cdef double complex k7[3]
    cdef double u, un, ut, q1, q2, q3, q4, q5, q6, q7
    cdef int i
    y[0] = z0[0]
    y[1] = z0[1]
    y[2] = z0[2]
    u = u0

    cdef double x = x0
    cdef double span = x1 - x0
    cdef double direction = 1.0 if span >= 0 else -1.0
    if span == 0.0:
        return (complex(y[0]), complex(y[1]), complex(y[2])), u, 0, 0, 0
    cdef double thresh = atol / rtol
    cdef double hmax = fabs(span) / 10.0
    cdef double pw = 1.0 / 5.0
    cdef double absh, rh, h, hmin, err, e, scale, temp, m
    cdef bint last, failed
    cdef long nsteps = 0, nreject = 0
    cdef int status = 0

    with nogil:
        rhs(&s, y, u, k1, &q1)
        absh = min(hmax, fabs(span))
        rh = 0.0
        for i in range(3):
            rh = max(rh, cabs(k1[i]) / max(cabs(y[i]), thresh))
        rh = max(rh, fabs(q1) / max(fabs(u), 1e-300))
        rh /= 0.8 * pow(rtol, pw)
        if absh * rh > 1.0:
            absh = 1.0 / rh

        while True:
            hmin = 16.0 * EPS * fabs(x)
            absh = min(hmax, max(hmin, absh))
            h = direction * absh
            last = False
            if 1.1 * absh >= fabs(x1 - x):
                h = x1 - x
                absh = fabs(h)
                last = True
            failed = False
            while True:
                for i in range(3):
                    yt[i] = y[i] + h * C_A21 * k1[i]
                ut = u + h * C_A21 * q1
                rhs(&s, yt, ut, k2, &q2)
                for i in range(3):
                    yt[i] = y[i] + h * C_A31 * k1[i] + h * C_A32 * k2[i]
                ut = u + h * C_A31 * q1 + h * C_A32 * q2
                rhs(&s, yt, ut, k3, &q3)
                for i in range(3):
                    yt[i] = y[i] + h * C_A41 * k1[i] + h * C_A42 * k2[i] + h * C_A43 * k3[i]
                ut = u + h * C_A41 * q1 + h * C_A42 * q2 + h * C_A43 * q3
                rhs(&s, yt, ut, k4, &q4)
                for i in range(3):
                    yt[i] = (y[i] + h * C_A51 * k1[i] + h * C_A52 * k2[i] + h * C_A53 * k3[i]
                             + h * C_A54 * k4[i])
                ut = u + h * C_A51 * q1 + h * C_A52 * q2 + h * C_A53 * q3 + h * C_A54 * q4
                rhs(&s, yt, ut, k5, &q5)
                for i in range(3):
                    yt[i] = (y[i] + h * C_A61 * k1[i] + h * C_A62 * k2[i] + h * C_A63 * k3[i]
                             + h * C_A64 * k4[i] + h * C_A65 * k5[i])
                ut = (u + h * C_A61 * q1 + h * C_A62 * q2 + h * C_A63 * q3
                      + h * C_A64 * q4 + h * C_A65 * q5)
                rhs(&s, yt, ut, k6, &q6)
                for i in range(3):
                    yn[i] = (y[i] + h * C_A71 * k1[i] + h * C_A73 * k3[i] + h * C_A74 * k4[i]
                             + h * C_A75 * k5[i] + h * C_A76 * k6[i])
                un = (u + h * C_A71 * q1 + h * C_A73 * q3 + h * C_A74 * q4
                      + h * C_A75 * q5 + h * C_A76 * q6)
                rhs(&s, yn, un, k7, &q7)
                err = 0.0
                for i in range(3):
                    e = cabs(h * (C_E1 * k1[i] + C_E3 * k3[i] + C_E4 * k4[i] + C_E5 * k5[i]
                                  + C_E6 * k6[i] + C_E7 * k7[i]))
                    scale = max(max(cabs(y[i]), cabs(yn[i])), thresh)
                    err = max(err, e / scale)
                e = fabs(h * (C_E1 * q1 + C_E3 * q3 + C_E4 * q4 + C_E5 * q5 + C_E6 * q6 + C_E7 * q7))
                scale = max(max(fabs(u), fabs(un)), 1e-300)
                err = max(err, e / scale)
                if err <= rtol:
                    break
                nreject += 1
                if absh <= hmin:
                    status = 3
                    break
                if not failed:
                    failed = True
                    absh = max(hmin, absh * max(0.1, 0.8 * pow(rtol / err, pw)))
                else:
                    absh = max(hmin, 0.5 * absh)
                h = direction * absh
                last = False
            if status != 0:
                break
            nsteps += 1
            if last:
                x = x1
            else:
                x = x + h
            for i in range(3):
                y[i] = yn[i]
                k1[i] = k7[i]
            u = un
            q1 = q7
            m = max(max(cabs(y[0]), cabs(y[1])), cabs(y[2]))
            if m > OVERFLOW or not isfinite(m):
                status = 1
                break
            if last:
                break
            if nsteps >= max_steps:
                status = 2
                break
            if not failed:
                temp = 1.25 * pow(err / rtol, pw)
                if temp > 0.2:
                    absh = absh / temp
                else:
                    absh = 5.0 * absh

    return (complex(y[0]), complex(y[1]), complex(y[2])), u, nsteps, nreject, status
