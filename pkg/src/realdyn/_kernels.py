"""Floating-point orbit kernels used to locate fixed points of iterates.

The numba path is used when numba imports and ``REALDYN_NO_NUMBA`` is unset
(or ``0``).  The numpy path is always available and also runs on object
arrays of ``gmpy2.mpfr`` values for extended precision.

Results here only steer the search for separating points; every verdict is
re-checked in exact integer arithmetic.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False


def numba_enabled() -> bool:
    flag = os.environ.get("REALDYN_NO_NUMBA", "").strip().lower()
    return _HAVE_NUMBA and flag in ("", "0", "false", "no")


def orbit_residual_numpy(pc, qc, xs, k):
    """Scaled ``F(x)`` and ``F'(x)`` for ``F = X_k - x*Y_k``.

    ``pc[i]``, ``qc[i]`` are the coefficients of ``X**i * Y**(d-i)`` in the
    homogenised numerator and denominator.  After every step the pair
    ``(X, Y)`` and its derivative are divided by ``max(|X|, |Y|)``, so the
    returned values are a common positive multiple of ``F`` and ``F'``.
    """
    d = len(pc) - 1
    X = xs.copy()
    one = xs * 0 + 1
    Y = one.copy()
    dX = one.copy()
    dY = xs * 0
    s = np.maximum(abs(X), one)
    X, Y, dX, dY = X / s, Y / s, dX / s, dY / s
    for _ in range(k):
        xp = [one]
        yp = [one]
        for _ in range(d):
            xp.append(xp[-1] * X)
            yp.append(yp[-1] * Y)
        P = xs * 0
        Q = xs * 0
        PX = xs * 0
        PY = xs * 0
        QX = xs * 0
        QY = xs * 0
        for i in range(d + 1):
            mono = xp[i] * yp[d - i]
            P = P + pc[i] * mono
            Q = Q + qc[i] * mono
            if i > 0:
                t = i * xp[i - 1] * yp[d - i]
                PX = PX + pc[i] * t
                QX = QX + qc[i] * t
            if i < d:
                t = (d - i) * xp[i] * yp[d - i - 1]
                PY = PY + pc[i] * t
                QY = QY + qc[i] * t
        dP = PX * dX + PY * dY
        dQ = QX * dX + QY * dY
        s = np.maximum(abs(P), abs(Q))
        X, Y, dX, dY = P / s, Q / s, dP / s, dQ / s
    return X - xs * Y, dX - Y - xs * dY


if _HAVE_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def _orbit_residual_jit(pc, qc, xs, k):  # pragma: no cover - compiled
        n = xs.shape[0]
        d = pc.shape[0] - 1
        h = np.empty(n)
        dh = np.empty(n)
        xp = np.empty(d + 1)
        yp = np.empty(d + 1)
        for j in range(n):
            x = xs[j]
            s = max(abs(x), 1.0)
            X = x / s
            Y = 1.0 / s
            dX = 1.0 / s
            dY = 0.0
            for _ in range(k):
                xp[0] = 1.0
                yp[0] = 1.0
                for i in range(1, d + 1):
                    xp[i] = xp[i - 1] * X
                    yp[i] = yp[i - 1] * Y
                P = 0.0
                Q = 0.0
                PX = 0.0
                PY = 0.0
                QX = 0.0
                QY = 0.0
                for i in range(d + 1):
                    mono = xp[i] * yp[d - i]
                    P += pc[i] * mono
                    Q += qc[i] * mono
                    if i > 0:
                        t = i * xp[i - 1] * yp[d - i]
                        PX += pc[i] * t
                        QX += qc[i] * t
                    if i < d:
                        t = (d - i) * xp[i] * yp[d - i - 1]
                        PY += pc[i] * t
                        QY += qc[i] * t
                dP = PX * dX + PY * dY
                dQ = QX * dX + QY * dY
                s = max(abs(P), abs(Q))
                X = P / s
                Y = Q / s
                dX = dP / s
                dY = dQ / s
            h[j] = X - x * Y
            dh[j] = dX - Y - x * dY
        return h, dh


def orbit_residual(pc, qc, xs, k):
    """Dispatch to the compiled kernel for float64 input when enabled."""
    if xs.dtype == np.float64 and numba_enabled():
        return _orbit_residual_jit(pc, qc, xs, k)
    return orbit_residual_numpy(pc, qc, xs, k)
