"""Sign-change certificates for real-rootedness of fixed-point polynomials.

Sturm chains stop being practical long before the iterate degrees we scan
(``d**k`` around 2000).  For ``F_k = P_k - z*Q_k`` we instead

1. locate candidate roots numerically by iterating the map itself
   (float64 kernel, then ``gmpy2.mpfr`` in windows float cannot resolve),
2. collect dyadic separators around every candidate, and
3. evaluate the exact sign of ``F_k`` at each separator by iterating the
   homogenised map in integer arithmetic.

If the exact signs change ``deg F_k`` times, every root is real and simple
and consecutive separators isolate them.  Otherwise no claim is made and the
caller falls back to an exact method.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .exactpoly import IntPoly, IsolatingInterval

try:
    import gmpy2
except ImportError:  # pragma: no cover
    gmpy2 = None

log = logging.getLogger(__name__)

_SPLIT = 8
_MAX_LEVELS = 40
_MP_PRECISIONS = (160, 320, 640)


def fujiwara_bound(a: IntPoly) -> Fraction:
    """Power of two strictly above every |root| of ``a`` (Fujiwara's bound)."""
    n = a.degree
    if n <= 0:
        return Fraction(1)
    ln = math.log2(abs(a.lead))
    e = -60.0
    for i in range(1, n + 1):
        c = a.coeffs[n - i]
        if c:
            t = math.log2(abs(c)) - ln - (1 if i == n else 0)
            e = max(e, t / i)
    # 2 * max(...), with slack for rounding in the logs
    return Fraction(2) ** (math.ceil(e + 1 + 1e-9) + 1)


def exact_orbit_value(hp: Sequence[int], hq: Sequence[int], k: int, x: Fraction) -> int:
    """Integer with the sign of ``c * F_k(x)`` for a fixed nonzero ``c``."""
    d = len(hp) - 1
    num, den = x.numerator, x.denominator
    X, Y = num, den
    for _ in range(k):
        xp = [1]
        yp = [1]
        for _ in range(d):
            xp.append(xp[-1] * X)
            yp.append(yp[-1] * Y)
        X = sum(c * xp[i] * yp[d - i] for i, c in enumerate(hp) if c)
        Y = sum(c * xp[i] * yp[d - i] for i, c in enumerate(hq) if c)
    return X * den - num * Y


def _sgn(a):
    return np.where(_bool(a > 0), 1, np.where(_bool(a < 0), -1, 0)).astype(np.int8)


def _bool(a):
    # comparisons on object (mpfr) arrays come back as object arrays
    return np.asarray(a, dtype=bool)


class _Backend:
    """Evaluates the scaled residual at float64 or mpfr sample points."""

    def __init__(self, hp, hq, k, prec=None):
        self.k = k
        self.prec = prec
        top = max(max(abs(c) for c in hp), max(abs(c) for c in hq))
        shift = top.bit_length()
        if prec is None:
            self.pc = np.array([math.ldexp(c, -shift) if c else 0.0 for c in hp])
            self.qc = np.array([math.ldexp(c, -shift) if c else 0.0 for c in hq])
        else:
            with gmpy2.context(precision=prec):
                scale = gmpy2.mpfr(2) ** -shift
                self.pc = [gmpy2.mpfr(c) * scale for c in hp]
                self.qc = [gmpy2.mpfr(c) * scale for c in hq]

    def points(self, values):
        if self.prec is None:
            return np.asarray(values, dtype=np.float64)
        with gmpy2.context(precision=self.prec):
            return np.array([gmpy2.mpfr(v) for v in values], dtype=object)

    def __call__(self, xs):
        if self.prec is None:
            with np.errstate(all="ignore"):
                h, dh = _kernels.orbit_residual(self.pc, self.qc, xs, self.k)
            # nudge off exact float zeros so every sample has a definite sign
            for _ in range(4):
                z = h == 0
                if not z.any():
                    break
                xs = xs.copy()
                xs[z] = np.nextafter(xs[z], np.inf)
                with np.errstate(all="ignore"):
                    hz, dz = _kernels.orbit_residual(self.pc, self.qc, xs[z], self.k)
                h[z], dh[z] = hz, dz
            return xs, h, dh
        with gmpy2.context(precision=self.prec):
            h, dh = _kernels.orbit_residual_numpy(self.pc, self.qc, xs, self.k)
            ulp = gmpy2.mpfr(2) ** (-self.prec + 4)
            z = h == 0
            if z.any():
                xs = xs.copy()
                for i in np.nonzero(z)[0]:
                    xs[i] = xs[i] + ulp * max(abs(xs[i]), gmpy2.mpfr(1))
                hz, dz = _kernels.orbit_residual_numpy(self.pc, self.qc, xs[z], self.k)
                h[z], dh[z] = hz, dz
        return xs, h, dh

    def floor(self, a, b):
        """Smallest cell width worth splitting at this precision."""
        if self.prec is None:
            mag = np.maximum(np.maximum(abs(a), abs(b)), 1e-300)
            return np.spacing(mag) * 256
        with gmpy2.context(precision=self.prec):
            eps = gmpy2.mpfr(2) ** (-self.prec + 8)
            tiny = gmpy2.mpfr(2) ** -1000
            return np.array([max(abs(x), abs(y), tiny) * eps for x, y in zip(a, b)], dtype=object)


def _search(ev: _Backend, lo, hi, n0: int):
    """Adaptive subdivision; returns (sign-change cells, unresolved cells)."""
    grid = ev.points([lo + (hi - lo) * j / n0 for j in range(n0 + 1)]) if ev.prec else np.linspace(lo, hi, n0 + 1)
    xs, h, dh = ev(grid)
    a, b = xs[:-1], xs[1:]
    ha, hb, da, db = h[:-1], h[1:], dh[:-1], dh[1:]
    found = []
    unresolved = []
    for _ in range(_MAX_LEVELS):
        if len(a) == 0:
            break
        w = b - a
        sa, sb = _sgn(ha), _sgn(hb)
        sc = sa * sb < 0
        with np.errstate(all="ignore"):
            na = abs(ha / da)
            nb = abs(hb / db)
        na = np.where(_bool(na == na), na, 0)  # nan -> 0 forces a split
        nb = np.where(_bool(nb == nb), nb, 0)
        sda, sdb = _sgn(da), _sgn(db)
        # both Newton steps must land on (nearly) the same point
        lin = sc & (sda == sdb) & (sda != 0) & _bool(abs(na + nb - w) <= w / 64)
        # Newton from each end must point away from the cell (or far beyond it)
        with np.errstate(all="ignore"):
            away_a = _bool((ha * da > 0) | (na > 4 * w))
            away_b = _bool((hb * db < 0) | (nb > 4 * w))
        empty = ~sc & away_a & away_b & _bool(na > w) & _bool(nb > w)
        todo = ~(lin | empty)
        at_floor = todo & _bool(w <= ev.floor(a, b))
        keep = lin | (at_floor & sc)
        for i in np.nonzero(keep)[0]:
            found.append((a[i], b[i]))
        for i in np.nonzero(at_floor)[0]:
            unresolved.append((a[i], b[i]))
        split = np.nonzero(todo & ~at_floor)[0]
        if len(split) == 0:
            a = a[:0]
            break
        a, b, ha, hb, da, db = a[split], b[split], ha[split], hb[split], da[split], db[split]
        w = b - a
        inner = [a + w * j / _SPLIT for j in range(1, _SPLIT)]
        pts = np.stack(inner, axis=1).reshape(-1)
        if ev.prec is not None:
            pts = np.asarray(pts, dtype=object)
        pts, hi_, dhi = ev(pts)
        m = _SPLIT - 1
        pts = pts.reshape(-1, m)
        hi_ = hi_.reshape(-1, m)
        dhi = dhi.reshape(-1, m)
        xs_all = np.concatenate([a[:, None], pts, b[:, None]], axis=1)
        h_all = np.concatenate([ha[:, None], hi_, hb[:, None]], axis=1)
        d_all = np.concatenate([da[:, None], dhi, db[:, None]], axis=1)
        a, b = xs_all[:, :-1].reshape(-1), xs_all[:, 1:].reshape(-1)
        ha, hb = h_all[:, :-1].reshape(-1), h_all[:, 1:].reshape(-1)
        da, db = d_all[:, :-1].reshape(-1), d_all[:, 1:].reshape(-1)
    else:
        for i in range(len(a)):
            unresolved.append((a[i], b[i]))
    return found, unresolved


def _merge_windows(cells):
    cells = sorted(cells, key=lambda c: c[0])
    out = []
    for lo, hi in cells:
        pad = hi - lo
        lo, hi = lo - pad, hi + pad
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def _to_fraction(x) -> Fraction:
    return Fraction(*x.as_integer_ratio())


def locate_candidates(
    hp, hq, k, bound: Fraction, degree: int, density: int = 32
) -> list[tuple[Fraction, Fraction]]:
    """Numerically found cells that appear to contain a sign change."""
    ev = _Backend(hp, hq, k)
    R = float(bound)
    n0 = max(1024, density * degree)
    found, unresolved = _search(ev, -R, R, n0)
    cells = [(float(a), float(b)) for a, b in found]
    if unresolved and gmpy2 is not None:
        windows = _merge_windows([(float(a), float(b)) for a, b in unresolved])
        for prec in _MP_PRECISIONS:
            if not windows:
                break
            evm = _Backend(hp, hq, k, prec)
            still = []
            with gmpy2.context(precision=prec):
                for lo, hi in windows:
                    f2, u2 = _search(evm, gmpy2.mpfr(lo), gmpy2.mpfr(hi), 64)
                    cells.extend(f2)
                    still.extend(u2)
            windows = _merge_windows(still)
            if windows:
                log.debug("%d windows unresolved at %d bits", len(windows), prec)
    return [(_to_fraction(a), _to_fraction(b)) for a, b in cells]


def certify_fixed_points_real(
    hp: Sequence[int], hq: Sequence[int], k: int, F: IntPoly
) -> list[IsolatingInterval] | None:
    """Isolating intervals for all roots of ``F`` if they are proved real and simple.

    ``hp``/``hq`` are the homogenised coefficients of the map and ``F`` its
    ``k``-th fixed-point polynomial.  Returns ``None`` when the certificate
    does not close; that is not evidence of nonreal roots.
    """
    n = F.degree
    if n <= 0:
        return []
    R = fujiwara_bound(F)
    for density in (32, 512):
        out = _certify_once(hp, hq, k, F, R, locate_candidates(hp, hq, k, R, n, density))
        if out is not None:
            return out
    return None


def _certify_once(hp, hq, k, F: IntPoly, R: Fraction, cells) -> list[IsolatingInterval] | None:
    n = F.degree
    pts = {-R, R}
    for lo, hi in cells:
        if -R < lo < R:
            pts.add(lo)
        if -R < hi < R:
            pts.add(hi)
    seps = sorted(pts)
    signs = []
    for x in seps:
        v = exact_orbit_value(hp, hq, k, x)
        signs.append((v > 0) - (v < 0))
    changes = 0
    out: list[IsolatingInterval] = []
    last_i = None
    for i, s in enumerate(signs):
        if s == 0:
            continue
        if last_i is not None and s != signs[last_i]:
            changes += 1
            zeros = [seps[j] for j in range(last_i + 1, i) if signs[j] == 0]
            if len(zeros) == 1:
                out.append(IsolatingInterval.point(zeros[0], F))
            elif not zeros:
                out.append(IsolatingInterval(seps[last_i], seps[i], "open", F))
            else:
                return None
        last_i = i
    if changes != n or len(out) != n:
        log.debug("sign-change certificate found %d of %d roots", changes, n)
        return None
    return out
