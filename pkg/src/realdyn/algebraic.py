"""Real algebraic numbers given by isolating intervals, and rational intervals.

A real algebraic number is either a :class:`~fractions.Fraction` or an
:class:`IsolatingInterval` over a square-free witness.  Comparisons are
exact: overlapping enclosures are first tested for equality through the gcd
of the witnesses, then refined until they separate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

from .exactpoly import IntPoly, IsolatingInterval, eval_sign, poly_gcd, simplest_dyadic, sturm_count

Real = Union[Fraction, IsolatingInterval]
Interval = tuple[Fraction, Fraction]


def as_real(x) -> Real:
    if isinstance(x, IsolatingInterval):
        if x.kind == "point":
            return x.lower
        if x.kind == "infinity":
            raise ValueError("the point at infinity is not a real number")
        return x
    return Fraction(x)


def bounds(x: Real) -> Interval:
    if isinstance(x, IsolatingInterval):
        return x.lower, x.upper
    return x, x


def _cmp_interval_rational(x: IsolatingInterval, y: Fraction) -> int:
    if y <= x.lower:
        return 1
    if y >= x.upper:
        return -1
    sy = eval_sign(x.witness, y)
    if sy == 0:
        return 0
    # the root lies on the side where the witness changes sign
    return 1 if sy == eval_sign(x.witness, x.lower) else -1


def same_root(x: IsolatingInterval, y: IsolatingInterval) -> bool:
    """Whether two open isolating intervals enclose the same number."""
    lo = max(x.lower, y.lower)
    hi = min(x.upper, y.upper)
    if not lo < hi:
        return False
    if x.witness == y.witness:
        return True
    g = poly_gcd(x.witness, y.witness)
    if g.degree <= 0:
        return False
    return sturm_count(g, lo, hi) > 0


def compare(x, y) -> int:
    """Exact ``sign(x - y)`` for rationals and isolating intervals."""
    x, y = as_real(x), as_real(y)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return (x > y) - (x < y)
    if isinstance(x, Fraction):
        return -_cmp_interval_rational(y, x)
    if isinstance(y, Fraction):
        return _cmp_interval_rational(x, y)
    if x.upper <= y.lower:
        return -1
    if y.upper <= x.lower:
        return 1
    if same_root(x, y):
        return 0
    while True:
        if x.upper <= y.lower:
            return -1
        if y.upper <= x.lower:
            return 1
        if x.width >= y.width:
            x = x.bisect()
            if x.kind == "point":
                return -_cmp_interval_rational(y, x.lower)
        else:
            y = y.bisect()
            if y.kind == "point":
                return _cmp_interval_rational(x, y.lower)


def is_root_of(x: Real, a: IntPoly) -> bool:
    """Whether the number ``x`` is a root of ``a``."""
    if a.is_zero():
        return True
    x = as_real(x)
    if isinstance(x, Fraction):
        return eval_sign(a, x) == 0
    if x.witness == a:
        return True
    g = poly_gcd(x.witness, a)
    return g.degree > 0 and sturm_count(g, x.lower, x.upper) == 1


def separate(x: Real, y: Real) -> tuple[Real, Real]:
    """Refine ``x < y`` until ``upper(x) < lower(y)``; caller guarantees ``x < y``."""
    while True:
        if bounds(x)[1] < bounds(y)[0]:
            return x, y
        wx = bounds(x)[1] - bounds(x)[0]
        wy = bounds(y)[1] - bounds(y)[0]
        if wx >= wy:
            x = as_real(x.bisect())
        else:
            y = as_real(y.bisect())


def rational_between(x: Real, y: Real) -> Fraction:
    """A dyadic rational strictly between ``x < y``."""
    x, y = separate(as_real(x), as_real(y))
    return simplest_dyadic(bounds(x)[1], bounds(y)[0])


def refine(x: Real, width) -> Real:
    if isinstance(x, IsolatingInterval):
        return x.refined(width)
    return x


def to_float(x: Real) -> float:
    """Nearest-double approximation; open intervals are refined first."""
    if isinstance(x, IsolatingInterval) and x.kind == "open":
        scale = max(1, abs(x.lower), abs(x.upper))
        x = x.refined(Fraction(scale) / (1 << 56))
    lo, hi = bounds(as_real(x))
    return float((lo + hi) / 2)


# ---------------------------------------------------------------------------
# rational interval arithmetic


def i_add(a: Interval, b: Interval) -> Interval:
    return a[0] + b[0], a[1] + b[1]


def i_mul(a: Interval, b: Interval) -> Interval:
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(ps), max(ps)


def i_div(a: Interval, b: Interval) -> Interval | None:
    """``a / b``, or ``None`` when ``b`` contains zero."""
    if b[0] <= 0 <= b[1]:
        return None
    return i_mul(a, (1 / b[1], 1 / b[0]))


def i_contains(a: Interval, v) -> bool:
    return a[0] <= v <= a[1]


def poly_enclosure(coeffs: Sequence[int], x: Interval) -> Interval:
    """Horner enclosure of a polynomial over the interval ``x``."""
    if not coeffs:
        return Fraction(0), Fraction(0)
    if x[0] == x[1]:
        v = IntPoly(coeffs)(x[0])
        return v, v
    acc = (Fraction(coeffs[-1]), Fraction(coeffs[-1]))
    for c in reversed(coeffs[:-1]):
        acc = i_mul(acc, x)
        acc = (acc[0] + c, acc[1] + c)
    return acc


def rational_map_enclosure(p: Sequence[int], q: Sequence[int], x: Interval) -> Interval | None:
    """Enclosure of ``p/q`` over ``x``; ``None`` if ``q`` may vanish there."""
    return i_div(poly_enclosure(p, x), poly_enclosure(q, x))
