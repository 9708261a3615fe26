"""Exact univariate integer polynomials with Sturm-based real root handling.

Coefficients are Python integers stored constant term first.  Rational
scalars are :class:`fractions.Fraction`.  Nothing in this module rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

try:
    import gmpy2

    _mpz = gmpy2.mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    gmpy2 = None
    _mpz = int

__all__ = [
    "IntPoly",
    "IsolatingInterval",
    "NotSquarefreeError",
    "poly_gcd",
    "squarefree_part",
    "squarefree_decomposition",
    "sturm_sequence",
    "sturm_count",
    "isolate_real_roots",
    "refine_interval",
    "eval_sign",
    "poly_compose",
    "root_bound",
    "parse_poly",
    "format_poly",
]

# Below this many coefficients schoolbook products beat Kronecker packing.
_KRONECKER_MIN = 24


class NotSquarefreeError(ValueError):
    pass


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = [int(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class IntPoly:
    """Dense integer polynomial, ``coeffs[i]`` multiplies ``z**i``.

    The zero polynomial has ``degree == -1``.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int] = ()):
        self.coeffs = _trim(coeffs)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple[int, ...]) -> "IntPoly":
        obj = cls.__new__(cls)
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, n: int, c: int = 1) -> "IntPoly":
        return cls([0] * n + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[Fraction], lead: int = 1) -> "IntPoly":
        """Primitive-up-to-``lead`` product of ``(den*z - num)`` over ``roots``."""
        out = cls([lead])
        for r in roots:
            r = Fraction(r)
            out = out * cls([-r.numerator, r.denominator])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim([other])
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self) -> str:
        return format_poly(self)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # -- ring operations -------------------------------------------------

    def __neg__(self) -> "IntPoly":
        return IntPoly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other) -> "IntPoly":
        if isinstance(other, int):
            other = IntPoly([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "IntPoly":
        if isinstance(other, int):
            other = IntPoly([other])
        return self + (-other)

    def __rsub__(self, other) -> "IntPoly":
        return (-self) + other

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            if other == 0:
                return IntPoly()
            return IntPoly._raw(tuple(c * other for c in self.coeffs))
        if not isinstance(other, IntPoly):
            return NotImplemented
        return IntPoly._raw(_mul_coeffs(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPoly":
        result = IntPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, n: int) -> "IntPoly":
        """Multiply by ``z**n``."""
        if not self.coeffs:
            return self
        return IntPoly._raw((0,) * n + self.coeffs)

    def derivative(self) -> "IntPoly":
        return IntPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> "IntPoly":
        """Divide out the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.coeffs[-1] < 0:
            g = -g
        if g == 1:
            return self
        return IntPoly._raw(tuple(c // g for c in self.coeffs))

    def reversed(self) -> "IntPoly":
        """``z**deg * self(1/z)``."""
        return IntPoly(self.coeffs[::-1])

    def scale_arg(self, num: int, den: int = 1) -> "IntPoly":
        """Coefficients of ``den**deg * self(num/den * z)``."""
        n = self.degree
        out = []
        pn, pd = 1, den**n if n > 0 else 1
        for c in self.coeffs:
            out.append(c * pn * pd)
            pn *= num
            if den != 1 and pd:
                pd //= den
        return IntPoly(out)

    def taylor_shift(self, t: Fraction) -> "IntPoly":
        """Integer coefficients proportional to ``self(z + t)``."""
        t = Fraction(t)
        return poly_compose(self, IntPoly([t.numerator, t.denominator]), IntPoly([t.denominator]))[0]

    def max_bits(self) -> int:
        return max((abs(c).bit_length() for c in self.coeffs), default=0)

    # -- evaluation ------------------------------------------------------

    def __call__(self, x):
        x = Fraction(x)
        n, d = x.numerator, x.denominator
        return Fraction(_hom_eval(self.coeffs, n, d), d ** max(self.degree, 0))

    def sign_at(self, x) -> int:
        return eval_sign(self, x)

    def sign_at_inf(self, direction: int = 1) -> int:
        """Sign of ``self(t)`` as ``t -> direction * oo``."""
        if not self.coeffs:
            return 0
        s = _sign(self.coeffs[-1])
        if direction < 0 and self.degree % 2:
            s = -s
        return s

    # -- division --------------------------------------------------------

    def pseudo_rem(self, other: "IntPoly") -> "IntPoly":
        return _prem(self, other)

    def exact_div(self, other: "IntPoly") -> "IntPoly":
        """Quotient of an exact division over the integers; raises otherwise."""
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        lb = other.coeffs[-1]
        bc = other.coeffs
        if len(r) - 1 < db:
            if r:
                raise ArithmeticError("inexact polynomial division")
            return IntPoly()
        q = [0] * (len(r) - db)
        for step in range(len(r) - 1 - db, -1, -1):
            top = r[db + step]
            if top:
                qc, rem = divmod(top, lb)
                if rem:
                    raise ArithmeticError("inexact polynomial division")
                q[step] = qc
                for i, c in enumerate(bc):
                    r[step + i] -= qc * c
        if any(r[:db]):
            raise ArithmeticError("inexact polynomial division")
        return IntPoly(q)

    def divides(self, other: "IntPoly") -> bool:
        """Whether ``self`` divides ``other`` in Q[z]."""
        return not _prem(other, self).coeffs


# ---------------------------------------------------------------------------
# multiplication


def _mul_school(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _pack(coeffs: Sequence[int], nbytes: int) -> int:
    pos = bytearray()
    neg = bytearray()
    zero = bytes(nbytes)
    any_neg = False
    for c in coeffs:
        if c >= 0:
            pos += c.to_bytes(nbytes, "little")
            neg += zero
        else:
            pos += zero
            neg += (-c).to_bytes(nbytes, "little")
            any_neg = True
    value = int.from_bytes(pos, "little")
    if any_neg:
        value -= int.from_bytes(neg, "little")
    return value


def _mul_coeffs(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    if min(len(a), len(b)) < _KRONECKER_MIN:
        return _trim(_mul_school(a, b))
    # Kronecker substitution: evaluate at 2**(8*nbytes), multiply, unpack.
    ma = max(abs(c) for c in a)
    mb = max(abs(c) for c in b)
    bound_bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 1
    nbytes = bound_bits // 8 + 1
    va = _mpz(_pack(a, nbytes))
    vb = _mpz(_pack(b, nbytes))
    prod = int(va * vb)
    n = len(a) + len(b) - 1
    half = 1 << (8 * nbytes - 1)
    # adding half to every slot makes each digit nonnegative, so no borrows
    offset = int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * n, "little")
    raw = (prod + offset).to_bytes(nbytes * n, "little")
    out = [
        int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - half for i in range(n)
    ]
    return _trim(out)


# ---------------------------------------------------------------------------
# evaluation


def _hom_eval(coeffs: Sequence[int], n: int, d: int) -> int:
    """``d**deg * p(n/d)`` as an integer."""
    if not coeffs:
        return 0
    if d == 1:
        acc = 0
        for c in reversed(coeffs):
            acc = acc * n + c
        return acc
    if d & (d - 1) == 0:
        e = d.bit_length() - 1
        acc = 0
        shift = 0
        for c in reversed(coeffs):
            acc = acc * n + (c << shift)
            shift += e
        return acc
    acc = 0
    dp = 1
    for c in reversed(coeffs):
        acc = acc * n + c * dp
        dp *= d
    return acc


def eval_sign(a: IntPoly, x) -> int:
    """Exact sign of ``a(x)`` for rational ``x``."""
    x = Fraction(x)
    return _sign(_hom_eval(a.coeffs, x.numerator, x.denominator))


def _sign_ext(a: IntPoly, x) -> int:
    """Sign of ``a`` at a rational or at ``+-inf`` (given as a float)."""
    if isinstance(x, float):
        return a.sign_at_inf(1 if x > 0 else -1)
    return eval_sign(a, x)


# ---------------------------------------------------------------------------
# gcd and square-free parts


def _prem(a: IntPoly, b: IntPoly) -> IntPoly:
    """Pseudo-remainder of ``|lc(b)|**(deg a - deg b + 1) * a`` by ``b``.

    Using ``|lc(b)|`` keeps the result a positive multiple of the true
    remainder, which Sturm chains rely on.
    """
    if not b.coeffs:
        raise ZeroDivisionError("polynomial division by zero")
    db = b.degree
    da = a.degree
    if da < db:
        return a
    bc = b.coeffs if b.coeffs[-1] > 0 else tuple(-c for c in b.coeffs)
    lb = bc[-1]
    r = list(a.coeffs)
    for j in range(da, db - 1, -1):
        top = r[j]
        shift = j - db
        if lb != 1:
            for i in range(j):
                r[i] *= lb
        if top:
            for i in range(db):
                r[shift + i] -= top * bc[i]
        r[j] = 0
    return IntPoly(r[:db])


def _gcd_nonzero(a: IntPoly, b: IntPoly) -> IntPoly:
    a, b = a.primitive(), b.primitive()
    if a.degree < b.degree:
        a, b = b, a
    while b.coeffs:
        if b.degree == 0:
            return IntPoly([1])
        r = _prem(a, b)
        a, b = b, r.primitive()
    return a.primitive()


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Primitive gcd with positive leading coefficient."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of zero polynomials")
    if a.is_zero():
        return b.primitive()
    if b.is_zero():
        return a.primitive()
    return _gcd_nonzero(a, b)


def squarefree_part(a: IntPoly) -> IntPoly:
    if a.is_zero():
        raise ValueError("square-free part of the zero polynomial")
    if a.degree <= 0:
        return IntPoly([1])
    g = poly_gcd(a, a.derivative())
    return a.primitive().exact_div(g).primitive() if g.degree > 0 else a.primitive()


@lru_cache(maxsize=4096)
def squarefree_decomposition(a: IntPoly) -> tuple[tuple[IntPoly, int], ...]:
    """Yun's algorithm: pairs ``(a_i, i)`` with ``a ~ prod a_i**i``, ``a_i`` square-free, coprime."""
    if a.is_zero():
        raise ValueError("square-free decomposition of the zero polynomial")
    a = a.primitive()
    if a.degree <= 0:
        return ()
    da = a.derivative()
    g = poly_gcd(a, da)
    b = a.exact_div(g).primitive()
    c = da.exact_div(g) if g.degree > 0 else da
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        h = poly_gcd(b, d)
        if h.degree > 0:
            out.append((h, i))
        b_next = b.exact_div(h).primitive() if h.degree > 0 else b
        c = d.exact_div(h) if h.degree > 0 else d
        d = c - b_next.derivative()
        b = b_next
        i += 1
    return tuple(out)


# ---------------------------------------------------------------------------
# Sturm sequences


@lru_cache(maxsize=4096)
def sturm_sequence(a: IntPoly) -> tuple[IntPoly, ...]:
    """Primitive signed remainder sequence of a square-free polynomial.

    Every element is a positive multiple of the classical Sturm chain member.
    """
    if a.is_zero():
        raise ValueError("Sturm sequence of the zero polynomial")
    seq = [a, a.derivative().primitive() if a.degree > 0 else IntPoly()]
    if seq[1].is_zero():
        return (a,)
    while True:
        r = _prem(seq[-2], seq[-1])
        if r.is_zero():
            break
        # primitive() would flip the sign when lc < 0; divide by |content| only
        g = r.content()
        seq.append(IntPoly._raw(tuple(-(c // g) for c in r.coeffs)))
    if seq[-1].degree > 0:
        raise NotSquarefreeError("Sturm count needs a square-free polynomial")
    return tuple(seq)


def _variations(signs: Iterable[int]) -> int:
    v = 0
    last = 0
    for s in signs:
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


def _variations_at(seq: Sequence[IntPoly], x) -> int:
    if isinstance(x, float):
        return _variations(p.sign_at_inf(1 if x > 0 else -1) for p in seq)
    x = Fraction(x)
    n, d = x.numerator, x.denominator
    return _variations(_sign(_hom_eval(p.coeffs, n, d)) for p in seq)


def _real_root_total(a: IntPoly) -> int:
    """Distinct real roots of square-free ``a``; only leading terms are kept."""
    if a.degree <= 0:
        return 0
    prev, cur = a, a.derivative().primitive()
    at_pos = [prev.sign_at_inf(1)]
    at_neg = [prev.sign_at_inf(-1)]
    while True:
        at_pos.append(cur.sign_at_inf(1))
        at_neg.append(cur.sign_at_inf(-1))
        r = _prem(prev, cur)
        if r.is_zero():
            break
        g = r.content()
        prev, cur = cur, IntPoly._raw(tuple(-(c // g) for c in r.coeffs))
    if cur.degree > 0:
        raise NotSquarefreeError("Sturm count needs a square-free polynomial")
    return _variations(at_neg) - _variations(at_pos)


def sturm_count(a: IntPoly, lo=-math.inf, hi=math.inf) -> int:
    """Number of distinct real roots of square-free ``a`` in ``(lo, hi]``.

    ``lo`` and ``hi`` are rationals or ``+-math.inf``.
    """
    if a.is_zero():
        raise ValueError("Sturm count of the zero polynomial")
    lo = lo if isinstance(lo, float) else Fraction(lo)
    hi = hi if isinstance(hi, float) else Fraction(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    if lo == -math.inf and hi == math.inf:
        return _real_root_total(a)
    seq = sturm_sequence(a)
    return _variations_at(seq, lo) - _variations_at(seq, hi)


def root_bound(a: IntPoly) -> Fraction:
    """Power of two strictly larger than every |root| of ``a`` (Cauchy bound)."""
    if a.degree <= 0:
        return Fraction(1)
    lead = abs(a.lead)
    m = max(abs(c) for c in a.coeffs[:-1])
    # 1 + m/lead < 2**e
    bound = 1 + Fraction(m, lead)
    e = max(0, math.ceil(math.log2(bound.numerator) - math.log2(bound.denominator)) + 1)
    while Fraction(2) ** e <= bound:
        e += 1
    return Fraction(2) ** e


# ---------------------------------------------------------------------------
# isolating intervals


@dataclass(frozen=True)
class IsolatingInterval:
    """Certified enclosure of one real root of ``witness``.

    ``kind`` is ``"open"`` (root strictly inside), ``"point"`` (root equals
    ``lower == upper``) or ``"infinity"`` (the point at infinity).
    """

    lower: Fraction
    upper: Fraction
    kind: str
    witness: IntPoly | None
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")
        if self.kind == "open" and not self.lower < self.upper:
            raise ValueError("open isolating interval needs lower < upper")
        if self.kind == "point" and self.lower != self.upper:
            raise ValueError("point interval needs lower == upper")

    @classmethod
    def point(cls, x, witness: IntPoly | None = None, multiplicity: int = 1) -> "IsolatingInterval":
        x = Fraction(x)
        if witness is None:
            witness = IntPoly([-x.numerator, x.denominator])
        return cls(x, x, "point", witness, multiplicity)

    @classmethod
    def infinity(cls, multiplicity: int = 1) -> "IsolatingInterval":
        return cls(Fraction(0), Fraction(0), "infinity", None, multiplicity)

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinity"

    @property
    def is_exact(self) -> bool:
        return self.kind == "point"

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def __float__(self) -> float:
        if self.kind == "infinity":
            return math.inf
        return float(self.midpoint)

    def with_multiplicity(self, m: int) -> "IsolatingInterval":
        return IsolatingInterval(self.lower, self.upper, self.kind, self.witness, m)

    def bisect(self) -> "IsolatingInterval":
        """One bisection step."""
        if self.kind != "open":
            return self
        mid = self.midpoint
        w = self.witness
        sm = eval_sign(w, mid)
        if sm == 0:
            return IsolatingInterval(mid, mid, "point", w, self.multiplicity)
        if sm == eval_sign(w, self.lower):
            return IsolatingInterval(mid, self.upper, "open", w, self.multiplicity)
        return IsolatingInterval(self.lower, mid, "open", w, self.multiplicity)

    def refined(self, width_bound) -> "IsolatingInterval":
        return refine_interval(self, width_bound)

    def __repr__(self) -> str:
        if self.kind == "infinity":
            return f"IsolatingInterval(inf, mult={self.multiplicity})"
        if self.kind == "point":
            return f"IsolatingInterval({self.lower}, mult={self.multiplicity})"
        return f"IsolatingInterval(({self.lower}, {self.upper}), mult={self.multiplicity})"


def refine_interval(iv: IsolatingInterval, width_bound) -> IsolatingInterval:
    """Bisect until ``upper - lower <= width_bound``."""
    width_bound = Fraction(width_bound)
    if width_bound <= 0:
        raise ValueError("width bound must be positive")
    while iv.kind == "open" and iv.width > width_bound:
        iv = iv.bisect()
    return iv


def simplest_dyadic(lo: Fraction, hi: Fraction) -> Fraction:
    """Dyadic rational in the open interval (lo, hi) with least denominator, nearest zero."""
    if not lo < hi:
        raise ValueError("empty interval")
    k = 0
    while True:
        scale = 1 << k
        n = math.floor(lo * scale) + 1
        m = math.ceil(hi * scale) - 1
        if n <= m:
            if n <= 0 <= m:
                return Fraction(0)
            return Fraction(n if n > 0 else m, scale)
        k += 1


def _isolate_squarefree(s: IntPoly) -> list[IsolatingInterval]:
    if s.degree <= 0:
        return []
    total = sturm_count(s)
    if total == 0:
        return []
    R = root_bound(s)
    seq = sturm_sequence(s)
    out: list[IsolatingInterval] = []
    # (lo, hi, v_lo, v_hi) with s(lo), s(hi) nonzero
    stack = [(-R, R, _variations_at(seq, -R), _variations_at(seq, R))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        count = vlo - vhi
        if count == 0:
            continue
        if count == 1:
            # small dyadic roots (0, +-1, 1/2, ...) are common; report them exactly
            t = simplest_dyadic(lo, hi)
            if eval_sign(s, t) == 0:
                out.append(IsolatingInterval(t, t, "point", s))
            else:
                out.append(IsolatingInterval(lo, hi, "open", s))
            continue
        mid = (lo + hi) / 2
        if eval_sign(s, mid) == 0:
            out.append(IsolatingInterval(mid, mid, "point", s))
            eps = (hi - lo) / 4
            while True:
                a, b = mid - eps, mid + eps
                if eval_sign(s, a) and eval_sign(s, b) and _variations_at(seq, a) - _variations_at(seq, b) == 1:
                    break
                eps /= 2
            stack.append((b, hi, _variations_at(seq, b), vhi))
            stack.append((lo, a, vlo, _variations_at(seq, a)))
        else:
            vm = _variations_at(seq, mid)
            stack.append((mid, hi, vm, vhi))
            stack.append((lo, mid, vlo, vm))
    out.sort(key=lambda iv: iv.lower)
    return out


def isolate_real_roots(a: IntPoly) -> list[IsolatingInterval]:
    """Disjoint isolating intervals for the distinct real roots of ``a``, sorted.

    Each interval isolates a root of the square-free part and carries the
    root's multiplicity in ``a``.
    """
    if a.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    if a.degree <= 0:
        return []
    factors = squarefree_decomposition(a)
    s = squarefree_part(a)
    ivs = _isolate_squarefree(s)
    if len(factors) == 1 and factors[0][1] == 1:
        return ivs
    out = []
    for iv in ivs:
        mult = None
        for fac, m in factors:
            if iv.kind == "point":
                if eval_sign(fac, iv.lower) == 0:
                    mult = m
                    break
            elif eval_sign(fac, iv.lower) * eval_sign(fac, iv.upper) < 0:
                mult = m
                break
        assert mult is not None
        out.append(iv.with_multiplicity(mult))
    return out


# ---------------------------------------------------------------------------
# composition


def hom_compose(coeffs: Sequence[int], num: IntPoly, den: IntPoly, n: int) -> IntPoly:
    """``sum coeffs[i] * num**i * den**(n-i)`` for ``n >= len(coeffs)-1``."""
    num_pows = [IntPoly([1])]
    for _ in range(len(coeffs) - 1):
        num_pows.append(num_pows[-1] * num)
    den_pows = [IntPoly([1])]
    for _ in range(n):
        den_pows.append(den_pows[-1] * den)
    acc = IntPoly()
    for i, c in enumerate(coeffs):
        if c:
            acc = acc + (num_pows[i] * den_pows[n - i]) * c
    return acc


def poly_compose(outer: IntPoly, inner_num: IntPoly, inner_den: IntPoly) -> tuple[IntPoly, IntPoly]:
    """Cleared numerator and denominator of ``outer(inner_num / inner_den)``."""
    if inner_den.is_zero():
        raise ZeroDivisionError("inner denominator is zero")
    n = max(outer.degree, 0)
    num = hom_compose(outer.coeffs, inner_num, inner_den, n)
    den = inner_den**n
    g = math.gcd(num.content(), den.content())
    if g > 1:
        num = IntPoly._raw(tuple(c // g for c in num.coeffs))
        den = IntPoly._raw(tuple(c // g for c in den.coeffs))
    if den.lead < 0:
        num, den = -num, -den
    return num, den


# ---------------------------------------------------------------------------
# text format


def _parse_scalar(tok: str) -> Fraction:
    tok = tok.strip().replace("−", "-")
    if not tok:
        raise ValueError("empty coefficient")
    if "/" in tok:
        n, d = tok.split("/", 1)
        n, d = int(n), int(d)
        if d == 0:
            raise ValueError("zero denominator in coefficient")
        return Fraction(n, d)
    return Fraction(int(tok))


def parse_rational_coeffs(text: str) -> list[Fraction]:
    if text is None or not text.strip():
        raise ValueError("empty polynomial")
    return [_parse_scalar(t) for t in text.split(",")]


def parse_poly(text: str) -> IntPoly:
    """Parse ``"c0,c1,..."`` (integers or ``a/b``); denominators are cleared."""
    coeffs = parse_rational_coeffs(text)
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return IntPoly([int(c * lcm) for c in coeffs])


def format_poly(a: IntPoly) -> str:
    return ",".join(str(c) for c in a.coeffs) if a.coeffs else "0"
