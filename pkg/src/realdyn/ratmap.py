"""Real rational self-maps of the projective line.

A map ``f = p/q`` is stored as a coprime pair of integer polynomials.  Points
of the real projective line are ``Fraction`` values or :data:`INF`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Union

from . import algebraic as alg
from .config import DEFAULT_CONFIG, BudgetError, RunConfig
from .exactpoly import (
    IntPoly,
    IsolatingInterval,
    eval_sign,
    format_poly,
    hom_compose,
    isolate_real_roots,
    parse_rational_coeffs,
    poly_gcd,
    squarefree_decomposition,
    squarefree_part,
    sturm_count,
)
from .realroots import certify_fixed_points_real

log = logging.getLogger(__name__)

# Fixed-point polynomials up to this degree go straight to Sturm chains.
_STURM_DIRECT_DEGREE = 16


class _Infinity:
    __slots__ = ()

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return "INF"


INF = _Infinity()
ProjPoint = Union[Fraction, _Infinity]


def _modular_coprime(a: IntPoly, b: IntPoly, prime: int = (1 << 61) - 1) -> bool:
    """True proves ``gcd(a, b) = 1``; False is inconclusive."""
    if a.lead % prime == 0:
        return False

    def red(c):
        out = [x % prime for x in c]
        while out and out[-1] == 0:
            out.pop()
        return out

    u, v = red(a.coeffs), red(b.coeffs)
    if not v:
        return False
    while v:
        if len(v) == 1:
            return True
        inv = pow(v[-1], -1, prime)
        while len(u) >= len(v):
            c = u[-1] * inv % prime
            shift = len(u) - len(v)
            for i in range(len(v) - 1):
                u[shift + i] = (u[shift + i] - c * v[i]) % prime
            u.pop()
            while u and u[-1] == 0:
                u.pop()
        u, v = v, u
    return len(u) == 1


@dataclass(frozen=True)
class RationalMap:
    """``f = p/q`` with ``gcd(p, q) = 1`` and a sign normalisation.

    Build instances with :func:`ratmap_new` (or ``RationalMap.new``); the
    constructor trusts its arguments.
    """

    p: IntPoly
    q: IntPoly

    @classmethod
    def new(cls, p, q=None) -> "RationalMap":
        return ratmap_new(p, q)

    @cached_property
    def degree(self) -> int:
        return max(self.p.degree, self.q.degree, 0)

    @property
    def is_polynomial(self) -> bool:
        return self.q.degree == 0

    def homogeneous(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Coefficients of ``X**i * Y**(d-i)`` in the homogenised pair."""
        d = self.degree
        pad = lambda c: tuple(c) + (0,) * (d + 1 - len(c))
        return pad(self.p.coeffs), pad(self.q.coeffs)

    def __call__(self, x):
        return eval_map(self, x)

    def __str__(self) -> str:
        return format_map(self)


def _normalise(p: IntPoly, q: IntPoly, *, trusted_coprime: bool = False) -> RationalMap:
    if p.is_zero() and q.is_zero():
        raise ValueError("undefined map: p and q are both zero")
    if q.is_zero():
        return RationalMap(IntPoly([1]), IntPoly())
    if p.is_zero():
        return RationalMap(IntPoly(), IntPoly([1]))
    if not trusted_coprime and p.degree > 0 and q.degree > 0:
        if not _modular_coprime(p, q) and not _modular_coprime(q, p):
            g = poly_gcd(p, q)
            if g.degree > 0:
                p, q = p.exact_div(g), q.exact_div(g)
    c = math.gcd(p.content(), q.content())
    if q.lead < 0:
        c = -c
    if c != 1:
        p = IntPoly(x // c for x in p.coeffs)
        q = IntPoly(x // c for x in q.coeffs)
    return RationalMap(p, q)


def ratmap_new(p, q=None) -> RationalMap:
    """Normalised map ``p/q``; accepts IntPoly or coefficient lists (may be Fractions)."""
    p = _as_poly_pair(p, q)
    return _normalise(*p)


def _as_poly_pair(p, q):
    if q is None:
        q = [1]
    pp = [Fraction(c) for c in (p.coeffs if isinstance(p, IntPoly) else p)]
    qq = [Fraction(c) for c in (q.coeffs if isinstance(q, IntPoly) else q)]
    lcm = 1
    for c in pp + qq:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return IntPoly(int(c * lcm) for c in pp), IntPoly(int(c * lcm) for c in qq)


def parse_map(text: str) -> RationalMap:
    """Parse ``"p"`` or ``"p | q"`` in the coefficient text format."""
    if text is None or not text.strip():
        raise ValueError("empty map")
    parts = text.split("|")
    if len(parts) > 2:
        raise ValueError("map text has more than one '|'")
    p = parse_rational_coeffs(parts[0])
    q = parse_rational_coeffs(parts[1]) if len(parts) == 2 else [Fraction(1)]
    return ratmap_new(p, q)


def format_map(f: RationalMap) -> str:
    if f.q == IntPoly([1]):
        return format_poly(f.p)
    return f"{format_poly(f.p)} | {format_poly(f.q)}"


# ---------------------------------------------------------------------------
# evaluation and iteration


def eval_map(f: RationalMap, x: ProjPoint) -> ProjPoint:
    if x is INF:
        if f.q.is_zero():
            return INF
        if f.p.degree > f.q.degree:
            return INF
        if f.p.degree == f.q.degree:
            return Fraction(f.p.lead, f.q.lead)
        return Fraction(0)
    x = Fraction(x)
    qv = f.q(x)
    if qv == 0:
        return INF
    return f.p(x) / qv


@lru_cache(maxsize=512)
def _iterate_step(f: RationalMap, k: int) -> RationalMap:
    if k == 1:
        return f
    prev = _iterate_step(f, k - 1)
    hp, hq = f.homogeneous()
    d = f.degree
    P = hom_compose(hp, prev.p, prev.q, d)
    Q = hom_compose(hq, prev.p, prev.q, d)
    # the homogeneous composite of coprime pairs is coprime; only content is left
    return _normalise(P, Q, trusted_coprime=True)


def iterate(f: RationalMap, k: int, config: RunConfig = DEFAULT_CONFIG) -> RationalMap:
    """``f**k`` under composition, normalised, within the configured budget."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if f.degree >= 2:
        config.check_degree(f.degree**k)
    for j in range(1, k + 1):
        g = _iterate_step(f, j)
        config.check_bits(max(g.p.max_bits(), g.q.max_bits()))
    return g


def derivative(f: RationalMap) -> RationalMap:
    p, q = f.p, f.q
    return _normalise(p.derivative() * q - p * q.derivative(), q * q)


def conjugate(f: RationalMap, a, b, c, e) -> RationalMap:
    """``phi o f o phi^-1`` for ``phi(z) = (a z + b)/(c z + e)``."""
    a, b, c, e = (Fraction(v) for v in (a, b, c, e))
    if a * e - b * c == 0:
        raise ValueError("singular Moebius transformation")
    den = math.lcm(a.denominator, b.denominator, c.denominator, e.denominator)
    a, b, c, e = (int(v * den) for v in (a, b, c, e))
    d = f.degree
    hp, hq = f.homogeneous()
    n1, d1 = IntPoly([-b, e]), IntPoly([a, -c])
    P = hom_compose(hp, n1, d1, d)
    Q = hom_compose(hq, n1, d1, d)
    return _normalise(P * a + Q * b, P * c + Q * e)


def moebius_apply(a, b, c, e, x: ProjPoint) -> ProjPoint:
    a, b, c, e = (Fraction(v) for v in (a, b, c, e))
    if x is INF:
        return INF if c == 0 else a / c
    den = c * x + e
    if den == 0:
        return INF
    return (a * x + b) / den


# ---------------------------------------------------------------------------
# fixed points


_SQUAREFREE_KNOWN: dict[IntPoly, bool] = {}


def _remember_squarefree(F: IntPoly, flag: bool) -> None:
    if len(_SQUAREFREE_KNOWN) > 2048:
        _SQUAREFREE_KNOWN.clear()
    _SQUAREFREE_KNOWN[F] = flag


def is_squarefree(F: IntPoly) -> bool:
    flag = _SQUAREFREE_KNOWN.get(F)
    if flag is None:
        flag = poly_gcd(F, F.derivative()).degree <= 0
        _remember_squarefree(F, flag)
    return flag


@dataclass(frozen=True)
class FixedPointData:
    """Fixed points of ``f**k`` on the real projective line."""

    k: int
    F: IntPoly
    infinity_multiplicity: int
    all_real: bool
    certified_intervals: tuple[IsolatingInterval, ...] | None = field(default=None, repr=False)
    total_degree: int = 0

    @cached_property
    def roots(self) -> list[IsolatingInterval]:
        """Isolating intervals of the distinct finite real fixed points."""
        if self.certified_intervals is not None:
            return list(self.certified_intervals)
        return isolate_real_roots(self.F)

    @cached_property
    def real_count(self) -> int:
        """Finite real fixed points counted with multiplicity."""
        if self.certified_intervals is not None:
            return len(self.certified_intervals)
        return sum(m * sturm_count(a) for a, m in squarefree_decomposition(self.F))


def raw_fixed_point_poly(g: RationalMap) -> IntPoly:
    """``P - z*Q`` for ``g = P/Q`` without content removal."""
    return g.p - g.q.shift(1)


@lru_cache(maxsize=512)
def _fixed_point_data(f: RationalMap, k: int, max_sturm_degree: int) -> FixedPointData:
    g = _iterate_step(f, k)
    F = raw_fixed_point_poly(g)
    if F.is_zero():
        raise ValueError("map is the identity")
    F = F.primitive()
    total = f.degree**k + 1
    inf_mult = total - max(F.degree, 0)
    if F.degree <= 0:
        return FixedPointData(k, F, inf_mult, True, (), total)
    if F.degree > _STURM_DIRECT_DEGREE:
        hp, hq = f.homogeneous()
        ivs = certify_fixed_points_real(hp, hq, k, F)
        if ivs is not None:
            _remember_squarefree(F, True)
            return FixedPointData(k, F, inf_mult, True, tuple(ivs), total)
        if F.degree > max_sturm_degree:
            raise BudgetError(
                f"realness of degree-{F.degree} fixed-point polynomial not certified numerically "
                f"and exact fallback exceeds max_sturm_degree={max_sturm_degree}"
            )
    s = squarefree_part(F)
    all_real = sturm_count(s) == s.degree
    _remember_squarefree(F, s.degree == F.degree)
    return FixedPointData(k, F, inf_mult, all_real, None, total)


def fixed_point_data(f: RationalMap, k: int, config: RunConfig = DEFAULT_CONFIG) -> FixedPointData:
    if f.degree < 2:
        raise ValueError("fixed point data needs a map of degree >= 2")
    iterate(f, k, config)
    return _fixed_point_data(f, k, config.max_sturm_degree)


# ---------------------------------------------------------------------------
# multipliers


@dataclass(frozen=True)
class MultiplierClass:
    verdict: str  # attracting | repelling | indifferent_plus | indifferent_minus
    lambda_bounds: tuple[Fraction, Fraction] | None

    @property
    def nonrepelling(self) -> bool:
        return self.verdict != "repelling"

    @property
    def nonattracting(self) -> bool:
        return self.verdict != "attracting"

    @property
    def indifferent(self) -> bool:
        return self.verdict.startswith("indifferent")


def _class_from_exact(lam: Fraction) -> MultiplierClass:
    if lam == 1:
        return MultiplierClass("indifferent_plus", (lam, lam))
    if lam == -1:
        return MultiplierClass("indifferent_minus", (lam, lam))
    return MultiplierClass("attracting" if abs(lam) < 1 else "repelling", (lam, lam))


def multiplier_at_infinity(f: RationalMap, k: int = 1, config: RunConfig = DEFAULT_CONFIG) -> MultiplierClass:
    g = iterate(f, k, config)
    dp, dq = g.p.degree, g.q.degree
    if g.q.is_zero() or dp <= dq:
        raise ValueError("infinity is not a fixed point")
    if dp >= dq + 2:
        return MultiplierClass("attracting", (Fraction(0), Fraction(0)))
    return _class_from_exact(Fraction(g.q.lead, g.p.lead))


def _root_on_witness(iv: IsolatingInterval, F: IntPoly) -> bool:
    return alg.is_root_of(iv, F)


def _chain_enclosure(f: RationalMap, iv: IsolatingInterval, k: int):
    """Enclosure of ``(f**k)'`` at the root via the chain rule along the orbit."""
    p, q = f.p.coeffs, f.q.coeffs
    dp = f.p.derivative() * f.q - f.p * f.q.derivative()
    q2 = (f.q * f.q).coeffs
    x = (iv.lower, iv.upper)
    lam = (Fraction(1), Fraction(1))
    for step in range(k):
        dv = alg.i_div(alg.poly_enclosure(dp.coeffs, x), alg.poly_enclosure(q2, x))
        if dv is None:
            return None
        lam = alg.i_mul(lam, dv)
        if step < k - 1:
            x = alg.rational_map_enclosure(p, q, x)
            if x is None:
                return None
    return lam


def _expanded_enclosure(g: RationalMap, iv: IsolatingInterval):
    """``(P' - z Q')/Q`` at a fixed point of ``g = P/Q``."""
    num = g.p.derivative() - g.q.derivative().shift(1)
    x = (iv.lower, iv.upper)
    return alg.i_div(alg.poly_enclosure(num.coeffs, x), alg.poly_enclosure(g.q.coeffs, x))


def classify_multiplier(
    f: RationalMap, cycle_root: IsolatingInterval, k: int = 1, config: RunConfig = DEFAULT_CONFIG
) -> MultiplierClass:
    """Attracting / repelling / indifferent verdict for ``(f**k)'`` at a real fixed point of ``f**k``."""
    if f.degree < 2:
        raise ValueError("multiplier classification needs degree >= 2")
    if cycle_root.kind == "infinity":
        return multiplier_at_infinity(f, k, config)
    data = fixed_point_data(f, k, config)
    F = data.F
    if not _root_on_witness(cycle_root, F):
        raise ValueError("interval does not isolate a fixed point of f**k")
    g = iterate(f, k, config)
    # lambda = 1 exactly when the fixed point is a multiple root of F
    if not is_squarefree(F):
        if cycle_root.kind == "point":
            double = eval_sign(F.derivative(), cycle_root.lower) == 0
        else:
            double = _root_on_witness(cycle_root, poly_gcd(F, F.derivative()))
        if double:
            return MultiplierClass("indifferent_plus", (Fraction(1), Fraction(1)))
    if cycle_root.kind == "point":
        x = cycle_root.lower
        lam = (g.p.derivative()(x) - x * g.q.derivative()(x)) / g.q(x)
        return _class_from_exact(lam)
    # start narrow enough that the reported enclosure is informative
    iv = cycle_root.refined(Fraction(1, 1024))
    if iv.kind == "point":
        return classify_multiplier(f, iv, k, config)
    minus_checked = False
    use_chain = True
    for step in range(config.refine_depth + 1):
        enc = _chain_enclosure(f, iv, k) if use_chain else None
        if enc is None:
            enc = _expanded_enclosure(g, iv)
        if enc is not None:
            lo, hi = enc
            if hi < -1 or lo > 1:
                return MultiplierClass("repelling", enc)
            if -1 < lo and hi < 1:
                return MultiplierClass("attracting", enc)
            if lo <= -1 <= hi and not minus_checked and step >= 4:
                minus_checked = True
                G = g.p.derivative() - g.q.derivative().shift(1) + g.q
                if not G.is_zero() and _root_on_witness(iv, G):
                    return MultiplierClass("indifferent_minus", (Fraction(-1), Fraction(-1)))
        if step > 8 and use_chain and enc is None:
            use_chain = False
        iv = iv.bisect()
        if iv.kind == "point":
            return classify_multiplier(f, iv, k, config)
    raise BudgetError(f"multiplier not separated from +-1 within refine_depth={config.refine_depth}")


def real_fixed_points(f: RationalMap, k: int = 1, config: RunConfig = DEFAULT_CONFIG) -> list[IsolatingInterval]:
    """Finite real fixed points of ``f**k`` followed by infinity when it is fixed."""
    data = fixed_point_data(f, k, config)
    out = list(data.roots)
    if data.infinity_multiplicity > 0:
        out.append(IsolatingInterval.infinity(data.infinity_multiplicity))
    return out
