"""Closed arcs on the real projective line and exact preimages.

Points of the circle are ``Fraction`` values, :class:`IsolatingInterval`
algebraic numbers or :data:`~realdyn.ratmap.INF`.  An arc ``(lo, hi)`` runs
upward from ``lo`` to ``hi``; when ``lo > hi`` it passes through infinity.
For ordering, infinity sits below every real number, so ``(x, INF)`` is the
ray ``[x, +inf]`` and ``(INF, x)`` is ``[-inf, x]``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence, Union

from . import algebraic as alg
from .config import DEFAULT_CONFIG, BudgetError, RunConfig
from .exactpoly import (
    IntPoly,
    IsolatingInterval,
    format_poly,
    isolate_real_roots,
    parse_poly,
    poly_compose,
    squarefree_part,
    sturm_count,
)
from .ratmap import INF, MultiplierClass, RationalMap, classify_multiplier, eval_map, real_fixed_points

Point = Union[Fraction, IsolatingInterval, type(INF)]
Arc = tuple  # (Point, Point)

_OUTPUT_WIDTH = Fraction(1, 1 << 20)


def _pt(x) -> Point:
    if x is INF:
        return INF
    if isinstance(x, IsolatingInterval):
        if x.kind == "infinity":
            return INF
        return alg.as_real(x)
    return Fraction(x)


def cmp_line(x: Point, y: Point) -> int:
    """Linear order with infinity below every real number."""
    if x is INF:
        return 0 if y is INF else -1
    if y is INF:
        return 1
    return alg.compare(x, y)


def _cmp_from(start: Point, x: Point, y: Point) -> int:
    """Compare ``x`` and ``y`` by distance travelled upward from ``start``."""
    bx = 0 if cmp_line(x, start) >= 0 else 1
    by = 0 if cmp_line(y, start) >= 0 else 1
    if bx != by:
        return -1 if bx < by else 1
    return cmp_line(x, y)


def arc_contains(arc: Arc, x: Point) -> bool:
    lo, hi = arc
    return _cmp_from(lo, x, hi) <= 0


def arc_within(a: Arc, b: Arc) -> bool:
    """Whether arc ``a`` lies inside arc ``b`` (neither is the full circle)."""
    lo = b[0]
    return _cmp_from(lo, a[0], a[1]) <= 0 and _cmp_from(lo, a[1], b[1]) <= 0


@dataclass(frozen=True, eq=False)
class CircleSet:
    """Finite union of closed arcs of the circle ``R u {inf}``.

    Build with :func:`circleset_normalize`; ``arcs`` are then pairwise
    disjoint, non-touching and ordered by their starting point.
    """

    arcs: tuple[Arc, ...] = ()
    full: bool = False

    @classmethod
    def full_circle(cls) -> "CircleSet":
        return cls((), True)

    @classmethod
    def interval(cls, lo, hi) -> "CircleSet":
        return circleset_normalize([(lo, hi)])

    @property
    def is_empty(self) -> bool:
        return not self.full and not self.arcs

    def contains(self, x) -> bool:
        x = _pt(x)
        return self.full or any(arc_contains(a, x) for a in self.arcs)

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def issubset(self, other: "CircleSet") -> bool:
        if other.full:
            return True
        if self.full:
            return False
        return all(any(arc_within(a, b) for b in other.arcs) for a in self.arcs)

    def union(self, other: "CircleSet") -> "CircleSet":
        if self.full or other.full:
            return CircleSet.full_circle()
        return circleset_normalize(list(self.arcs) + list(other.arcs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CircleSet):
            return NotImplemented
        if self.full or other.full:
            return self.full == other.full
        if len(self.arcs) != len(other.arcs):
            return False
        return all(
            cmp_line(a[0], b[0]) == 0 and cmp_line(a[1], b[1]) == 0 for a, b in zip(self.arcs, other.arcs)
        )

    __hash__ = None

    def endpoints(self) -> list[Point]:
        return [e for a in self.arcs for e in a]

    def to_json(self) -> list:
        if self.full:
            return [["-inf", "+inf"]]
        out = []
        for lo, hi in self.arcs:
            if lo is INF and hi is INF:
                out.append(["inf", "inf"])
            else:
                out.append([_endpoint_json(lo, "-inf"), _endpoint_json(hi, "+inf")])
        return out

    @classmethod
    def from_json(cls, data) -> "CircleSet":
        if isinstance(data, str):
            data = json.loads(data)
        arcs = []
        for item in data:
            if len(item) != 2:
                raise ValueError("arc must have two endpoints")
            labels = [_inf_label(e) for e in item]
            if labels[0] == "-inf" and labels[1] in ("+inf", "inf"):
                return cls.full_circle()
            arcs.append(tuple(_endpoint_from_json(e) for e in item))
        return circleset_normalize(arcs)

    def __repr__(self) -> str:
        return f"CircleSet({json.dumps(self.to_json())})"


def _endpoint_json(x: Point, inf_label: str):
    if x is INF:
        return inf_label
    if isinstance(x, Fraction):
        return str(x)
    x = x.refined(_OUTPUT_WIDTH)
    if x.kind == "point":
        return str(x.lower)
    return {"poly": format_poly(x.witness), "enclosure": [str(x.lower), str(x.upper)]}


def _inf_label(e) -> str | None:
    if isinstance(e, str):
        t = e.strip().replace("−", "-").replace("∞", "inf")
        if t in ("inf", "-inf", "+inf"):
            return t
    return None


def _endpoint_from_json(e) -> Point:
    if isinstance(e, dict):
        w = parse_poly(e["poly"])
        lo, hi = (Fraction(v) for v in e["enclosure"])
        if lo == hi:
            return lo
        w = squarefree_part(w)
        if sturm_count(w, lo, hi) != 1 or w.sign_at(lo) == 0 or w.sign_at(hi) == 0:
            raise ValueError("enclosure does not isolate a root of its polynomial")
        return IsolatingInterval(lo, hi, "open", w)
    if isinstance(e, str):
        if _inf_label(e):
            return INF
        return Fraction(e.strip().replace("−", "-"))
    if isinstance(e, (int, Fraction)):
        return Fraction(e)
    if isinstance(e, float):
        raise ValueError("floating-point endpoints are not exact; pass them as strings")
    raise ValueError(f"bad endpoint {e!r}")


# ---------------------------------------------------------------------------
# normalisation

_TOP = object()  # +inf on the far end of the line, glued to INF


def _cmp_ext(x, y) -> int:
    if x is _TOP:
        return 0 if y is _TOP else 1
    if y is _TOP:
        return -1
    return cmp_line(x, y)


def circleset_normalize(arcs: Iterable[Sequence]) -> CircleSet:
    """Sort, merge and canonicalise raw arcs."""
    segs = []
    for raw in arcs:
        lo, hi = _pt(raw[0]), _pt(raw[1])
        if lo is INF and hi is INF:
            segs.append((INF, INF))
            segs.append((_TOP, _TOP))
        elif cmp_line(lo, hi) <= 0:
            segs.append((lo, hi))
        else:
            segs.append((lo, _TOP))
            segs.append((INF, hi))
            if hi is INF:
                segs.pop()
                segs.append((INF, INF))
    if not segs:
        return CircleSet()
    segs.sort(key=cmp_to_key(lambda s, t: _cmp_ext(s[0], t[0])))
    merged = [list(segs[0])]
    for lo, hi in segs[1:]:
        cur = merged[-1]
        if _cmp_ext(lo, cur[1]) <= 0:
            if _cmp_ext(hi, cur[1]) > 0:
                cur[1] = hi
        else:
            merged.append([lo, hi])
    first, last = merged[0], merged[-1]
    if first[0] is INF and last[1] is _TOP:
        if len(merged) == 1:
            return CircleSet.full_circle()
        # glue across infinity
        merged.pop()
        merged[0] = [last[0], first[1]]
        if merged[0][0] is _TOP:
            merged[0][0] = INF
    out = []
    for lo, hi in merged:
        if lo is _TOP:
            lo = INF
        if hi is _TOP:
            hi = INF
        out.append((lo, hi))
    out.sort(key=cmp_to_key(lambda s, t: cmp_line(s[0], t[0])))
    return CircleSet(tuple(out))


# ---------------------------------------------------------------------------
# preimages


def _endpoint_equations(f: RationalMap, e: Point) -> IntPoly | None:
    """Polynomial whose real roots contain every finite ``z`` with ``f(z) = e``."""
    if e is INF:
        return f.q
    if isinstance(e, Fraction):
        return f.p * e.denominator - f.q * e.numerator
    num, _ = poly_compose(e.witness, f.p, f.q)
    return num


def _value_in_set(f: RationalMap, S: CircleSet, c: Point, config: RunConfig) -> bool:
    """Exact test of ``f(c) in S``."""
    if c is INF or isinstance(c, Fraction):
        return S.contains(eval_map(f, c))
    if alg.is_root_of(c, f.q):
        return S.contains(INF)
    ends = [e for e in S.endpoints() if e is not INF]
    for e in ends:
        if isinstance(e, Fraction):
            if alg.is_root_of(c, f.p * e.denominator - f.q * e.numerator):
                return True
        elif alg.is_root_of(c, _endpoint_equations(f, e)) and maps_onto(f, c, e, config):
            return True
    # f(c) is no endpoint: refine until its enclosure avoids all of them
    x = c
    for _ in range(4 * config.refine_depth):
        enc = alg.rational_map_enclosure(f.p.coeffs, f.q.coeffs, alg.bounds(x))
        if enc is not None:
            lo, hi = enc
            clear = True
            for i, e in enumerate(ends):
                if isinstance(e, IsolatingInterval) and e.width > hi - lo:
                    e = ends[i] = alg.as_real(e.refined(max(hi - lo, Fraction(1, 1 << 400))))
                elo, ehi = alg.bounds(e)
                if not (ehi < lo or hi < elo):
                    clear = False
                    break
            if clear:
                return S.contains((lo + hi) / 2)
        x = alg.as_real(x.bisect())
        if isinstance(x, Fraction):
            return S.contains(eval_map(f, x))
    raise BudgetError("could not separate an image point from the set boundary")


def maps_onto(f: RationalMap, c, e, config: RunConfig = DEFAULT_CONFIG) -> bool:
    """Decide ``f(c) = e``, given that ``f(c)`` is a root of ``e``'s witness (or ``e`` is rational)."""
    c = alg.as_real(c)
    if isinstance(e, Fraction):
        return alg.is_root_of(c, f.p * e.denominator - f.q * e.numerator)
    if isinstance(c, Fraction):
        return alg.compare(eval_map(f, c), e) == 0
    x = c
    for _ in range(4 * config.refine_depth):
        enc = alg.rational_map_enclosure(f.p.coeffs, f.q.coeffs, alg.bounds(x))
        if enc is not None:
            lo, hi = enc
            if e.lower < lo and hi < e.upper:
                return True
            if hi < e.lower or e.upper < lo:
                return False
            if e.width > hi - lo:
                e = alg.as_real(e.bisect())
                if isinstance(e, Fraction):
                    return maps_onto(f, x, e, config)
        x = alg.as_real(x.bisect())
        if isinstance(x, Fraction):
            return alg.compare(eval_map(f, x), e) == 0
    raise BudgetError("could not decide an algebraic image point")


def compare_image(f: RationalMap, c, e, config: RunConfig = DEFAULT_CONFIG) -> int:
    """Exact ``sign(f(c) - e)`` for a real ``c`` that is not a pole and a real ``e``."""
    c, e = alg.as_real(c), alg.as_real(e)
    if isinstance(c, Fraction):
        v = eval_map(f, c)
        if v is INF:
            raise ValueError("c is a pole")
        return alg.compare(v, e)
    if alg.is_root_of(c, _endpoint_equations(f, e)) and maps_onto(f, c, e, config):
        return 0
    x = c
    for _ in range(4 * config.refine_depth):
        enc = alg.rational_map_enclosure(f.p.coeffs, f.q.coeffs, alg.bounds(x))
        if enc is not None:
            elo, ehi = alg.bounds(e)
            if enc[0] > ehi:
                return 1
            if enc[1] < elo:
                return -1
            if isinstance(e, IsolatingInterval) and e.width > enc[1] - enc[0]:
                e = alg.as_real(e.bisect())
        x = alg.as_real(x.bisect())
        if isinstance(x, Fraction):
            return compare_image(f, x, e, config)
    raise BudgetError("could not compare an image point")


def _cut_points(f: RationalMap, S: CircleSet) -> list[Point]:
    polys = set()
    for g in [f.q] + [_endpoint_equations(f, e) for e in S.endpoints()]:
        if g.degree > 0:
            polys.add(g.primitive())
    pts: list[Point] = []
    for g in polys:
        pts.extend(alg.as_real(iv) for iv in isolate_real_roots(g))
    pts.sort(key=cmp_to_key(cmp_line))
    out: list[Point] = []
    for x in pts:
        if not out or cmp_line(out[-1], x) != 0:
            out.append(x)
    return out


def _sample(lo: Point, hi: Point) -> Fraction:
    """Dyadic point in the open arc from ``lo`` up to ``hi``."""
    if lo is INF and hi is INF:
        return Fraction(0)
    if lo is INF:
        return Fraction(math.floor(alg.bounds(hi)[0]) - 1)
    if hi is INF:
        return Fraction(math.floor(alg.bounds(lo)[1]) + 1)
    return alg.rational_between(lo, hi)


def preimage(f: RationalMap, S: CircleSet, config: RunConfig = DEFAULT_CONFIG) -> CircleSet:
    """The set ``f^-1(S)``, computed exactly."""
    if S.full:
        return CircleSet.full_circle()
    if S.is_empty:
        return CircleSet()
    cuts = _cut_points(f, S)
    ring = [INF] + cuts  # cut points in circular order
    n = len(ring)
    arc_in = []
    for i in range(n):
        lo, hi = ring[i], ring[(i + 1) % n]
        arc_in.append(S.contains(eval_map(f, _sample(lo, hi))))
    pt_in = []
    for i in range(n):
        if arc_in[i] or arc_in[i - 1]:
            pt_in.append(True)  # preimages of closed sets are closed
        else:
            pt_in.append(_value_in_set(f, S, ring[i], config))
    if all(arc_in):
        return CircleSet.full_circle()
    # pieces in circular order: point i, then open arc (i, i+1)
    pieces = []
    for i in range(n):
        pieces.append(("pt", i, pt_in[i]))
        pieces.append(("arc", i, arc_in[i]))
    start = next(j for j, pc in enumerate(pieces) if not pc[2])
    rot = pieces[start + 1 :] + pieces[: start + 1]
    arcs = []
    run: list = []
    for pc in rot:
        if pc[2]:
            run.append(pc)
        elif run:
            arcs.append(_run_to_arc(run, ring))
            run = []
    if run:
        arcs.append(_run_to_arc(run, ring))
    return circleset_normalize(arcs)


def _run_to_arc(run, ring) -> Arc:
    # runs begin and end on point pieces because included arcs pull in their ends
    first, last = run[0], run[-1]
    return ring[first[1]], ring[last[1]]


def is_backward_invariant(f: RationalMap, S: CircleSet, config: RunConfig = DEFAULT_CONFIG) -> bool:
    return preimage(f, S, config).issubset(S)


@dataclass(frozen=True)
class FixedPointWitness:
    point: IsolatingInterval
    multiplier: MultiplierClass


def contains_nonattracting_fixed_point(
    f: RationalMap, S: CircleSet, config: RunConfig = DEFAULT_CONFIG
) -> FixedPointWitness | None:
    """A real fixed point in ``S`` that is not attracting, or None.

    Candidates with positive multiplier come first, then the rest; within
    each group finite points by position, then infinity.
    """
    later = None
    for iv in real_fixed_points(f, 1, config):
        where = INF if iv.kind == "infinity" else alg.as_real(iv)
        if not S.contains(where):
            continue
        cls = classify_multiplier(f, iv, 1, config)
        if not cls.nonattracting:
            continue
        if cls.lambda_bounds is not None and cls.lambda_bounds[0] > 0:
            return FixedPointWitness(iv, cls)
        if later is None:
            later = FixedPointWitness(iv, cls)
    return later
