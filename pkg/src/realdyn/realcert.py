"""Membership certificates for maps with only real periodic points."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Any

from . import algebraic as alg
from .config import DEFAULT_CONFIG, BudgetError, RunConfig
from .exactpoly import (
    IntPoly,
    IsolatingInterval,
    format_poly,
    isolate_real_roots,
    poly_compose,
    root_bound,
    squarefree_part,
    sturm_count,
)
from .invariants import (
    CircleSet,
    FixedPointWitness,
    compare_image,
    contains_nonattracting_fixed_point,
    is_backward_invariant,
    maps_onto,
)
from .ratmap import (
    INF,
    MultiplierClass,
    RationalMap,
    classify_multiplier,
    eval_map,
    fixed_point_data,
    format_map,
    multiplier_at_infinity,
    real_fixed_points,
)

log = logging.getLogger(__name__)

IN_RD = "certified_in_Rd"
NOT_IN_RD = "certified_not_in_Rd"
BOUNDARY = "boundary_indifferent"
INCONCLUSIVE = "inconclusive"
VERDICTS = (IN_RD, NOT_IN_RD, BOUNDARY, INCONCLUSIVE)
CRITERIA = ("thm_main_2", "thm_rf", "cor_odd", "cor_even", "scan")

_EVIDENCE_WIDTH = Fraction(1, 1 << 24)


@dataclass(frozen=True)
class Certificate:
    subject: RationalMap
    verdict: str
    criterion: str
    evidence: dict[str, Any] = field(default_factory=dict)
    k_scanned: int = 0

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.criterion not in CRITERIA:
            raise ValueError(f"unknown criterion {self.criterion!r}")
        if self.verdict == NOT_IN_RD and "first_nonreal_k" not in self.evidence:
            raise ValueError("a non-membership certificate needs first_nonreal_k")
        if self.verdict == IN_RD and self.criterion == "scan":
            raise ValueError("a finite scan cannot certify membership")

    def to_json(self) -> dict:
        return {
            "subject": format_map(self.subject),
            "verdict": self.verdict,
            "criterion": self.criterion,
            "k_scanned": self.k_scanned,
            "evidence": {k: _encode(v) for k, v in self.evidence.items() if v is not None},
        }


def _encode(v):
    if v is INF:
        return "inf"
    if isinstance(v, bool) or isinstance(v, (int, str)):
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, IsolatingInterval):
        if v.kind == "infinity":
            return "inf"
        if v.kind == "point":
            return str(v.lower)
        v = v.refined(_EVIDENCE_WIDTH)
        if v.kind == "point":
            return str(v.lower)
        return {"poly": format_poly(v.witness), "enclosure": [str(v.lower), str(v.upper)]}
    if isinstance(v, CircleSet):
        return v.to_json()
    if isinstance(v, MultiplierClass):
        out: dict[str, Any] = {"verdict": v.verdict}
        if v.lambda_bounds is not None:
            out["lambda"] = [str(v.lambda_bounds[0]), str(v.lambda_bounds[1])]
        return out
    if isinstance(v, tuple) and len(v) == 2 and all(isinstance(x, Fraction) for x in v):
        return [str(v[0]), str(v[1])]
    if isinstance(v, (list, tuple)):
        return [_encode(x) for x in v]
    if isinstance(v, dict):
        return {k: _encode(x) for k, x in v.items()}
    raise TypeError(f"cannot encode {type(v).__name__}")


# ---------------------------------------------------------------------------
# realness


def all_roots_real(a: IntPoly) -> bool:
    if a.is_zero():
        raise ValueError("zero polynomial")
    s = squarefree_part(a)
    return sturm_count(s) == s.degree


def scan_real_periodic(f: RationalMap, K: int, config: RunConfig = DEFAULT_CONFIG) -> Certificate:
    """Look for the least ``k <= K`` at which ``f**k`` has a nonreal fixed point."""
    if f.degree < 2:
        raise ValueError("scan needs a map of degree >= 2")
    if K < 1:
        raise ValueError("K must be >= 1")
    done = 0
    for k in range(1, K + 1):
        try:
            data = fixed_point_data(f, k, config)
        except BudgetError as exc:
            return Certificate(f, INCONCLUSIVE, "scan", {"budget_error": str(exc)}, done)
        if not data.all_real:
            return Certificate(f, NOT_IN_RD, "scan", {"first_nonreal_k": k}, k)
        done = k
    return Certificate(f, INCONCLUSIVE, "scan", {}, done)


# ---------------------------------------------------------------------------
# real fibered maps


def is_real_fibered(f: RationalMap) -> bool:
    """Whether ``p`` and ``q`` have simple real zeros that strictly interlace."""
    p, q = f.p, f.q
    if p.is_zero() or q.is_zero() or abs(p.degree - q.degree) > 1:
        return False
    tagged = []
    for tag, a in (("p", p), ("q", q)):
        if a.degree <= 0:
            continue
        roots = isolate_real_roots(a)
        if len(roots) != a.degree or any(r.multiplicity != 1 for r in roots):
            return False
        tagged.extend((alg.as_real(r), tag) for r in roots)
    tagged.sort(key=cmp_to_key(lambda x, y: alg.compare(x[0], y[0])))
    return all(tagged[i][1] != tagged[i + 1][1] for i in range(len(tagged) - 1))


def certify_rf(f: RationalMap, config: RunConfig = DEFAULT_CONFIG) -> Certificate:
    """The ``f**2`` test for real fibered maps."""
    if f.degree < 2 or not is_real_fibered(f):
        raise ValueError("not real fibered")
    data = fixed_point_data(f, 2, config)
    if not data.all_real:
        k = 1 if not fixed_point_data(f, 1, config).all_real else 2
        return Certificate(f, NOT_IN_RD, "thm_rf", {"first_nonreal_k": k}, 2)
    nonrepelling: list[tuple[IsolatingInterval, MultiplierClass]] = []
    indifferent = 0
    for iv in real_fixed_points(f, 1, config):
        cls = classify_multiplier(f, iv, 1, config)
        if cls.indifferent:
            indifferent += 1
        if cls.nonrepelling:
            nonrepelling.append((iv, cls))
    if indifferent > 1:
        raise RuntimeError("real fibered map with more than one indifferent real fixed point")
    for iv, cls in nonrepelling:
        if cls.indifferent:
            ev = {"nonrepelling_fixed_point": iv, "multiplier": cls}
            return Certificate(f, BOUNDARY, "thm_rf", ev, 2)
    if nonrepelling:
        iv, cls = nonrepelling[0]
        return Certificate(f, IN_RD, "thm_rf", {"nonrepelling_fixed_point": iv, "multiplier": cls}, 2)
    return Certificate(f, INCONCLUSIVE, "thm_rf", {"reason": "no nonrepelling real fixed point found"}, 2)


# ---------------------------------------------------------------------------
# short cycles


@dataclass(frozen=True)
class ShortCycle:
    points: tuple  # IsolatingInterval values, infinity as kind "infinity"
    multiplier: MultiplierClass

    @property
    def length(self) -> int:
        return len(self.points)


def _partner(f: RationalMap, r: IsolatingInterval, roots: list, config: RunConfig) -> int | None:
    """Index in ``roots`` of ``f(r)``, or None when ``f(r)`` is infinity."""
    if alg.is_root_of(r, f.q):
        return None
    x = alg.as_real(r)
    if isinstance(x, Fraction):
        v = eval_map(f, x)
        for j, s in enumerate(roots):
            if alg.compare(v, s) == 0:
                return j
        raise RuntimeError("image of a 2-periodic point is not 2-periodic")
    for _ in range(4 * config.refine_depth):
        enc = alg.rational_map_enclosure(f.p.coeffs, f.q.coeffs, alg.bounds(x))
        if enc is not None:
            hits = [j for j, s in enumerate(roots) if not (alg.bounds(s)[1] < enc[0] or enc[1] < alg.bounds(s)[0])]
            if len(hits) == 1:
                j = hits[0]
                if maps_onto(f, x, roots[j], config):
                    return j
            for j in hits:
                if isinstance(roots[j], IsolatingInterval):
                    roots[j] = alg.as_real(roots[j].bisect())
        x = alg.as_real(x.bisect())
        if isinstance(x, Fraction):
            return _partner(f, IsolatingInterval.point(x), roots, config)
    raise BudgetError("could not pair the points of a 2-cycle")


def find_nonrepelling_short_cycle(f: RationalMap, config: RunConfig = DEFAULT_CONFIG) -> ShortCycle | None:
    """First nonrepelling real cycle of length 1 or 2, in a fixed order."""
    if f.degree < 2:
        raise ValueError("needs degree >= 2")
    for iv in real_fixed_points(f, 1, config):
        cls = classify_multiplier(f, iv, 1, config)
        if cls.nonrepelling:
            return ShortCycle((iv,), cls)
    F1 = fixed_point_data(f, 1, config).F
    F2 = fixed_point_data(f, 2, config).F
    G = F2.exact_div(F1) if F1.degree > 0 else F2
    roots = [] if G.degree <= 0 else [r for r in isolate_real_roots(G) if not alg.is_root_of(r, F1)]
    reals = [alg.as_real(r) for r in roots]
    seen: set[int] = set()
    cycles = []
    for i, r in enumerate(roots):
        if i in seen:
            continue
        j = _partner(f, r, reals, config)
        seen.add(i)
        if j is None:
            cycles.append((r, IsolatingInterval.infinity()))
        else:
            seen.add(j)
            cycles.append((r, roots[j]))
    w = eval_map(f, INF)
    if w is not INF and eval_map(f, w) is INF and not any(c[1].kind == "infinity" for c in cycles):
        cycles.append((IsolatingInterval.point(w), IsolatingInterval.infinity()))
    for a, b in cycles:
        if b.kind == "infinity":
            cls = multiplier_at_infinity(f, 2, config)
        else:
            cls = classify_multiplier(f, a, 2, config)
        if cls.nonrepelling:
            return ShortCycle((a, b), cls)
    return None


# ---------------------------------------------------------------------------
# polynomial corollaries


def _polynomial_checks(f: RationalMap, parity: int) -> None:
    if not f.is_polynomial:
        raise ValueError("needs a polynomial map")
    d = f.p.degree
    if d % 2 != parity or d < (3 if parity else 2):
        raise ValueError("degree has the wrong parity or is too small")
    if f.p.lead <= 0:
        raise ValueError("needs a positive leading coefficient")


def _critical_points(f: RationalMap) -> list | None:
    dp = f.p.derivative()
    roots = isolate_real_roots(dp)
    if len(roots) != dp.degree or any(r.multiplicity != 1 for r in roots):
        return None
    return [alg.as_real(r) for r in roots]


def _value_enclosure(f: RationalMap, x, width: Fraction = _EVIDENCE_WIDTH) -> tuple[Fraction, Fraction]:
    """Dyadic enclosure of ``f(x)`` of width at most ``width``."""
    grid = 4 / width
    while True:
        enc = alg.rational_map_enclosure(f.p.coeffs, f.q.coeffs, alg.bounds(x))
        if enc is not None:
            lo = Fraction(math.floor(enc[0] * grid)) / grid
            hi = Fraction(math.ceil(enc[1] * grid)) / grid
            if hi - lo <= width:
                return lo, hi
        x = alg.as_real(x.bisect())


def _inconclusive(f: RationalMap, criterion: str, clause: str, **extra) -> Certificate:
    ev = {"failed_clause": clause}
    ev.update(extra)
    return Certificate(f, INCONCLUSIVE, criterion, ev, 1)


def _finish_corollary(f, criterion, x0, x1, crit, config) -> Certificate | None:
    S = CircleSet.interval(x0, x1)
    if not is_backward_invariant(f, S, config):
        return None
    ev = {
        "x0": alg.refine(x0, _EVIDENCE_WIDTH),
        "x1": alg.refine(x1, _EVIDENCE_WIDTH),
        "S": S,
        "critical_points": [alg.refine(z, _EVIDENCE_WIDTH) for z in crit],
        "critical_values": [_value_enclosure(f, z) for z in crit],
    }
    return Certificate(f, IN_RD, criterion, ev, 1)


def check_cor_odd(f: RationalMap, config: RunConfig = DEFAULT_CONFIG) -> Certificate:
    """Odd-degree polynomial criterion with extreme fixed points ``x0 < x1``."""
    _polynomial_checks(f, 1)
    crit = _critical_points(f)
    if crit is None:
        return _inconclusive(f, "cor_odd", "critical zeros not all real")
    fixed = [alg.as_real(r) for r in fixed_point_data(f, 1, config).roots]
    if not fixed:
        return _inconclusive(f, "cor_odd", "no real fixed point")
    x0, x1 = fixed[0], fixed[-1]
    if alg.compare(x0, crit[0]) >= 0:
        return _inconclusive(f, "cor_odd", "no fixed point x0 < z_1")
    if alg.compare(x1, crit[-1]) <= 0:
        return _inconclusive(f, "cor_odd", "no fixed point x1 > z_2m")
    for i, z in enumerate(crit):
        # z_1, z_3, ... are local maxima, z_2, z_4, ... local minima
        if i % 2 == 1 and compare_image(f, z, x0, config) > 0:
            return _inconclusive(f, "cor_odd", f"f(z_{i + 1}) > x0")
        if i % 2 == 0 and compare_image(f, z, x1, config) < 0:
            return _inconclusive(f, "cor_odd", f"f(z_{i + 1}) < x1")
    cert = _finish_corollary(f, "cor_odd", x0, x1, crit, config)
    if cert is None:
        return _inconclusive(f, "cor_odd", "f^-1([x0, x1]) not inside [x0, x1]", x0=x0, x1=x1)
    return cert


def _leftmost_preimage(f: RationalMap, y, config: RunConfig):
    """Least real ``z`` with ``f(z) = y``."""
    if isinstance(y, Fraction):
        G = f.p * y.denominator - f.q * y.numerator
    else:
        G, _ = poly_compose(y.witness, f.p, f.q)
    for r in isolate_real_roots(G):
        z = alg.as_real(r)
        if isinstance(y, Fraction) or maps_onto(f, z, y, config):
            return z
    return None


def _x0_candidates(f: RationalMap, x1, crit: list, config: RunConfig):
    seen: list = []

    def fresh(x):
        if x is not None and all(alg.compare(x, s) != 0 for s in seen):
            seen.append(x)
            return True
        return False

    first = _leftmost_preimage(f, x1, config)
    if fresh(first):
        yield first
    lows = [z for i, z in enumerate(crit) if i % 2 == 0]
    if not lows:
        return
    values = [_leftmost_value(f, z) for z in lows]
    for v in (max(values), min(values)):
        if fresh(v):
            yield v
    # geometric sequence below the lowest critical value, down to a root bound
    bound = root_bound(f.p - f.q * (int(alg.bounds(x1)[1]) + 1))
    t = min(values) - 1
    step = Fraction(2)
    while t > -bound:
        if fresh(t):
            yield t
        t = -(abs(t) * step)
    if fresh(-bound):
        yield -bound


def _leftmost_value(f: RationalMap, z):
    """``f(z)`` exactly when ``z`` is rational, else a rational lower bound."""
    if isinstance(z, Fraction):
        return eval_map(f, z)
    return _value_enclosure(f, z, Fraction(1, 1 << 16))[0]


def check_cor_even(f: RationalMap, config: RunConfig = DEFAULT_CONFIG) -> Certificate:
    """Even-degree polynomial criterion; ``x0`` is searched for, ``x1`` is the top fixed point."""
    _polynomial_checks(f, 0)
    crit = _critical_points(f)
    if crit is None:
        return _inconclusive(f, "cor_even", "critical zeros not all real")
    fixed = [alg.as_real(r) for r in fixed_point_data(f, 1, config).roots]
    if not fixed or alg.compare(fixed[-1], crit[-1]) <= 0:
        return _inconclusive(f, "cor_even", "no fixed point x1 > z_2m-1")
    x1 = fixed[-1]
    for i, z in enumerate(crit):
        # z_2, z_4, ... are local maxima
        if i % 2 == 1 and compare_image(f, z, x1, config) < 0:
            return _inconclusive(f, "cor_even", f"f(z_{i + 1}) < x1")
    tried = 0
    for x0 in _x0_candidates(f, x1, crit, config):
        tried += 1
        if alg.compare(x0, crit[0]) >= 0:
            continue
        if any(i % 2 == 0 and compare_image(f, z, x0, config) > 0 for i, z in enumerate(crit)):
            continue
        cert = _finish_corollary(f, "cor_even", x0, x1, crit, config)
        if cert is not None:
            return cert
    return _inconclusive(f, "cor_even", "no x0 makes [x0, x1] backward invariant", x1=x1)


# ---------------------------------------------------------------------------
# invariant set criterion


def certify_main(f: RationalMap, S: CircleSet, config: RunConfig = DEFAULT_CONFIG) -> Certificate:
    """Nonrepelling short cycle plus a backward invariant ``S`` with a nonattracting fixed point."""
    if f.degree < 2:
        raise ValueError("needs degree >= 2")
    if S.is_empty:
        raise ValueError("S must be nonempty")
    cycle = find_nonrepelling_short_cycle(f, config)
    if cycle is None:
        return _inconclusive(f, "thm_main_2", "no nonrepelling real cycle of length <= 2", S=S)
    witness: FixedPointWitness | None = contains_nonattracting_fixed_point(f, S, config)
    if witness is None:
        return _inconclusive(f, "thm_main_2", "S contains no nonattracting fixed point", S=S)
    if not is_backward_invariant(f, S, config):
        return _inconclusive(f, "thm_main_2", "f^-1(S) not inside S", S=S)
    ev = {
        "S": S,
        "cycle": list(cycle.points),
        "cycle_multiplier": cycle.multiplier,
        "nonattracting_fixed_point": witness.point,
        "nonattracting_multiplier": witness.multiplier,
    }
    return Certificate(f, IN_RD, "thm_main_2", ev, 1)


def certify(f: RationalMap, S: CircleSet | None = None, config: RunConfig = DEFAULT_CONFIG) -> Certificate:
    """Try the applicable criteria, then fall back to a scan for nonreal points."""
    if f.degree < 2:
        raise ValueError("certification needs a map of degree >= 2")
    first: Certificate | None = None
    if S is not None:
        first = certify_main(f, S, config)
    elif is_real_fibered(f):
        return certify_rf(f, config)
    elif f.is_polynomial and f.p.lead > 0:
        first = check_cor_odd(f, config) if f.degree % 2 else check_cor_even(f, config)
    if first is not None and first.verdict == IN_RD:
        return first
    K = config.scan_depth(f.degree)
    scan = scan_real_periodic(f, K, config)
    if scan.verdict == NOT_IN_RD or first is None:
        return scan
    ev = dict(first.evidence)
    ev.update(scan.evidence)
    return Certificate(f, INCONCLUSIVE, first.criterion, ev, scan.k_scanned)
