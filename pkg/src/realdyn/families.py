"""Generators for the example families of real maps."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .exactpoly import IntPoly
from .ratmap import RationalMap, ratmap_new

_MASK = (1 << 64) - 1


def chebyshev(d: int) -> RationalMap:
    """First-kind Chebyshev polynomial ``T_d``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    z = IntPoly([0, 1])
    prev, cur = IntPoly([1]), z
    for _ in range(d - 1):
        prev, cur = cur, z * cur * 2 - prev
    return ratmap_new(cur)


def hermite(d: int) -> RationalMap:
    """Physicists' Hermite polynomial ``H_d``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    z2 = IntPoly([0, 2])
    prev, cur = IntPoly([1]), z2
    for n in range(1, d):
        prev, cur = cur, z2 * cur - prev * (2 * n)
    return ratmap_new(cur)


def _fmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _fadd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _froots(roots: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(1)]
    for r in roots:
        out = _fmul(out, [-r, Fraction(1)])
    return out


def fatou_form(c, a: Sequence, b: Sequence) -> RationalMap:
    """``z * (c - sum a_i / (z - b_i))**2`` as a normalised map."""
    c = Fraction(c)
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    if len(a) != len(b):
        raise ValueError("a and b must have the same length")
    if len(set(b)) != len(b):
        raise ValueError("the b_i must be pairwise distinct")
    if c < 0 or any(x <= 0 for x in a) or any(x < 0 for x in b):
        raise ValueError("need c >= 0, a_i > 0 and b_i >= 0")
    inner = [c * x for x in _froots(b)]
    for i, ai in enumerate(a):
        others = _froots(b[:i] + b[i + 1 :])
        inner = _fadd(inner, [-ai * x for x in others])
    num = _fmul([Fraction(0), Fraction(1)], _fmul(inner, inner))
    den = _fmul(_froots(b), _froots(b))
    return ratmap_new(num, den)


def perturbed_cheb2(eps) -> RationalMap:
    """``(2 - eps) z**2 + eps - 1``; the point 1 is fixed for every eps."""
    eps = Fraction(eps)
    return ratmap_new([eps - 1, 0, 2 - eps])


class SplitMix64:
    """Deterministic 64-bit generator, identical on every platform."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection."""
        limit = (1 << 64) - (1 << 64) % n
        while True:
            v = self.next()
            if v < limit:
                return v % n

    def rational(self, lo: int, hi: int, max_den: int = 8) -> Fraction:
        den = 1 + self.below(max_den)
        return Fraction(lo * den + self.below((hi - lo) * den + 1), den)


def interlacing_random(d: int, seed: int) -> RationalMap:
    """Random ``p/q`` with strictly interlacing real zeros, ``deg p = deg q + 1 = d``.

    The leading coefficient of ``p`` exceeds that of ``q`` (which is 1), so
    infinity is an attracting fixed point.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    rng = SplitMix64(seed)
    roots: set[Fraction] = set()
    while len(roots) < 2 * d - 1:
        roots.add(rng.rational(-10, 10))
    r = sorted(roots)
    lead = 1 + Fraction(1 + rng.below(8), 1 + rng.below(4))
    p = [lead * x for x in _froots(r[0::2])]
    q = _froots(r[1::2])
    return ratmap_new(p, q)


def interlacing_from_roots(p_roots, q_roots, lead) -> RationalMap:
    """``lead * prod(z - p_i) / prod(z - q_j)`` (no interlacing check)."""
    p = [Fraction(lead) * x for x in _froots([Fraction(x) for x in p_roots])]
    return ratmap_new(p, _froots([Fraction(x) for x in q_roots]))


FAMILIES = ("chebyshev", "hermite", "fatou_form", "perturbed_cheb2", "interlacing_random")


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if self.name not in FAMILIES:
            raise ValueError(f"unknown family {self.name!r}; expected one of {', '.join(FAMILIES)}")
        need = {
            "chebyshev": ("d",),
            "hermite": ("d",),
            "fatou_form": ("c", "a", "b"),
            "perturbed_cheb2": ("eps",),
            "interlacing_random": ("d",),
        }[self.name]
        missing = [k for k in need if k not in self.params]
        if missing:
            raise ValueError(f"family {self.name} needs parameter(s) {', '.join(missing)}")
        if self.name == "interlacing_random" and self.seed is None:
            raise ValueError("interlacing_random needs a seed")

    def build(self) -> RationalMap:
        p = self.params
        if self.name == "chebyshev":
            return chebyshev(int(p["d"]))
        if self.name == "hermite":
            return hermite(int(p["d"]))
        if self.name == "fatou_form":
            return fatou_form(Fraction(str(p["c"])), [Fraction(str(x)) for x in p["a"]], [Fraction(str(x)) for x in p["b"]])
        if self.name == "perturbed_cheb2":
            return perturbed_cheb2(Fraction(str(p["eps"])))
        return interlacing_random(int(p["d"]), int(self.seed))

    @property
    def label(self) -> str:
        if self.name == "perturbed_cheb2":
            return f"perturbed_cheb2(eps={self.params['eps']})"
        if self.name == "interlacing_random":
            return f"interlacing_random(d={self.params['d']},seed={self.seed})"
        return self.name

    def to_json(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "params": self.params}
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @classmethod
    def from_json(cls, data) -> "FamilySpec":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["name"], dict(data.get("params", {})), data.get("seed"))
