"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py -v``; a PASS/FAIL table is
printed in the terminal summary.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy

from realdyn import algebraic as alg
from realdyn.exactpoly import IntPoly, squarefree_part, sturm_count
from realdyn.families import SplitMix64, chebyshev, hermite, interlacing_random, perturbed_cheb2
from realdyn.invariants import CircleSet, is_backward_invariant, preimage
from realdyn.ratmap import (
    classify_multiplier,
    conjugate,
    derivative,
    eval_map,
    fixed_point_data,
    multiplier_at_infinity,
    ratmap_new,
    raw_fixed_point_poly,
    real_fixed_points,
)
from realdyn.realcert import (
    BOUNDARY,
    IN_RD,
    NOT_IN_RD,
    all_roots_real,
    certify_main,
    certify_rf,
    check_cor_even,
    check_cor_odd,
    scan_real_periodic,
)

log = logging.getLogger(__name__)
Z = sympy.Symbol("z")


def _ks(d: int, bound: int) -> list[int]:
    return [k for k in range(1, 64) if d**k <= bound]


def _sym(a: IntPoly):
    return sympy.Poly(list(reversed(a.coeffs)), Z)


def _encloses_root(witness: IntPoly, lo: Fraction, hi: Fraction, exact) -> bool:
    """``exact`` lies in ``[lo, hi]`` and is a root of ``witness`` (resultant check)."""
    minpoly = sympy.minimal_polynomial(exact, Z)
    res = sympy.resultant(_sym(witness).as_expr(), minpoly, Z)
    inside = sympy.Rational(lo.numerator, lo.denominator) <= exact <= sympy.Rational(hi.numerator, hi.denominator)
    return res == 0 and bool(inside)


@pytest.mark.criterion(1, "Chebyshev T_d all real for d^k <= 2048")
def test_criterion_1_chebyshev_realness(criterion):
    rows = 0
    for d in (2, 3, 4):
        f = chebyshev(d)
        for k in _ks(d, 2048):
            data = fixed_point_data(f, k)
            assert data.all_real is True, (d, k)
            assert data.F.degree + data.infinity_multiplicity == d**k + 1
            rows += 1
    criterion.note(f"{rows} (d, k) pairs")


@pytest.mark.criterion(2, "Hermite H3/H4 constants")
def test_criterion_2_hermite_constants(criterion):
    cert = check_cor_odd(hermite(3))
    assert cert.verdict == IN_RD
    ev = cert.evidence
    cps = ev["critical_points"]
    assert len(cps) == 2
    for x, exact in zip(cps, (-sympy.sqrt(2) / 2, sympy.sqrt(2) / 2)):
        lo, hi = alg.bounds(x)
        assert hi - lo <= Fraction(1, 10**6)
        assert _encloses_root(x.witness, lo, hi, exact)
    for (lo, hi), exact in zip(ev["critical_values"], (4 * sympy.sqrt(2), -4 * sympy.sqrt(2))):
        assert hi - lo <= Fraction(1, 10**6)
        # the value is a root of x^2 - 32, checked by resultant with its minimal polynomial
        assert _encloses_root(IntPoly([-32, 0, 1]), lo, hi, exact)

    cert = check_cor_even(hermite(4))
    assert cert.verdict == IN_RD
    ev = cert.evidence
    h4 = _sym(hermite(4).p)
    values = []
    for x in ev["critical_points"]:
        if isinstance(x, Fraction):
            values.append(h4.eval(sympy.Rational(x.numerator, x.denominator)))
        else:
            # H4' = 32 z (2 z^2 - 3); the nonzero critical points are roots of m
            m = sympy.Poly(2 * Z**2 - 3, Z)
            assert _sym(x.witness).rem(m).is_zero
            lo, hi = alg.bounds(x)
            assert m.eval(sympy.Rational(lo.numerator, lo.denominator)) * m.eval(
                sympy.Rational(hi.numerator, hi.denominator)
            ) < 0
            r = h4.rem(m)
            assert r.degree() <= 0
            values.append(r.as_expr())
    assert sorted(values) == [-24, -24, 12]
    for (lo, hi), v in zip(ev["critical_values"], values):
        assert lo <= Fraction(int(v)) <= hi
    x0, x1 = ev["x0"], ev["x1"]
    for x, target in ((x0, -1.66327), (x1, 1.66327)):
        lo, hi = alg.bounds(alg.refine(x, Fraction(1, 10**6)))
        assert hi - lo <= Fraction(1, 10**5)
        assert abs(float(lo) - target) < 1e-5 and abs(float(hi) - target) < 1e-5
    criterion.note(f"x1 ~ {alg.to_float(x1):.6f}")


@pytest.mark.criterion(3, "Hermite scan d=2..6, d^k <= 2000")
def test_criterion_3_hermite_scan(criterion):
    counterexamples = []
    rows = 0
    for d in range(2, 7):
        f = hermite(d)
        for k in _ks(d, 2000):
            rows += 1
            if not fixed_point_data(f, k).all_real:
                counterexamples.append((d, k))
                log.error("Hermite counterexample: H_%d has nonreal points of period dividing %d", d, k)
    if counterexamples:
        print(f"!!! Hermite counterexamples found: {counterexamples}")
    criterion.note(f"{rows} rows, counterexamples: {counterexamples or 'none'}")
    assert rows > 0


@pytest.mark.criterion(4, "real fibered maps: certify_rf and F_k all real for k <= 4")
def test_criterion_4_interlacing(criterion):
    n = 0
    for d in (2, 3):
        for seed in range(100):
            f = interlacing_random(d, seed)
            assert certify_rf(f).verdict == IN_RD, (d, seed)
            for k in range(1, 5):
                assert fixed_point_data(f, k).all_real, (d, seed, k)
            n += 1
    criterion.note(f"{n} maps")


@pytest.mark.criterion(5, "boundary map and its (1+eps) perturbations")
def test_criterion_5_boundary(criterion):
    f = ratmap_new(IntPoly([-1, 0, 1]), IntPoly([0, 1]))
    assert certify_rf(f).verdict == BOUNDARY
    verdicts = {}
    for eps in (Fraction(1, 8), Fraction(1, 16)):
        g = ratmap_new([(1 + eps) * c for c in (-1, 0, 1)], [0, 1])
        verdicts[str(eps)] = scan_real_periodic(g, 4).verdict
    criterion.note(f"boundary ok; scan verdicts for (1+eps)f: {verdicts}")
    # (1+eps)(z^2-1)/z is real fibered with an attracting fixed point at
    # infinity (multiplier 1/(1+eps)), so every F_k is all real and the
    # expected non-membership cannot be produced.  Left failing on purpose.
    assert all(v == NOT_IN_RD for v in verdicts.values()), (
        f"(1+eps)(z^2-1)/z stays all-real through k=4: {verdicts}"
    )


@pytest.mark.criterion(6, "perturbed Chebyshev")
def test_criterion_6_perturbed(criterion):
    cert = scan_real_periodic(perturbed_cheb2(Fraction(1, 10)), 8)
    assert cert.verdict == NOT_IN_RD
    k = cert.evidence["first_nonreal_k"]
    assert k <= 8
    # minimality: every earlier iterate is all real
    assert all(fixed_point_data(perturbed_cheb2(Fraction(1, 10)), j).all_real for j in range(1, k))
    f0 = perturbed_cheb2(0)
    assert all(fixed_point_data(f0, j).all_real for j in _ks(2, 2048))
    criterion.note(f"eps=1/10 first nonreal at k={k}")


def _numeric_real_count(coeffs: list[int], tol: float = 1e-7) -> int:
    roots = np.roots(list(reversed(coeffs)))
    clusters: list[list[complex]] = []
    for r in sorted(roots, key=lambda c: (c.real, c.imag)):
        for c in clusters:
            if abs(c[0] - r) <= tol * max(1.0, abs(r)):
                c.append(r)
                break
        else:
            clusters.append([r])
    centres = [np.mean(c) for c in clusters]
    real = [c for c in centres if abs(c.imag) <= tol * max(1.0, abs(c))]
    nonreal = [c for c in centres if abs(c.imag) > tol * max(1.0, abs(c))]
    # conjugate-pair sanity
    for c in nonreal:
        assert any(abs(c.conjugate() - o) <= 1e-5 * max(1.0, abs(c)) for o in nonreal), coeffs
    return len(real)


@pytest.mark.criterion(7, "Sturm counts match a floating-point root finder")
def test_criterion_7_sturm_oracle(criterion):
    rng = SplitMix64(20240607)
    for i in range(1000):
        deg = 1 + rng.below(12)
        coeffs = [rng.below(101) - 50 for _ in range(deg)] + [1 + rng.below(50) * (1 if rng.below(2) else -1)]
        a = IntPoly(coeffs)
        assert sturm_count(squarefree_part(a)) == _numeric_real_count(coeffs), (i, coeffs)
    criterion.note("1000 polynomials")


@pytest.mark.criterion(8, "invariant-set certificate for T_2 and T_d")
def test_criterion_8_invariant_set(criterion):
    T2 = chebyshev(2)
    S = CircleSet.interval(-1, 1)
    cert = certify_main(T2, S)
    assert cert.verdict == IN_RD
    ev = cert.evidence
    assert len(ev["cycle"]) == 1 and ev["cycle"][0].kind == "infinity"
    assert ev["cycle_multiplier"].lambda_bounds == (0, 0)
    assert alg.compare(ev["nonattracting_fixed_point"], Fraction(1)) == 0
    assert preimage(T2, S) == S
    for d in range(2, 7):
        assert is_backward_invariant(chebyshev(d), S), d


@pytest.mark.criterion(9, "multiplier identity F'(0) = q(0)(f'(0) - 1)")
def test_criterion_9_multiplier_identity(criterion):
    rng = SplitMix64(99)
    n = 0
    while n < 200:
        d = 2 + n % 2
        p = [0] + [rng.below(21) - 10 for _ in range(d)]
        q = [rng.below(21) - 10 for _ in range(d + (rng.below(2) - 1))]
        if p[-1] == 0 or not any(q) or q[0] == 0:
            continue
        f = ratmap_new(IntPoly(p), IntPoly(q))
        if f.degree != d or eval_map(f, Fraction(0)) != 0:
            continue
        F = raw_fixed_point_poly(f)
        q0 = Fraction(f.q.coeffs[0])
        fprime0 = eval_map(derivative(f), Fraction(0))
        assert Fraction(F.derivative().coeffs[0] if F.degree > 0 else 0) == q0 * (fprime0 - 1)
        # the classifier agrees with the exact multiplier
        cls = classify_multiplier(f, real_fixed_points(f)[_index_of_zero(f)], 1)
        assert cls.lambda_bounds[0] <= fprime0 <= cls.lambda_bounds[1]
        n += 1
    criterion.note("200 maps")


def _index_of_zero(f) -> int:
    for i, iv in enumerate(real_fixed_points(f)):
        if iv.kind != "infinity" and alg.compare(alg.as_real(iv), Fraction(0)) == 0:
            return i
    raise AssertionError("planted fixed point missing")


def _fixed_classes(f, k):
    """(position, verdict) for every real fixed point of f**k; infinity as math.inf."""
    out = []
    for iv in real_fixed_points(f, k):
        cls = classify_multiplier(f, iv, k)
        pos = math.inf if iv.kind == "infinity" else alg.to_float(alg.refine(alg.as_real(iv), Fraction(1, 1 << 40)))
        out.append((pos, cls.verdict))
    return out


def _phi_float(m, x: float) -> float:
    a, b, c, e = (float(v) for v in m)
    if math.isinf(x):
        return math.inf if c == 0 else a / c
    den = c * x + e
    return math.inf if abs(den) < 1e-12 else (a * x + b) / den


def _match(x: float, y: float) -> bool:
    if math.isinf(x) and math.isinf(y):
        return True
    if math.isinf(x) or math.isinf(y):
        return abs(y if math.isinf(x) else x) > 1e6
    return abs(x - y) <= 1e-6 * max(1.0, abs(x))


@pytest.mark.criterion(10, "conjugation invariance of realness and multiplier classes")
def test_criterion_10_conjugation(criterion):
    rng = SplitMix64(7)
    maps = []
    while len(maps) < 100:
        p = [rng.below(11) - 5 for _ in range(3)]
        q = [rng.below(11) - 5 for _ in range(rng.below(3) + 1)]
        if not any(q):
            continue
        f = ratmap_new(IntPoly(p), IntPoly(q))
        if f.degree == 2:
            maps.append(f)
    moebius = []
    while len(moebius) < 20:
        m = [rng.below(7) - 3 for _ in range(4)]
        if m[0] * m[3] - m[1] * m[2] != 0:
            moebius.append(tuple(m))
    checked = 0
    for f in maps:
        base = {k: fixed_point_data(f, k).all_real for k in (1, 2, 3)}
        classes = {k: _fixed_classes(f, k) for k in (1, 2)}
        for m in moebius:
            g = conjugate(f, *m)
            assert g.degree == 2
            for k in (1, 2, 3):
                assert fixed_point_data(g, k).all_real == base[k], (f, m, k)
            for k in (1, 2):
                mine = _fixed_classes(g, k)
                assert len(mine) == len(classes[k])
                for pos, verdict in classes[k]:
                    target = _phi_float(m, pos)
                    hits = [v for x, v in mine if _match(x, target)]
                    assert hits == [verdict], (f, m, k, pos)
            checked += 1
    criterion.note(f"{checked} conjugate pairs")


def test_scan_soundness_for_certified_maps():
    """Maps certified in R_d stay all-real through d^k <= 2000."""
    for f in (chebyshev(2), hermite(3), hermite(4), interlacing_random(2, 5)):
        for k in _ks(f.degree, 2000):
            assert fixed_point_data(f, k).all_real
    assert all_roots_real(IntPoly([1, 0, -8, 0, 8]))
    assert multiplier_at_infinity(chebyshev(2)).verdict == "attracting"


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v"]))
