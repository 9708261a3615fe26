from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from realdyn import algebraic as alg
from realdyn.config import BudgetError, RunConfig
from realdyn.exactpoly import IntPoly, IsolatingInterval, isolate_real_roots
from realdyn.families import chebyshev, hermite
from realdyn.ratmap import (
    INF,
    classify_multiplier,
    conjugate,
    derivative,
    eval_map,
    fixed_point_data,
    format_map,
    iterate,
    moebius_apply,
    multiplier_at_infinity,
    parse_map,
    ratmap_new,
    real_fixed_points,
)


def P(*c):
    return IntPoly(list(c))


T2 = ratmap_new(P(-1, 0, 2))
F213 = ratmap_new(P(-1, 0, 2), P(0, 1))  # 2z - 1/z
BOUND = ratmap_new(P(-1, 0, 1), P(0, 1))  # (z^2 - 1)/z

small = st.integers(-5, 5)


@st.composite
def deg2_maps(draw):
    p = [draw(small) for _ in range(3)]
    q = [draw(small) for _ in range(draw(st.integers(1, 3)))]
    assume(any(q))
    f = ratmap_new(IntPoly(p), IntPoly(q))
    assume(f.degree == 2)
    return f


@st.composite
def moebius(draw):
    m = [draw(st.integers(-3, 3)) for _ in range(4)]
    assume(m[0] * m[3] - m[1] * m[2] != 0)
    return tuple(m)


# --- construction -------------------------------------------------------------


def test_ratmap_new_examples():
    assert T2.degree == 2 and T2.q == P(1)
    assert BOUND.degree == 2 and BOUND.p == P(-1, 0, 1) and BOUND.q == P(0, 1)
    f = ratmap_new(P(-1, 0, 1), P(-1, 1))
    assert (f.p, f.q, f.degree) == (P(1, 1), P(1), 1)


def test_ratmap_new_normalises_sign_and_content():
    f = ratmap_new(P(2, 0, -4), P(0, -2))
    assert f.q.lead > 0
    assert f == ratmap_new(P(-1, 0, 2), P(0, 1))
    g = ratmap_new([Fraction(3, 2), 0, Fraction(-1, 2)])
    assert g.p == P(3, 0, -1) and g.q == P(2)


def test_ratmap_new_rejects_zero_map():
    with pytest.raises(ValueError, match="undefined map"):
        ratmap_new(IntPoly([]), IntPoly([]))


def test_parse_and_format_roundtrip():
    f = parse_map("-1,0,1 | 0,1")
    assert f == BOUND
    assert parse_map(format_map(f)) == f
    assert parse_map("-1,0,2") == T2
    with pytest.raises(ValueError):
        parse_map("")


# --- evaluation -------------------------------------------------------------


def test_eval_examples():
    assert eval_map(BOUND, Fraction(0)) is INF
    assert eval_map(T2, INF) is INF
    assert eval_map(hermite(3), Fraction(1)) == -4
    assert eval_map(F213, INF) is INF
    assert eval_map(ratmap_new(P(1), P(0, 1)), INF) == 0
    assert eval_map(ratmap_new(P(0, 3), P(1, 2)), INF) == Fraction(3, 2)


# --- iteration ------------------------------------------------------------------


def test_iterate_examples():
    assert iterate(T2, 2) == ratmap_new(P(1, 0, -8, 0, 8))
    assert iterate(F213, 1) == F213
    assert iterate(T2, 3) == chebyshev(8)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_chebyshev_semigroup(k):
    assert iterate(chebyshev(2), k) == chebyshev(2**k)


def test_iterate_budget():
    with pytest.raises(BudgetError):
        iterate(T2, 6, RunConfig(max_iterate_degree=32))
    with pytest.raises(BudgetError):
        iterate(hermite(3), 4, RunConfig(max_coeff_bits=64))


@settings(max_examples=25, deadline=None)
@given(deg2_maps(), st.integers(1, 3))
def test_iterate_degree_law(f, k):
    assert iterate(f, k).degree == 2**k


# --- fixed points -------------------------------------------------------------


def test_fixed_point_data_examples():
    data = fixed_point_data(T2, 1)
    assert data.F == P(-1, -1, 2)
    assert data.infinity_multiplicity == 1 and data.all_real
    assert [alg.to_float(r) for r in data.roots] == [-0.5, 1.0]
    data = fixed_point_data(hermite(3), 1)
    assert data.F == P(0, -13, 0, 8) and data.all_real
    assert len(data.roots) == 3
    data = fixed_point_data(BOUND, 1)
    assert data.F.degree == 0 and data.infinity_multiplicity == 3 and data.all_real


def test_fixed_point_data_rejects_degree_one():
    with pytest.raises(ValueError):
        fixed_point_data(ratmap_new(P(1, 1)), 1)


@settings(max_examples=25, deadline=None)
@given(deg2_maps(), st.integers(1, 3))
def test_fixed_point_count(f, k):
    data = fixed_point_data(f, k)
    assert data.F.degree + data.infinity_multiplicity == 2**k + 1


@settings(max_examples=25, deadline=None)
@given(deg2_maps())
def test_f1_divides_f2(f):
    F1 = fixed_point_data(f, 1).F
    F2 = fixed_point_data(f, 2).F
    if F1.degree > 0:
        assert F1.divides(F2)


# --- derivative --------------------------------------------------------------


def test_derivative_examples():
    assert derivative(T2) == ratmap_new(P(0, 4))
    assert derivative(BOUND) == ratmap_new(P(1, 0, 1), P(0, 0, 1))
    assert derivative(ratmap_new(P(3))).p.is_zero()


# --- multipliers ----------------------------------------------------------------


def _root_near(f, k, x):
    for iv in real_fixed_points(f, k):
        if iv.kind != "infinity" and abs(alg.to_float(iv) - x) < 1e-9:
            return iv
    raise AssertionError(f"no fixed point near {x}")


def test_classify_examples():
    m = classify_multiplier(T2, _root_near(T2, 1, 1.0), 1)
    assert m.verdict == "repelling" and m.lambda_bounds == (4, 4)
    m = classify_multiplier(F213, _root_near(F213, 1, 1.0), 1)
    assert m.verdict == "repelling" and m.lambda_bounds == (3, 3)
    m = classify_multiplier(T2, _root_near(T2, 1, -0.5), 1)
    assert m.lambda_bounds == (-2, -2)


def test_classify_algebraic_root_enclosure():
    h3 = hermite(3)
    m = classify_multiplier(h3, _root_near(h3, 1, (13 / 8) ** 0.5), 1)
    # H3'(x) = 24 x^2 - 12 = 27 at x^2 = 13/8
    assert m.verdict == "repelling"
    assert m.lambda_bounds[0] <= 27 <= m.lambda_bounds[1]


def test_classify_exact_indifference():
    f = ratmap_new(P(0, -1, 0, 1))  # z^3 - z, multiplier -1 at 0
    assert classify_multiplier(f, _root_near(f, 1, 0.0), 1).verdict == "indifferent_minus"
    assert classify_multiplier(f, _root_near(f, 2, 0.0), 2).verdict == "indifferent_plus"
    g = ratmap_new(P(0, 1, 1))  # z + z^2, multiplier +1 at 0
    assert classify_multiplier(g, _root_near(g, 1, 0.0), 1).verdict == "indifferent_plus"


def test_classify_rejects_non_root():
    with pytest.raises(ValueError):
        classify_multiplier(T2, IsolatingInterval.point(Fraction(3)), 1)


def test_multiplier_at_infinity_examples():
    m = multiplier_at_infinity(T2)
    assert m.verdict == "attracting" and m.lambda_bounds == (0, 0)
    m = multiplier_at_infinity(F213)
    assert m.verdict == "attracting" and m.lambda_bounds == (Fraction(1, 2), Fraction(1, 2))
    assert multiplier_at_infinity(BOUND).verdict == "indifferent_plus"


def test_cycle_multiplier_constancy():
    """Points of one real cycle share the multiplier of f**k."""
    for f, k in ((T2, 2), (T2, 3), (hermite(3), 2), (F213, 2)):
        data = fixed_point_data(f, k)
        lower = fixed_point_data(f, 1).F
        for iv in data.roots:
            if alg.is_root_of(iv, lower):
                continue
            # walk the orbit: f(iv) is another root of F_k
            x = alg.refine(alg.as_real(iv), Fraction(1, 1 << 30))
            y = eval_map(f, x) if isinstance(x, Fraction) else None
            if y is None:
                enc = alg.rational_map_enclosure(f.p.coeffs, f.q.coeffs, alg.bounds(x))
                partner = [r for r in data.roots if alg.bounds(r)[0] <= enc[1] and enc[0] <= alg.bounds(r)[1]]
            else:
                partner = [r for r in data.roots if alg.compare(alg.as_real(r), y) == 0]
            assert len(partner) == 1
            a = classify_multiplier(f, iv, k)
            b = classify_multiplier(f, partner[0], k)
            assert a.verdict == b.verdict
            la = alg.refine(alg.as_real(iv), Fraction(1, 1 << 40))
            lb = alg.refine(alg.as_real(partner[0]), Fraction(1, 1 << 40))
            ea = classify_multiplier(f, la if not isinstance(la, Fraction) else IsolatingInterval.point(la), k)
            eb = classify_multiplier(f, lb if not isinstance(lb, Fraction) else IsolatingInterval.point(lb), k)
            assert ea.lambda_bounds[0] - Fraction(1, 10**6) <= eb.lambda_bounds[1]
            assert eb.lambda_bounds[0] - Fraction(1, 10**6) <= ea.lambda_bounds[1]


# --- conjugation ----------------------------------------------------------------


def test_conjugate_examples():
    assert conjugate(T2, 1, 0, 0, 1) == T2
    shifted = conjugate(T2, 1, 1, 0, 1)
    pts = sorted(alg.to_float(r) for r in fixed_point_data(shifted, 1).roots)
    assert pts == [0.5, 2.0]
    inv = conjugate(T2, 0, 1, 1, 0)
    pts = sorted(alg.to_float(r) for r in fixed_point_data(inv, 1).roots)
    # phi(-1/2) = -2, phi(1) = 1 and phi(inf) = 0 (the attracting point)
    assert pts == [-2.0, 0.0, 1.0]
    assert fixed_point_data(inv, 1).infinity_multiplicity == 0
    assert classify_multiplier(inv, _root_near(inv, 1, 0.0), 1).lambda_bounds == (0, 0)
    m = classify_multiplier(inv, _root_near(inv, 1, 1.0), 1)
    assert m.lambda_bounds == (4, 4)


def test_conjugate_rejects_singular():
    with pytest.raises(ValueError):
        conjugate(T2, 1, 2, 2, 4)


def test_moebius_apply():
    assert moebius_apply(0, 1, 1, 0, INF) == 0
    assert moebius_apply(0, 1, 1, 0, Fraction(0)) is INF
    assert moebius_apply(1, 1, 0, 1, Fraction(1)) == 2


@settings(max_examples=20, deadline=None)
@given(deg2_maps(), moebius(), st.integers(1, 3))
def test_conjugation_preserves_realness(f, m, k):
    g = conjugate(f, *m)
    assert g.degree == f.degree
    assert fixed_point_data(g, k).all_real == fixed_point_data(f, k).all_real


@settings(max_examples=20, deadline=None)
@given(deg2_maps(), moebius(), st.fractions(-4, 4, max_denominator=6))
def test_conjugation_commutes_with_evaluation(f, m, x):
    """phi(f(x)) = g(phi(x)) for the conjugate g."""
    g = conjugate(f, *m)
    fx = eval_map(f, x)
    assert moebius_apply(*m, fx) == eval_map(g, moebius_apply(*m, x))


def test_isolation_of_chebyshev_iterate_points():
    # sanity on the certificate path used for high degree
    data = fixed_point_data(T2, 5)
    assert data.all_real and data.real_count == 32
    assert len(isolate_real_roots(data.F)) == 32
