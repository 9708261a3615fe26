from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realdyn import algebraic as alg
from realdyn.config import RunConfig
from realdyn.exactpoly import IntPoly, isolate_real_roots


def _roots(*c):
    return [alg.as_real(r) for r in isolate_real_roots(IntPoly(list(c)))]


def test_compare_algebraic_numbers():
    (ms2, s2) = _roots(-2, 0, 1)
    (ms3, s3) = _roots(-3, 0, 1)
    assert alg.compare(s2, s3) == -1 and alg.compare(s3, s2) == 1
    assert alg.compare(ms3, ms2) == -1
    assert alg.compare(s2, Fraction(7, 5)) == 1 and alg.compare(s2, Fraction(3, 2)) == -1
    # the same number from different witnesses
    (_, _, r) = _roots(0, -2, 0, 1)
    assert alg.compare(r, s2) == 0 and alg.same_root(r, s2)


def test_rational_between_and_is_root_of():
    (_, s2) = _roots(-2, 0, 1)
    m = alg.rational_between(Fraction(1), s2)
    assert 1 < m and alg.compare(s2, m) == 1
    assert alg.is_root_of(s2, IntPoly([-4, 0, 0, 0, 1]))
    assert not alg.is_root_of(s2, IntPoly([-3, 0, 1]))


def test_interval_arithmetic():
    assert alg.i_mul((Fraction(-1), Fraction(2)), (Fraction(3), Fraction(4))) == (-4, 8)
    assert alg.i_div((Fraction(1), Fraction(2)), (Fraction(-1), Fraction(1))) is None
    lo, hi = alg.poly_enclosure([0, 0, 1], (Fraction(-1), Fraction(2)))
    assert lo <= 0 and hi >= 4


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=6).filter(lambda c: c[-1] != 0), st.fractions(-3, 3))
def test_enclosure_contains_value(coeffs, x):
    w = Fraction(1, 7)
    lo, hi = alg.poly_enclosure(coeffs, (x - w, x + w))
    v = sum(c * x**i for i, c in enumerate(coeffs))
    assert lo <= v <= hi


def test_to_float_is_accurate():
    (_, s2) = _roots(-2, 0, 1)
    assert alg.to_float(s2) == 2**0.5


def test_run_config_validation(tmp_path):
    assert RunConfig().scan_depth(2) == 12
    assert RunConfig(max_iterate_degree=2000).scan_depth(3) == 6
    assert RunConfig(scan_K=3).scan_depth(2) == 3
    with pytest.raises(ValueError):
        RunConfig(refine_depth=0)
    with pytest.raises(ValueError):
        RunConfig(output_format="xml")
    p = tmp_path / "c.cfg"
    p.write_text("max_iterate_degree=100\noutput_format = csv\n")
    cfg = RunConfig.from_file(p, threads=2)
    assert (cfg.max_iterate_degree, cfg.output_format, cfg.threads) == (100, "csv", 2)
