from __future__ import annotations

from math import factorial, prod

import pytest
from hypothesis import given, strategies as st

from hhverify.cremona import (
    ANTICANONICAL_CUBIC,
    CONIC_THROUGH_FIVE,
    LINE_THROUGH_TWO,
    Catalog,
    CurveClass,
    DimensionMismatch,
    NegCurveClass,
    classify_empty_by_base_overload,
    classify_special_by_neg_curve,
    cremona_reduce,
    cremona_step,
    default_catalog,
    enumerate_neg_curves,
    intersect,
    is_standard,
    reduces_to_line,
    signed_virtual_dimension,
    split_chain,
    subtract,
)
from hhverify.linsys import LinearSystem, expected_dimension, virtual_dimension

L = LinearSystem.of


def test_intersection_examples():
    assert intersect(L(2, 2, 2), CurveClass(1, (1, 1))) == -2
    assert intersect(L(3, 2, *[1] * 7), CurveClass(1, (1, 1) + (0,) * 6)) == 0
    quartic = CurveClass(4, (2, 2, 2, 1, 1, 1, 1, 1))
    assert intersect(LinearSystem.from_groups(7, [(2, 4), (3, 4)]), quartic) == -1
    with pytest.raises(DimensionMismatch):
        intersect(L(2, 2, 2), CurveClass(1, (1, 1, 1)))


def test_low_degree_classes():
    assert enumerate_neg_curves(20, 1) == [LINE_THROUGH_TWO]
    assert [c for c in enumerate_neg_curves(20, 2) if c.e == 2] == [CONIC_THROUGH_FIVE]
    assert NegCurveClass(4, (2, 2, 2, 1, 1, 1, 1, 1)) in enumerate_neg_curves(20, 4)
    assert NegCurveClass(3, (2, 1, 1, 1, 1, 1, 1)) in enumerate_neg_curves(20, 3)
    assert NegCurveClass(6, (3, 2, 2, 2, 2, 2, 2, 2)) in enumerate_neg_curves(20, 6)
    with pytest.raises(ValueError):
        NegCurveClass(2, (1, 1, 1, 1))


def test_eight_point_classes():
    # the exceptional curves on a degree-one del Pezzo surface other than the E_i
    # classes are stored up to permutation; count labelled placements
    labelled = 0
    for c in enumerate_neg_curves(8, 13):
        n = c.n + (0,) * (8 - len(c.n))
        labelled += factorial(8) // prod(factorial(n.count(v)) for v in set(n))
    assert labelled == 240 - 8


def test_catalog_fixture_is_current(fixtures_dir):
    text = (fixtures_dir / "catalog_e13.txt").read_text()
    assert text == default_catalog().dumps()
    assert Catalog.parse(text) == list(default_catalog().classes)


def test_catalog_classes_are_valid():
    for c in default_catalog():
        assert 3 * c.e - sum(c.n) == 1
        assert c.e * c.e - sum(x * x for x in c.n) == -1
        assert list(c.n) == sorted(c.n, reverse=True) and min(c.n) >= 1
        assert reduces_to_line(c)


def test_diophantine_solutions_that_are_not_curves_are_rejected():
    # (5; 3, 3, 1^8) solves both equations but meets the line through its two
    # triple points negatively, so it is reducible
    fake = CurveClass(5, (3, 3) + (1,) * 8)
    assert fake.canonical_degree == 1 and fake.self_intersection == -1
    assert not reduces_to_line(fake)
    assert all(c.n != fake.n for c in enumerate_neg_curves(20, 5))
    assert reduces_to_line(CurveClass(4, (3,) + (1,) * 8))


def test_cremona_examples():
    st_ = cremona_step(LinearSystem.from_groups(17, [(2, 1), (5, 7), (6, 3)]))
    assert st_.s == 1 and st_.after == LinearSystem.from_groups(16, [(2, 1), (5, 10)]) and st_.clamped == 0
    st_ = cremona_step(L(2, 2, 2))
    assert st_.s == 2 and st_.after == LinearSystem(0, ()) and st_.clamped == 2
    st_ = cremona_step(L(5, 3, 2, 2, 2, 2, 2))
    assert st_.s == 2 and st_.after == L(3, 2, 2, 2, 1)
    final, steps = cremona_reduce(L(5, 3, 2, 2, 2, 2, 2))
    assert steps[0].after == L(3, 2, 2, 2, 1)
    assert final is not None and is_standard(final) or final is None


small = st.builds(lambda d, ms: LinearSystem(d, tuple(ms)), st.integers(0, 14), st.lists(st.integers(1, 6), max_size=10))


@given(small)
def test_unclamped_step_preserves_virtual_dimension(sys):
    s = cremona_step(sys)
    if s.s > 0 and s.after is not None and s.clamped == 0:
        assert virtual_dimension(s.after) == virtual_dimension(sys)


@given(small)
def test_signed_step_preserves_virtual_dimension(sys):
    ms = list(sys.mults) + [0, 0, 0]
    s = ms[0] + ms[1] + ms[2] - sys.d
    new = [ms[0] - s, ms[1] - s, ms[2] - s] + ms[3:]
    assert signed_virtual_dimension(sys.d - s, new) == virtual_dimension(sys)


@given(st.integers(1, 29), st.lists(st.integers(1, 7), min_size=1, max_size=16))
def test_forced_curves_need_a_heavy_point(d, ms):
    sys = LinearSystem(d, tuple(ms))
    if default_catalog().forcing(sys):
        assert d < 3 * sys.max_mult


def test_speciality_examples():
    cert = classify_special_by_neg_curve(L(2, 2, 2))
    assert cert is not None and cert.curve == LINE_THROUGH_TWO and cert.sigma == 2
    assert expected_dimension(cert.witness) > expected_dimension(L(2, 2, 2))
    assert classify_special_by_neg_curve(L(1, 1)) is None
    cert = classify_special_by_neg_curve(L(4, 2, 2, 2, 2, 2))
    assert cert.curve == CONIC_THROUGH_FIVE and cert.sigma == 2 and cert.residual == LinearSystem(0, ())


def test_sigma_only_variant():
    # L_4(3, 3): the line through the triple points is forced twice but the
    # residual L_2(1, 1) keeps the expected count, so no gain is claimed
    sys = L(4, 3, 3)
    assert classify_special_by_neg_curve(sys, require_residual_gain=False) is not None


def test_overload_examples():
    cert = classify_empty_by_base_overload(LinearSystem.from_groups(18, [(2, 1), (6, 9)]))
    assert cert is not None
    cert = classify_empty_by_base_overload(LinearSystem.from_groups(21, [(2, 1), (7, 9)]))
    assert cert is not None and any(s.curve == ANTICANONICAL_CUBIC for s in cert.chain)
    assert cert.to_json()["reconstruction"] is True
    assert classify_empty_by_base_overload(L(1, 1, 1)) is None


def test_split_chain_keeps_dimension_bookkeeping():
    sys = L(6, 4, 4)
    chain, final = split_chain(sys, default_catalog())
    assert chain[0].curve == LINE_THROUGH_TWO and chain[0].sigma == 2
    assert final == L(4, 2, 2) or final is not None
    assert subtract(L(1, 1, 1), CurveClass(2, (1,))) is None
