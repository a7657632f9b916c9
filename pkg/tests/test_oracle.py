from __future__ import annotations

import random
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hhverify.linsys import LinearSystem, expected_dimension
from hhverify.oracle import (
    MERSENNE31,
    FieldTooSmall,
    OracleConfig,
    condition_matrix,
    dimension,
    rank_mod_p,
    row_count,
    sample_points,
    speciality_witness,
)

L = LinearSystem.of


def test_rank_mod_p_small():
    p = 7
    assert rank_mod_p(np.array([[1, 2], [2, 4]]), p) == 1
    assert rank_mod_p(np.array([[1, 2], [3, 4]]), p) == 2
    assert rank_mod_p(np.array([[7, 14]]), p) == 0
    assert rank_mod_p(np.zeros((0, 3), dtype=np.int64), p) == 0


@given(st.lists(st.lists(st.integers(0, 100), min_size=4, max_size=4), min_size=1, max_size=6))
def test_rank_matches_rational_elimination(rows):
    # Hadamard bounds every minor by 200^4 < p, so the ranks over Q and F_p agree
    from fractions import Fraction

    a = [[Fraction(x) for x in r] for r in rows]
    r = 0
    for c in range(4):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    assert rank_mod_p(np.array(rows), MERSENNE31) == r


def test_condition_matrix_shape_and_entries():
    m = condition_matrix(2, (2,), [(3, 5)], 101)
    assert m.shape == (3, 6)
    # columns x^i y^j ordered by j then i: 1, x, x^2, y, xy, y^2
    assert list(m[0]) == [1, 3, 9, 5, 15, 25]
    assert list(m[2]) == [0, 1, 6, 0, 5, 0]  # d/dx
    assert list(m[1]) == [0, 0, 0, 1, 3, 10]  # d/dy


@pytest.mark.parametrize(
    "sys, dim, gap",
    [
        (L(2, 2, 2), 0, 1),
        (L(1, 1, 1), 0, 0),
        (L(5, 3, 2, 2, 2, 2, 2), -1, 0),
        (L(4, 2, 2, 2, 2, 2), 0, 1),
        (L(3, *[1] * 9), 0, 0),
        (L(3, *[1] * 10), -1, 0),
    ],
)
def test_dimension_examples(sys, dim, gap):
    v = dimension(sys)
    assert v.dim == dim and v.specialityGap == gap and v.seedsAgreed
    assert v.prime == MERSENNE31 and v.seeds == (1, 2, 3)


def test_speciality_witness():
    assert speciality_witness(L(2, 2, 2))
    assert not speciality_witness(L(1, 1))
    assert speciality_witness(L(4, 2, 2, 2, 2, 2))


def test_row_count():
    for sys in (L(7, 3, 3, 2, 1), L(4, 4)):
        pts = sample_points(sys.k, np.random.default_rng(0), MERSENNE31)
        assert condition_matrix(sys.d, sys.mults, pts, MERSENNE31).shape[0] == row_count(sys)
        assert row_count(sys) == sum(comb(m + 1, 2) for m in sys.mults)


def test_small_field_is_refused():
    with pytest.raises(FieldTooSmall):
        dimension(L(12, 3), OracleConfig(prime=13))
    with pytest.raises(ValueError):
        OracleConfig(prime=2**31 + 11)


def test_general_position_sampling():
    pts = sample_points(6, np.random.default_rng(5), 101)
    assert len(set(pts)) == 6


def test_results_do_not_depend_on_call_order():
    a = dimension(L(9, 3, 3, 3, 3, 3, 2))
    dimension(L(5, 2, 2))
    assert dimension(L(9, 3, 3, 3, 3, 3, 2)) == a


def test_adding_a_simple_point_drops_dimension_by_one():
    rnd = random.Random(11)
    for _ in range(100):
        d = rnd.randint(1, 9)
        ms = [rnd.randint(1, 4) for _ in range(rnd.randint(0, 6))]
        base = dimension(LinearSystem(d, tuple(ms)))
        more = dimension(LinearSystem(d, tuple(ms + [1])))
        assert more.dim <= base.dim
        if base.dim > -1:
            assert more.dim == base.dim - 1


def test_seed_stability_on_small_systems():
    rnd = random.Random(3)
    for _ in range(40):
        d = rnd.randint(2, 10)
        sys = LinearSystem(d, tuple(rnd.randint(1, 4) for _ in range(rnd.randint(1, 8))))
        v = dimension(sys)
        assert v.seedsAgreed
        assert v.dim >= expected_dimension(sys)
