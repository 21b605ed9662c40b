import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tetrablock import core
from tetrablock.core import (
    MAX_N,
    MAX_N_ARRAY,
    Coord3,
    PyramidShape,
    box_map,
    box_map_array,
    g_map,
    g_map_array,
    rank3,
    rank3_array,
    tetra,
    tetra_array,
    tri,
    tri_array,
    unrank2,
    unrank2_array,
    unrank_layer,
    unrank_layer_array,
)
from tetrablock.errors import DomainError, RankOutOfRangeError

from oracles import layer_by_bisection, pyramid_points, row_by_bisection, tetra_sum, tri_sum


@pytest.mark.parametrize("m, expected", [(0, 0), (4, 10), (100, 5050)])
def test_tri(m, expected):
    assert tri(m) == expected == tri_sum(m)


@pytest.mark.parametrize("m, expected", [(0, 0), (2, 4), (128, 357760)])
def test_tetra(m, expected):
    assert tetra(m) == expected == tetra_sum(m)


def test_small_numbers_match_summation():
    for m in range(60):
        assert tri(m) == tri_sum(m)
        assert tetra(m) == tetra_sum(m)


def test_overflow_is_an_error():
    with pytest.raises(OverflowError):
        tri(2**33)
    with pytest.raises(OverflowError):
        tetra(MAX_N + 2)
    assert tetra(MAX_N + 1) <= core.UINT64_MAX
    with pytest.raises(OverflowError):
        PyramidShape(MAX_N + 1)


def test_negative_arguments():
    with pytest.raises(DomainError):
        tri(-1)
    with pytest.raises(DomainError):
        tetra(-1)
    with pytest.raises(DomainError):
        unrank_layer(-1)


def test_shape():
    s = PyramidShape(4)
    assert s.tn == 20
    assert s.tn_2d == 10
    assert [s.layer_size(z) for z in range(4)] == [1, 3, 6, 10]
    assert sum(s.layer_size(z) for z in range(4)) == s.tn


@pytest.mark.parametrize("c, expected", [((0, 0, 0), 0), ((0, 0, 2), 4), ((1, 2, 3), 14)])
def test_rank3_examples(c, expected):
    assert rank3(c, PyramidShape(4)) == expected
    assert pyramid_points(4).index(c) == expected


@pytest.mark.parametrize("c", [(1, 0, 0), (0, 2, 1), (0, 0, 4), (-1, 0, 0)])
def test_rank3_rejects_outside(c):
    with pytest.raises(DomainError):
        rank3(c, PyramidShape(4))


@pytest.mark.parametrize("lam, z", [(0, 0), (4, 2), (9, 2)])
def test_unrank_layer_examples(lam, z):
    assert unrank_layer(lam) == z


def test_unrank_layer_scan():
    z = 0
    for lam in range(5000):
        while tetra_sum(z + 1) <= lam:
            z += 1
        assert unrank_layer(lam) == z


@pytest.mark.parametrize("lam, xy", [(0, (0, 0)), (3, (0, 2)), (5, (2, 2))])
def test_unrank2_examples(lam, xy):
    assert unrank2(lam) == xy


def test_unrank2_enumeration():
    rows = [(x, y) for y in range(80) for x in range(y + 1)]
    for lam, xy in enumerate(rows):
        assert unrank2(lam) == xy


@pytest.mark.parametrize("lam, c", [(0, (0, 0, 0)), (7, (0, 2, 2)), (19, (3, 3, 3))])
def test_g_map_examples(lam, c):
    assert g_map(lam, PyramidShape(4)) == c
    assert pyramid_points(4)[lam] == c


def test_g_map_out_of_range():
    with pytest.raises(RankOutOfRangeError):
        g_map(20, PyramidShape(4))
    with pytest.raises(RankOutOfRangeError):
        g_map(0, PyramidShape(0))


@pytest.mark.parametrize(
    "linear, expected",
    [(0, (0, 0, 0, True)), (1, (1, 0, 0, False)), (21, (1, 1, 1, True))],
)
def test_box_map_examples(linear, expected):
    assert box_map(linear, 4) == expected


@pytest.mark.parametrize("n", range(0, 41))
def test_bijection_each_small_n(n):
    shape = PyramidShape(n)
    image = [g_map(lam, shape) for lam in range(shape.tn)]
    assert image == pyramid_points(n)
    assert [rank3(c, shape) for c in image] == list(range(shape.tn))


@pytest.mark.parametrize("side", range(1, 21))
def test_box_valid_count(side):
    assert sum(box_map(i, side).valid for i in range(side**3)) == tetra(side)


def test_monotone_in_lexicographic_order():
    shape = PyramidShape(30)
    prev = None
    for lam in range(shape.tn):
        x, y, z = g_map(lam, shape)
        if prev is not None:
            assert (z, y, x) > prev
        prev = (z, y, x)


@given(st.integers(1, MAX_N), st.data())
def test_round_trip_random_rank(n, data):
    shape = PyramidShape(n)
    lam = data.draw(st.integers(0, shape.tn - 1))
    c = g_map(lam, shape)
    assert rank3(c, shape) == lam
    z = layer_by_bisection(lam)
    assert c.z == z
    assert c.y == row_by_bisection(lam - tetra(z))


@given(st.integers(0, MAX_N - 1), st.data())
def test_round_trip_random_coord(z, data):
    y = data.draw(st.integers(0, z))
    x = data.draw(st.integers(0, y))
    shape = PyramidShape(MAX_N)
    assert g_map(rank3((x, y, z), shape), shape) == Coord3(x, y, z)


@pytest.mark.parametrize("z", [1, 2, 3, 10**3, 10**6, 2 * 10**6, 3 * 10**6, MAX_N_ARRAY - 5, MAX_N - 1])
def test_layer_boundaries(z):
    t = tetra(z)
    assert unrank_layer(t - 1) == z - 1
    assert unrank_layer(t) == z
    assert unrank_layer(t + 1) == z
    assert unrank_layer(tetra(z + 1) - 1) == z


@pytest.mark.parametrize("y", [1, 2, 10**4, 10**6, 4 * 10**6, MAX_N])
def test_row_boundaries(y):
    t = tri(y)
    assert unrank2(t - 1) == (y - 1, y - 1)
    assert unrank2(t) == (0, y)
    assert unrank2(t + y) == (y, y)


def test_largest_supported_rank():
    shape = PyramidShape(MAX_N)
    assert g_map(shape.tn - 1, shape) == (MAX_N - 1, MAX_N - 1, MAX_N - 1)


def test_bad_root_guess_is_a_hard_error(monkeypatch):
    real = core._layer_root
    monkeypatch.setattr(core, "_layer_root", lambda lam: real(lam) + 5)
    with pytest.raises(ArithmeticError):
        unrank_layer(10**9)


def test_small_guess_errors_are_corrected(monkeypatch):
    real = core._layer_root
    monkeypatch.setattr(core, "_layer_root", lambda lam: real(lam) - 1.5)
    assert unrank_layer(10**9) == layer_by_bisection(10**9)


# numpy paths


def test_array_helpers_match_scalars():
    m = np.arange(0, 3000)
    assert tri_array(m).tolist() == [tri(int(v)) for v in m]
    assert tetra_array(m).tolist() == [tetra(int(v)) for v in m]
    big = np.array([MAX_N_ARRAY - 1, MAX_N_ARRAY - 2, MAX_N_ARRAY - 3])
    assert tetra_array(big).tolist() == [tetra(int(v)) for v in big]


def test_g_map_array_matches_scalar():
    rng = random.Random(3)
    shape = PyramidShape(MAX_N_ARRAY - 4)
    lams = [0, 1, 2, 3, 4] + [rng.randrange(shape.tn) for _ in range(3000)]
    x, y, z = g_map_array(lams)
    assert list(zip(x.tolist(), y.tolist(), z.tolist())) == [tuple(g_map(v, shape)) for v in lams]
    assert rank3_array(x, y, z).tolist() == lams


def test_array_paths_reject_huge_ranks():
    with pytest.raises(OverflowError):
        unrank_layer_array([tetra(MAX_N_ARRAY)])
    with pytest.raises(DomainError):
        unrank2_array([-1])


def test_box_map_array():
    side = 7
    lin = np.arange(side**3, dtype=np.int32)
    x, y, z, valid = box_map_array(lin, side)
    assert x.dtype == np.int32
    expected = [box_map(i, side) for i in range(side**3)]
    assert list(zip(x.tolist(), y.tolist(), z.tolist(), valid.tolist())) == [tuple(e) for e in expected]


@settings(max_examples=50)
@given(st.lists(st.integers(0, tetra(2 * 10**6) - 1), min_size=1, max_size=200))
def test_array_layers_against_bisection(lams):
    z = unrank_layer_array(lams)
    assert z.tolist() == [layer_by_bisection(v) for v in lams]
    lp = np.array(lams) - tetra_array(z)
    x, y = unrank2_array(lp)
    assert y.tolist() == [row_by_bisection(int(v)) for v in lp]
