import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nrgg import ArgumentError, Norm, distance, unit_ball_volume
from nrgg.geometry import dist_block, min_set_distance

NORMS = [Norm.L1, Norm.L2, Norm.LINF]


def test_norm_parse():
    assert Norm.parse("l2") is Norm.L2
    assert Norm.parse(" LInf ") is Norm.LINF
    with pytest.raises(ArgumentError):
        Norm.parse("l3")


def test_distance_examples():
    assert distance([0, 0], [3, 4], Norm.L2) == 5.0
    assert distance([0, 0], [3, 4], Norm.L1) == 7.0
    assert distance([0, 0], [3, 4], Norm.LINF) == 4.0


def test_unit_ball_volumes_closed_forms():
    assert unit_ball_volume(1, Norm.L2) == pytest.approx(2.0, rel=1e-15)
    assert unit_ball_volume(2, Norm.L2) == pytest.approx(math.pi, rel=1e-15)
    assert unit_ball_volume(3, Norm.L2) == pytest.approx(4 * math.pi / 3, rel=1e-15)
    assert unit_ball_volume(2, Norm.L1) == 2.0
    assert unit_ball_volume(3, Norm.L1) == pytest.approx(8 / 6, rel=1e-15)
    for d in (1, 2, 3, 4):
        assert unit_ball_volume(d, Norm.LINF) == 2.0 ** d


def test_unit_ball_volume_rejects_bad_dim():
    with pytest.raises(ArgumentError):
        unit_ball_volume(0)
    with pytest.raises(ArgumentError):
        unit_ball_volume(2.5)


coords = st.floats(min_value=-10, max_value=10, allow_nan=False)
points3 = st.tuples(coords, coords, coords)


@given(points3, points3, st.sampled_from(NORMS))
def test_distance_is_a_metric_sample(x, y, norm):
    dxy = distance(x, y, norm)
    assert dxy >= 0
    assert dxy == distance(y, x, norm)
    assert distance(x, x, norm) == 0


@given(points3, points3, points3, st.sampled_from(NORMS))
def test_triangle_inequality(x, y, z, norm):
    assert distance(x, z, norm) <= distance(x, y, norm) + distance(y, z, norm) + 1e-12


@given(points3, points3)
def test_norm_ordering(x, y):
    # Linf <= L2 <= L1 pointwise
    assert distance(x, y, Norm.LINF) <= distance(x, y, Norm.L2) + 1e-12
    assert distance(x, y, Norm.L2) <= distance(x, y, Norm.L1) + 1e-12


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=6),
       st.integers(min_value=1, max_value=3), st.sampled_from(NORMS),
       st.integers(min_value=0, max_value=2**32))
def test_dist_block_matches_scalar(m, k, d, norm, seed):
    rng = np.random.default_rng(seed)
    A = rng.uniform(-5, 5, size=(m, d))
    B = rng.uniform(-5, 5, size=(k, d))
    M = dist_block(A, B, norm)
    for i in range(m):
        for j in range(k):
            assert M[i, j] == distance(A[i], B[j], norm)


def test_min_set_distance():
    A = np.array([[0.0, 0.0], [1.0, 0.0]])
    B = np.array([[0.0, 2.0], [5.0, 5.0]])
    assert min_set_distance(A, B, Norm.L2) == 2.0
    with pytest.raises(ArgumentError):
        min_set_distance(np.empty((0, 2)), B, Norm.L2)
