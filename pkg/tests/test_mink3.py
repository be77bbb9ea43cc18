import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minkpoly import mink3
from minkpoly.errors import NotTimelikeFuture
from minkpoly.mink3 import Cone

coord = st.floats(-5, 5, allow_nan=False)
vec = st.tuples(coord, coord, coord).map(np.array)


def test_dot_examples():
    assert mink3.dot([0, 0, 1], [0, 0, 1]) == 1
    assert mink3.dot([1, 0, 0], [0, 1, 0]) == 0
    assert mink3.dot([3, 4, 5], [3, 4, 5]) == 0


def test_cross_examples():
    np.testing.assert_array_equal(mink3.cross([1, 2, 3], [1, 2, 3]), [0, 0, 0])
    np.testing.assert_array_equal(mink3.cross([1, 0, 0], [0, 1, 0]), [0, 0, 1])
    np.testing.assert_array_equal(mink3.cross([0, 0, 1], [1, 0, 0]), [0, -1, 0])


@pytest.mark.parametrize(
    "v, cone, norm",
    [
        ((0, 0, -2), Cone.TIMELIKE_PAST, 2.0),
        ((5, 0, 3), Cone.SPACELIKE, 4.0),
        ((1, 0, 1), Cone.LIGHTLIKE, 0.0),
        ((0, 0, 3), Cone.TIMELIKE_FUTURE, 3.0),
    ],
)
def test_classify(v, cone, norm):
    got, n = mink3.classify(np.array(v, dtype=float))
    assert got is cone
    assert n == pytest.approx(norm)


def test_su11_map_examples():
    np.testing.assert_allclose(mink3.to_su11([0, 0, 1]), 0.5 * np.array([[-1j, 0], [0, 1j]]))
    np.testing.assert_allclose(mink3.to_su11([0, 0, 0]), np.zeros((2, 2)))
    np.testing.assert_allclose(mink3.to_su11([1, 0, 0]), 0.5 * np.array([[0, 1], [1, 0]]))


@given(vec)
def test_su11_shape(a):
    m = mink3.to_su11(a)
    assert m[0, 0].real == 0 and m[0, 0] == -m[1, 1]
    assert m[0, 1] == np.conj(m[1, 0])
    np.testing.assert_allclose(mink3.from_su11(m), a, atol=1e-15)


@settings(max_examples=200)
@given(vec, vec, vec)
def test_identities(a, b, c):
    dot, cross = mink3.dot, mink3.cross
    scale = 1 + np.abs([a, b, c]).max() ** 3
    np.testing.assert_array_equal(cross(a, b), -cross(b, a))
    jac = cross(cross(a, b), c) + cross(cross(b, c), a) + cross(cross(c, a), b)
    assert np.abs(jac).max() <= 1e-13 * scale
    bac = cross(a, cross(b, c)) - (b * dot(a, c) - c * dot(a, b))
    assert np.abs(bac).max() <= 1e-13 * scale
    assert abs(dot(a, cross(b, c)) - mink3.det3(a, b, c)) <= 1e-13 * scale


@given(vec, vec)
def test_lie_morphism_and_pairing(a, b):
    A, B = mink3.to_su11(a), mink3.to_su11(b)
    scale = 1 + np.abs([a, b]).max() ** 2
    assert np.abs(mink3.to_su11(mink3.cross(a, b)) - (A @ B - B @ A)).max() <= 1e-14 * scale
    assert abs(mink3.dot(a, b) + 2 * np.trace(A @ B).real) <= 1e-14 * scale


def test_rotation_quarter_turn():
    g = mink3.rotation(np.pi / 2)
    np.testing.assert_allclose(mink3.ad_action(g, [1.0, 0.0, 2.0]), [0.0, 1.0, 2.0], atol=1e-15)
    np.testing.assert_allclose(mink3.ad_action(mink3.SU11.identity(), [1, 2, 3]), [1, 2, 3])


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1), vec, vec)
def test_isometry_and_equivariance(seed, a, b):
    g = mink3.random_su11(np.random.default_rng(seed), rho_max=3.0)
    assert g.pseudo_det == pytest.approx(1.0, abs=1e-12)
    ga, gb = mink3.ad_action(g, a), mink3.ad_action(g, b)
    scale = 1 + np.abs(ga).max() * np.abs(gb).max()
    assert abs(mink3.dot(ga, gb) - mink3.dot(a, b)) <= 1e-12 * scale
    lhs = mink3.ad_action(g, mink3.cross(a, b))
    assert np.abs(lhs - mink3.cross(ga, gb)).max() <= 1e-12 * scale


def test_boost_to_t_axis():
    g = mink3.boost_to_t_axis([3.0, 0.0, 5.0])
    np.testing.assert_allclose(mink3.ad_action(g, [3.0, 0.0, 5.0]), [0, 0, 4], atol=1e-14)
    np.testing.assert_allclose(mink3.boost_to_t_axis([0, 0, 5]).matrix, np.eye(2))
    with pytest.raises(NotTimelikeFuture):
        mink3.boost_to_t_axis([0, 0, -1])
    with pytest.raises(NotTimelikeFuture):
        mink3.boost_to_t_axis([2, 0, 1])


def test_random_su11_determinism():
    g1 = mink3.random_su11(np.random.default_rng(5))
    g2 = mink3.random_su11(np.random.default_rng(5))
    g3 = mink3.random_su11(np.random.default_rng(6))
    assert g1 == g2
    assert g1 != g3


def test_group_law(rng):
    g, h = mink3.random_su11(rng), mink3.random_su11(rng)
    a = rng.normal(size=3)
    np.testing.assert_allclose(
        mink3.ad_action(g @ h, a), mink3.ad_action(g, mink3.ad_action(h, a)), atol=1e-12
    )
    np.testing.assert_allclose(mink3.ad_action(g.inverse(), mink3.ad_action(g, a)), a, atol=1e-12)
