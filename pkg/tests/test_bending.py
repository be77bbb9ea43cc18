import numpy as np
import pytest

from minkpoly import bending, mink3, polygon as pg
from minkpoly.errors import NotOnSphere, NotTangent


def test_symplectic_form():
    u = [0, 0, 1]
    assert bending.symplectic_form(u, [1, 0, 0], [0, 1, 0], 1.0) == pytest.approx(1.0)
    assert bending.symplectic_form(u, [0, 1, 0], [1, 0, 0], 1.0) == pytest.approx(-1.0)
    assert bending.symplectic_form(u, [1, 2, 0], [1, 2, 0], 1.0) == 0.0
    with pytest.raises(NotOnSphere):
        bending.symplectic_form([0, 0, 2], [1, 0, 0], [0, 1, 0], 1.0)
    with pytest.raises(NotTangent):
        bending.symplectic_form(u, [1, 0, 0.5], [0, 1, 0], 1.0)


def test_field_in_gauge(polys):
    for P in polys:
        for l in range(2, P.n - 1):
            G = pg.gauge_fix(P, l)
            d = pg.diagonals(G)[l]
            v = bending.bending_field(G, l)
            expect = d * np.column_stack([G.edges[:l, 1], -G.edges[:l, 0], np.zeros(l)])
            np.testing.assert_allclose(v[:l], expect, atol=1e-10 * (1 + np.abs(G.edges).max()))
            assert np.all(v[l:] == 0)


def test_field_tangent(polys):
    for P in polys:
        v = bending.bending_field(P, 2)
        scale = np.abs(P.edges).max() ** 3
        assert np.abs(mink3.dot(v, P.edges)).max() <= 1e-12 * scale


def test_field_zero_on_axis():
    np.testing.assert_array_equal(bending.bending_field(pg.witness(0), 2), 0)


def test_flow_time_zero(polys):
    P = polys[0]
    np.testing.assert_array_equal(bending.flow_numeric(P, 2, 0.0, 10).edges, P.edges)
    np.testing.assert_allclose(bending.flow_exact(P, 2, 0.0).edges, P.edges, atol=1e-12)


def test_period(polys):
    for P in polys:
        d = pg.diagonals(P)
        for l in range(2, P.n - 1):
            Q = bending.flow_exact(P, l, 2 * np.pi / d[l])
            np.testing.assert_allclose(pg.gauge_fix(Q, l).edges, pg.gauge_fix(P, l).edges, atol=1e-9)


def test_angle_shift(polys):
    for P in polys:
        aa = pg.action_angle(P)
        for l in range(2, P.n - 1):
            t = 0.37
            bb = pg.action_angle(bending.flow_exact(P, l, t))
            np.testing.assert_allclose(bb.d, aa.d, atol=1e-9)
            shift = np.zeros_like(aa.phi)
            shift[l - 2] = aa.d[l - 2] * t
            assert np.abs(pg.wrap_angle(bb.phi - aa.phi - shift)).max() < 1e-9


def test_flow_matches_field(polys):
    P = polys[2]
    h = 1e-6
    fd = (bending.flow_exact(P, 2, h).edges - bending.flow_exact(P, 2, -h).edges) / (2 * h)
    np.testing.assert_allclose(fd, bending.bending_field(P, 2), rtol=1e-6, atol=1e-6)


def test_numeric_converges(polys):
    P = polys[5]
    T = 2 * np.pi / pg.diagonals(P)[2]
    E = bending.flow_exact(P, 2, T).edges
    errs = [np.abs(bending.flow_numeric(P, 2, T, k).edges - E).max() for k in (200, 400)]
    assert errs[1] < errs[0] / 10
    assert np.abs(bending.flow_numeric(P, 2, T, 10_000).edges - E).max() < 1e-6


def test_numeric_stays_on_spheres(polys):
    P = polys[7]
    Q = bending.flow_numeric(P, 2, 1.0, 50)
    np.testing.assert_allclose(mink3.norm(Q.edges), P.spec.r, rtol=1e-13)


def test_brackets(polys):
    for P in polys:
        for i in range(2, P.n - 1):
            assert bending.poisson_bracket(P, i, i) == 0.0
            for j in range(2, P.n - 1):
                assert abs(bending.poisson_bracket(P, i, j)) < 1e-6
                assert abs(bending.poisson_bracket(P, i, j, mode="fd")) < 1e-6


def test_bracket_sign_calibration(polys):
    """{d_l^2/2, g} is the derivative of g along flow_exact."""
    P = polys[9]
    l = 2
    g = lambda Q: float(Q.edges[0, 0] + 2 * Q.edges[3, 2] - Q.edges[1, 1])  # noqa: E731
    grad_g = np.zeros_like(P.edges)
    # <grad, v> = g(v) under the Minkowski pairing (-x, -y, +t)
    grad_g[0, 0] = -1.0
    grad_g[3, 2] = 2.0
    grad_g[1, 1] = 1.0
    d = pg.diagonals(P)[l]
    grad_h = d * bending.diagonal_gradient(P, l)
    lhs = bending.lie_poisson(P.edges, grad_h, grad_g)
    rhs = bending.directional_derivative(P, l, g, h=1e-5, unit_speed=False)
    assert lhs == pytest.approx(rhs, rel=1e-6)


def test_bracket_with_function_of_itself(polys):
    P = polys[1]
    grad = bending.diagonal_gradient(P, 2)
    assert abs(bending.lie_poisson(P.edges, grad, 2 * pg.diagonals(P)[2] * grad)) < 1e-12


def test_index_checks(polys):
    with pytest.raises(IndexError):
        bending.flow_exact(polys[0], 1, 1.0)
    with pytest.raises(IndexError):
        bending.bending_field(polys[0], polys[0].n - 1)
    with pytest.raises(ValueError):
        bending.flow_numeric(polys[0], 2, 1.0, 0)


def test_flow_trace_rows(polys):
    P = polys[4]
    rows = bending.flow_trace(P, 2, 1.0, 5)
    assert [k for k, _, _ in rows] == list(range(5))
    assert rows[0][2] is P
    num = bending.flow_trace(P, 2, 1.0, 5, mode="numeric", integrator_steps=400)
    assert np.abs(num[-1][2].edges - rows[-1][2].edges).max() < 1e-6
