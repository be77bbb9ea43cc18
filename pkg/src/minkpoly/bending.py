"""Bending flows along the diagonals and the Lie-Poisson structure.

The Hamiltonian field of the diagonal d_l attaches s_l x u_k to the edges
k <= l and zero to the rest.  In the gauge where s_l = (0, 0, d_l) this is
d_l (y_k, -x_k, 0): the first l edges turn *clockwise* (seen from +t) about
the t-axis with angular speed d_l, so the flow has period 2 pi / d_l and the
dihedral angle phi_l grows at rate d_l.

The field has speed d_l, i.e. it is the Lie-Poisson field of d_l^2 / 2.  The
bracket below uses the gradient of d_l itself; the vanishing of {d_i, d_j} is
insensitive to that choice.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from . import mink3
from .errors import NotOnSphere, NotTangent
from .polygon import Polygon, gauge_element, partial_sums

__all__ = [
    "symplectic_form",
    "bending_field",
    "flow_exact",
    "flow_numeric",
    "lie_poisson",
    "diagonal_gradient",
    "poisson_bracket",
    "directional_derivative",
    "flow_trace",
    "BRACKET_SIGN",
]

# {f, g} = BRACKET_SIGN * sum_k u_k . (grad_k f x grad_k g); with -1, {f, g} is
# the derivative of g along the field grad f x u (the orientation of the
# bending field), so {d_l^2/2, g} = d/dt g along flow_exact.
BRACKET_SIGN = -1.0


def symplectic_form(u, v1, v2, R: float, tol: float = 1e-9) -> float:
    """omega_u(v1, v2) = u . (v1 x v2) / R^2 on the pseudosphere of radius R."""
    u, v1, v2 = (np.asarray(x, dtype=float) for x in (u, v1, v2))
    if abs(mink3.dot(u, u) - R * R) > tol:
        raise NotOnSphere(f"<u,u> = {mink3.dot(u, u)!r}, expected {R * R!r}")
    for name, v in (("v1", v1), ("v2", v2)):
        if abs(mink3.dot(u, v)) > 1e-10 * max(1.0, float(np.abs(u).max() * np.abs(v).max())):
            raise NotTangent(name)
    return float(mink3.dot(u, mink3.cross(v1, v2)) / (R * R))


def _check_index(P: Polygon, l: int) -> None:
    if not 2 <= l <= P.n - 2:
        raise IndexError(f"diagonal index {l} outside 2..{P.n - 2}")


def _field(edges: np.ndarray, l: int) -> np.ndarray:
    s = edges[:l].sum(axis=0)
    out = np.zeros_like(edges)
    out[:l] = mink3.cross(s, edges[:l])
    return out


def bending_field(P: Polygon, l: int) -> np.ndarray:
    """(s_l x u_1, ..., s_l x u_l, 0, ..., 0) as an (n, 3) array."""
    _check_index(P, l)
    return _field(P.edges, l)


def flow_exact(P: Polygon, l: int, time: float, regauge: bool = True) -> Polygon:
    """Rotate u_1..u_l rigidly about s_l by the angle d_l * time.

    With ``regauge=False`` the result is left in the gauge of
    :func:`~minkpoly.polygon.gauge_fix` at l.
    """
    _check_index(P, l)
    g = gauge_element(P, l)
    fixed = mink3.ad_action(g, P.edges)
    d = fixed[:l].sum(axis=0)[2]
    # clockwise: the field d (y, -x, 0) turns the plane by -d * time
    fixed[:l] = mink3.ad_action(mink3.rotation(-d * time), fixed[:l])
    if regauge:
        fixed = mink3.ad_action(g.inverse(), fixed)
    return Polygon(P.spec, fixed)


def flow_numeric(P: Polygon, l: int, time: float, steps: int) -> Polygon:
    """RK4 integration of the bending field, projecting back onto the
    pseudospheres (rescaling each edge to its length) after every step."""
    _check_index(P, l)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    r = np.asarray(P.spec.r)[:l, None]
    u = P.edges[:l].copy()
    h = time / steps

    def f(x):
        return mink3.cross(x.sum(axis=0), x)

    for _ in range(steps):
        k1 = f(u)
        k2 = f(u + 0.5 * h * k1)
        k3 = f(u + 0.5 * h * k2)
        k4 = f(u + h * k3)
        u = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        u *= r / np.sqrt(mink3.dot(u, u))[:, None]
    edges = P.edges.copy()
    edges[:l] = u
    return Polygon(P.spec, edges)


def lie_poisson(edges, grad_f, grad_g) -> float:
    """BRACKET_SIGN * sum_k u_k . (grad_k f x grad_k g).

    Gradients are taken with respect to the Minkowski pairing
    (df(v) = <grad f, v>) and passed as (n, 3) arrays.
    """
    edges = np.asarray(edges, dtype=float)
    return float(BRACKET_SIGN * np.sum(mink3.dot(edges, mink3.cross(grad_f, grad_g))))


def diagonal_gradient(P: Polygon, m: int) -> np.ndarray:
    """Gradient of d_m: s_m / d_m on the first m edges, zero elsewhere."""
    s = partial_sums(P)[m - 1]
    grad = np.zeros_like(P.edges)
    grad[:m] = s / np.sqrt(mink3.dot(s, s))
    return grad


def poisson_bracket(
    P: Polygon, i: int, j: int, mode: str = "analytic", h: float = 1e-5
) -> float:
    """{d_i, d_j} at P.

    ``mode="analytic"`` evaluates the Lie-Poisson formula with exact
    gradients; ``mode="fd"`` differentiates d_j along the flow of d_i
    (``flow_exact`` run for time t / d_i) with a central difference of step h.
    """
    _check_index(P, i)
    _check_index(P, j)
    if i == j:
        return 0.0
    if mode == "analytic":
        return lie_poisson(P.edges, diagonal_gradient(P, i), diagonal_gradient(P, j))
    if mode == "fd":
        return directional_derivative(P, i, lambda Q: _diag(Q, j), h)
    raise ValueError(f"unknown mode {mode!r}")


def _diag(P: Polygon, m: int) -> float:
    s = P.edges[:m].sum(axis=0)
    return float(np.sqrt(mink3.dot(s, s)))


def directional_derivative(
    P: Polygon, l: int, func: Callable[[Polygon], float], h: float = 1e-5,
    unit_speed: bool = True,
) -> float:
    """Central difference of ``func`` along the bending flow of diagonal l.

    With ``unit_speed`` the flow is that of d_l (time rescaled by 1/d_l);
    otherwise it is the field of d_l^2/2 as implemented by ``flow_exact``.
    """
    scale = 1.0 / _diag(P, l) if unit_speed else 1.0
    fp = func(flow_exact(P, l, h * scale))
    fm = func(flow_exact(P, l, -h * scale))
    return (fp - fm) / (2.0 * h)


def flow_trace(
    P: Polygon, l: int, time: float, steps: int, mode: str = "exact",
    integrator_steps: Optional[int] = None,
):
    """Sample the flow at ``steps`` equally spaced times in [0, time].

    Returns the list of (step, t, polygon).  In numeric mode the integrator
    advances between samples with ``integrator_steps`` total RK4 steps
    (default 10**4) spread evenly.
    """
    times = np.linspace(0.0, time, steps) if steps > 1 else np.array([0.0])
    out = []
    if mode == "exact":
        for k, t in enumerate(times):
            out.append((k, float(t), flow_exact(P, l, float(t)) if t else P))
        return out
    if mode != "numeric":
        raise ValueError(f"unknown mode {mode!r}")
    total = integrator_steps or 10_000
    per = max(1, total // max(1, steps - 1))
    Q = P
    out.append((0, 0.0, P))
    for k in range(1, len(times)):
        Q = flow_numeric(Q, l, float(times[k] - times[k - 1]), per)
        out.append((k, float(times[k]), Q))
    return out
