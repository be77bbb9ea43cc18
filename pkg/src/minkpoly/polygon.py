"""Closed polygons in Minkowski 3-space with p future and q past sides.

Indexing follows the usual polygon conventions: edges u_1..u_n are stored in
``Polygon.edges[0..n-1]``; the diagonal d_l joins vertex 1 to vertex l+1 and
is the Minkowski length of the partial sum s_l = u_1 + ... + u_l.
:func:`diagonals` returns an array of length n+1 so that ``d[l]`` is d_l,
including the conventions d_0 = 0 and d_n = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import mink3
from .errors import (
    DegenerateDihedral,
    EmptyPolytope,
    NonTimelikeDiagonal,
    NotClosed,
    OutsidePolytope,
    PolygonError,
    UnboundedNeedsDmax,
    WrongCone,
    WrongCount,
    WrongLength,
)
from .mink3 import SU11, Cone
from .polytope import build_polytope, contains

__all__ = [
    "PolygonSpec",
    "Polygon",
    "ActionAngle",
    "check_edges",
    "validate",
    "closure_residual",
    "partial_sums",
    "diagonals",
    "gauge_element",
    "gauge_fix",
    "action_angle",
    "dihedral_angles",
    "reconstruct",
    "sample_polygon",
    "is_generic",
    "witness",
    "VALIDATION_TOL",
]

VALIDATION_TOL = 1e-9
_CONSTRUCTION_TOL = 1e-12


@dataclass(frozen=True)
class PolygonSpec:
    p: int
    q: int
    r: tuple[float, ...]
    perimeter_two: bool = False

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(float(x) for x in self.r))
        if not (self.p >= self.q >= 1):
            raise ValueError(f"need p >= q >= 1, got p={self.p}, q={self.q}")
        if len(self.r) != self.p + self.q:
            raise ValueError(f"expected {self.p + self.q} side lengths, got {len(self.r)}")
        if self.p + self.q < 3:
            raise ValueError("polygons need at least three sides")
        if any(not x > 0 for x in self.r):
            raise ValueError("side lengths must be positive")
        if self.perimeter_two and abs(sum(self.r) - 2.0) > 1e-12:
            raise ValueError(f"perimeter is {sum(self.r)!r}, expected 2")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def signs(self) -> np.ndarray:
        """+1 for future sides, -1 for past sides."""
        return np.array([1.0] * self.p + [-1.0] * self.q)

    def normalized(self) -> "PolygonSpec":
        """Rescale r so that the perimeter is 2."""
        s = sum(self.r)
        return PolygonSpec(self.p, self.q, tuple(2.0 * x / s for x in self.r), True)

    def polytope(self):
        return build_polytope(self.p, self.q, self.r)


@dataclass(frozen=True, eq=False)
class Polygon:
    spec: PolygonSpec
    edges: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.spec.n


@dataclass(frozen=True)
class ActionAngle:
    """Diagonal lengths d_2..d_{n-2} and dihedral angles phi_2..phi_{n-2}."""

    d: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float).reshape(-1)
        phi = np.asarray(self.phi, dtype=float).reshape(-1)
        if d.shape != phi.shape:
            raise ValueError("d and phi must have the same length")
        if np.any(d <= 0):
            raise ValueError("diagonal lengths must be positive")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "phi", wrap_angle(phi))


def wrap_angle(phi):
    """Map angles into (-pi, pi]."""
    out = np.mod(np.asarray(phi, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    return np.where(out <= -np.pi, out + 2.0 * np.pi, out)


def closure_residual(edges) -> np.ndarray:
    return np.asarray(edges, dtype=float).reshape(-1, 3).sum(axis=0)


def check_edges(spec: PolygonSpec, edges, tol: float = VALIDATION_TOL) -> list[PolygonError]:
    """All invariant violations of ``edges`` as a polygon of type ``spec``."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 2 or edges.shape[1] != 3 or edges.shape[0] != spec.n:
        got = edges.shape[0] if edges.ndim == 2 else edges.size // 3
        return [WrongCount(spec.n, got)]
    problems: list[PolygonError] = []
    for i, (u, r) in enumerate(zip(edges, spec.r), start=1):
        want = Cone.TIMELIKE_FUTURE if i <= spec.p else Cone.TIMELIKE_PAST
        kind, m = mink3.classify(u)
        if kind is not want:
            problems.append(WrongCone(i, kind.value))
        elif abs(m - r) > tol:
            problems.append(WrongLength(i, m, r))
    res = closure_residual(edges)
    if np.max(np.abs(res)) > tol:
        problems.append(NotClosed(res))
    return problems


def validate(spec: PolygonSpec, edges, tol: float = VALIDATION_TOL) -> Polygon:
    """Build a Polygon, raising the first invariant violation found."""
    problems = check_edges(spec, edges, tol)
    if problems:
        raise problems[0]
    return Polygon(spec, np.array(edges, dtype=float))


def partial_sums(P: Polygon) -> np.ndarray:
    """Row l-1 is s_l = u_1 + ... + u_l."""
    return np.cumsum(P.edges, axis=0)


def diagonals(P: Polygon) -> np.ndarray:
    """d_0..d_n with d[l] the Minkowski length of s_l (d_0 = d_n = 0)."""
    s = partial_sums(P)
    n = P.n
    d = np.zeros(n + 1)
    for l in range(1, n):
        q = mink3.dot(s[l - 1], s[l - 1])
        if not (q > 0 and s[l - 1, 2] > 0):
            raise NonTimelikeDiagonal(l)
        d[l] = np.sqrt(q)
    return d


def _pinning_angle(edges: np.ndarray) -> float:
    for u in edges:
        h = np.hypot(u[0], u[1])
        if h > 1e-9 * max(1.0, abs(u[2])):
            return float(np.arctan2(u[1], u[0]))
    return 0.0


def gauge_element(P: Polygon, l: int) -> SU11:
    """The SU(1,1) element used by :func:`gauge_fix`."""
    if not 2 <= l <= P.n - 2:
        raise IndexError(f"diagonal index {l} outside 2..{P.n - 2}")
    s = partial_sums(P)[l - 1]
    g = mink3.boost_to_t_axis(s)
    moved = mink3.ad_action(g, P.edges)
    return mink3.rotation(-_pinning_angle(moved)) @ g


def gauge_fix(P: Polygon, l: int) -> Polygon:
    """Move s_l onto the positive t-axis, then rotate u_1 into {y = 0, x >= 0}.

    When u_1 is (numerically) on the axis the first off-axis edge is pinned
    instead.
    """
    g = gauge_element(P, l)
    return Polygon(P.spec, mink3.ad_action(g, P.edges))


def _dihedral(s, u, v, index: int) -> float:
    a = mink3.cross(s, u)
    b = mink3.cross(s, v)
    d = np.sqrt(mink3.dot(s, s))
    na = np.sqrt(max(-mink3.dot(a, a), 0.0))
    nb = np.sqrt(max(-mink3.dot(b, b), 0.0))
    scale = d * np.sqrt(abs(mink3.dot(u, u)))
    scale_b = d * np.sqrt(abs(mink3.dot(v, v)))
    if na <= 1e-9 * scale or nb <= 1e-9 * scale_b:
        raise DegenerateDihedral(index)
    # cos from the Minkowski dot of the two (spacelike) normals, sin from the
    # orientation det(s, u, v); both are SU(1,1) invariant
    return float(np.arctan2(d * mink3.det3(s, u, v), -mink3.dot(a, b)))


def dihedral_angles(P: Polygon, strict: bool = True) -> np.ndarray:
    """phi_2..phi_{n-2}; a degenerate angle raises, or is nan when not ``strict``."""
    s = partial_sums(P)
    out = np.empty(P.n - 3)
    for i in range(2, P.n - 1):
        try:
            out[i - 2] = _dihedral(s[i - 1], P.edges[i - 1], P.edges[i], i)
        except DegenerateDihedral:
            if strict:
                raise
            out[i - 2] = np.nan
    return out


def action_angle(P: Polygon) -> ActionAngle:
    """Diagonal lengths and oriented dihedral angles at diagonals 2..n-2."""
    d = diagonals(P)
    return ActionAngle(d[2 : P.n - 1], dihedral_angles(P))


def reconstruct(spec: PolygonSpec, aa: ActionAngle) -> Polygon:
    """Rebuild a polygon from its action-angle coordinates.

    Triangles (s_{l-1}, u_l, s_l) are laid out one at a time in the frame where
    s_{l-1} sits on the t-axis; the rapidity between the two co-oriented sides
    comes from the timelike law of cosines and the azimuth of u_l is the
    azimuth of u_{l-1} advanced by phi_{l-1}.  The result is gauge-fixed at the
    first diagonal.
    """
    n, p, r = spec.n, spec.p, spec.r
    if aa.d.shape[0] != n - 3:
        raise ValueError(f"expected {n - 3} diagonal lengths, got {aa.d.shape[0]}")
    D = np.concatenate([[0.0, r[0]], aa.d, [r[-1], 0.0]])
    edges = np.zeros((n, 3))
    edges[0] = (0.0, 0.0, r[0])
    s = edges[0].copy()
    for l in range(2, n):
        dp, dl, rl = D[l - 1], D[l], r[l - 1]
        if l <= p:
            ch = (dl * dl - dp * dp - rl * rl) / (2.0 * dp * rl)
        else:
            ch = (dp * dp + rl * rl - dl * dl) / (2.0 * dp * rl)
        if ch < 1.0 - _CONSTRUCTION_TOL:
            raise OutsidePolytope(l, float(ch))
        ch = max(ch, 1.0)
        sh = np.sqrt(ch * ch - 1.0)
        g = mink3.boost_to_t_axis(s)
        prev = mink3.ad_action(g, edges[l - 2])
        if l == 2 or np.hypot(prev[0], prev[1]) <= 1e-12 * max(1.0, abs(prev[2])):
            psi = 0.0
        else:
            psi = float(np.arctan2(prev[1], prev[0]))
        beta = psi + (aa.phi[l - 3] if l >= 3 else 0.0)
        tsign = 1.0 if l <= p else -1.0
        local = np.array([rl * sh * np.cos(beta), rl * sh * np.sin(beta), tsign * rl * ch])
        edges[l - 1] = mink3.ad_action(g.inverse(), local)
        s = s + edges[l - 1]
    edges[n - 1] = -s
    return Polygon(spec, edges)


def sample_polygon(
    spec: PolygonSpec,
    dmax: Optional[float] = None,
    rng=None,
    degauge: bool = False,
    margin: float = 0.0,
    max_tries: int = 100_000,
) -> Polygon:
    """Random polygon: d uniform on the (truncated) polytope, angles uniform.

    ``margin`` shrinks every inequality by that amount, which keeps samples
    away from aligned configurations.  With ``degauge`` a random SU(1,1)
    element is applied at the end.
    """
    rng = np.random.default_rng(rng)
    pp = spec.polytope()
    box = []
    for lo, hi in pp.bounds():
        lo = lo + margin
        if dmax is not None:
            hi = min(hi, dmax)
        hi = hi - margin
        if not np.isfinite(hi):
            raise UnboundedNeedsDmax("unbounded polytope: dmax is required")
        if hi < lo:
            raise EmptyPolytope(f"truncated polytope is empty (lo={lo}, hi={hi})")
        box.append((lo, hi))
    box = np.array(box).reshape(-1, 2)
    for _ in range(max_tries):
        d = rng.uniform(box[:, 0], box[:, 1]) if len(box) else np.zeros(0)
        if _inside_with_margin(pp, d, margin):
            break
    else:
        raise EmptyPolytope("rejection sampling found no interior point")
    phi = rng.uniform(-np.pi, np.pi, size=d.shape[0])
    P = reconstruct(spec, ActionAngle(d, phi))
    if degauge:
        g = mink3.random_su11(rng)
        P = Polygon(spec, mink3.ad_action(g, P.edges))
    return P


def _inside_with_margin(pp, d, margin: float) -> bool:
    if margin == 0.0:
        return contains(pp, d, tol=0.0)
    val = lambda v: 0.0 if v is None else d[v - 2]  # noqa: E731
    return all(val(c.upper) - val(c.lower) >= float(c.rhs) + margin for c in pp.constraints)


def is_generic(spec: PolygonSpec) -> bool:
    """True iff the future and past side lengths have different totals."""
    fut = sum(spec.r[: spec.p])
    past = sum(spec.r[spec.p :])
    return abs(fut - past) > 1e-12 * sum(spec.r)


def witness(k: float) -> Polygon:
    """The polygon x_k of the p = q = 2, r = 1/2 family that escapes to infinity."""
    spec = PolygonSpec(2, 2, (0.5, 0.5, 0.5, 0.5))
    e2 = np.array([k, 0.0, np.sqrt(k * k + 0.25)])
    e1 = np.array([0.0, 0.0, 0.5])
    return Polygon(spec, np.array([e1, e2, -e2, -e1]))
