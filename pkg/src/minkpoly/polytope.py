"""Moment polytope of the diagonal lengths d_2, ..., d_{n-2}.

For side lengths r and signature (p, q) the reversed triangle inequalities give

    d_l >= d_{l-1} + r_l          for 1 <= l <= p
    d_l >= d_{l+1} + r_{l+1}      for p <= l <= n

with the constants d_0 = 0, d_1 = r_1, d_{n-1} = r_n, d_n = 0.  Every
constraint is a difference constraint x_a - x_b >= c, so feasibility, bounds
and recession directions are all graph questions.  They are answered exactly
over ``fractions.Fraction`` (every float is a dyadic rational).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import InfeasibleConstants, UnboundedNeedsDmax

__all__ = [
    "DiffConstraint",
    "Polytope",
    "build_polytope",
    "contains",
    "is_bounded",
    "recession_ray",
    "lattice_points",
]

# The constant node: x_Z = 0.
Z = None


@dataclass(frozen=True)
class DiffConstraint:
    """x_upper - x_lower >= rhs; ``None`` stands for the constant 0."""

    upper: Optional[int]
    lower: Optional[int]
    rhs: Fraction
    source: str = ""

    def coeffs(self) -> dict[str, int]:
        out: dict[str, int] = {}
        if self.upper is not None:
            out[f"d{self.upper}"] = out.get(f"d{self.upper}", 0) + 1
        if self.lower is not None:
            out[f"d{self.lower}"] = out.get(f"d{self.lower}", 0) - 1
        return {k: v for k, v in out.items() if v}


@dataclass
class Polytope:
    p: int
    q: int
    r: tuple[float, ...]
    constraints: list[DiffConstraint]
    lower: dict[int, Fraction] = field(default_factory=dict)
    upper: dict[int, Optional[Fraction]] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def variables(self) -> list[int]:
        """Indices l of the free diagonals d_l (2 <= l <= n-2)."""
        return list(range(2, self.n - 1))

    @property
    def dim(self) -> int:
        return max(self.n - 3, 0)

    def bounds(self) -> list[tuple[float, float]]:
        """Per-variable (lo, hi) as floats, hi = inf when unbounded above."""
        out = []
        for v in self.variables:
            hi = self.upper[v]
            out.append((float(self.lower[v]), math.inf if hi is None else float(hi)))
        return out

    def to_dict(self, lattice: Optional[list[list[int]]] = None) -> dict:
        d = {
            "variables": [f"d{v}" for v in self.variables],
            "constraints": [
                {"coeffs": c.coeffs(), "rhs": float(c.rhs)} for c in self.constraints
            ],
            "bounds": [[lo, hi if math.isfinite(hi) else None] for lo, hi in self.bounds()],
            "bounded": is_bounded(self),
        }
        if lattice is not None:
            d["lattice_points"] = lattice
        return d


def _side(l: int, n: int, r: Sequence[Fraction]):
    """(variable index or None, constant) for the quantity d_l."""
    if l == 0 or l == n:
        return Z, Fraction(0)
    if l == 1:
        return Z, r[0]
    if l == n - 1:
        return Z, r[n - 1]
    return l, Fraction(0)


def _constraints(p: int, q: int, r: Sequence[float]) -> list[DiffConstraint]:
    n = p + q
    rf = [Fraction(x) for x in r]
    out = []

    def add(a: int, b: int, rl: Fraction, tag: str):
        va, ca = _side(a, n, rf)
        vb, cb = _side(b, n, rf)
        out.append(DiffConstraint(va, vb, rl + cb - ca, tag))

    for l in range(2, p + 1):  # l = 1 holds with equality by convention
        add(l, l - 1, rf[l - 1], f"d{l} >= d{l-1} + r{l}")
    for l in range(p, n - 1):  # l = n-1 is an identity, l = n is vacuous
        add(l, l + 1, rf[l], f"d{l} >= d{l+1} + r{l+1}")
    return out


def _longest_paths(nodes, edges, source):
    """Bellman-Ford for longest paths; raises on a positive cycle."""
    dist = {v: None for v in nodes}
    dist[source] = Fraction(0)
    for _ in range(len(nodes)):
        changed = False
        for a, b, w in edges:
            if dist[a] is not None and (dist[b] is None or dist[a] + w > dist[b]):
                dist[b] = dist[a] + w
                changed = True
        if not changed:
            return dist
    raise InfeasibleConstants("the diagonal-length inequalities have no solution")


def build_polytope(p: int, q: int, r: Sequence[float]) -> Polytope:
    """Assemble the constraint system and check that it is feasible.

    Raises InfeasibleConstants when no diagonal lengths satisfy it (for
    instance q = 1 with r_n < r_1 + ... + r_{n-1}).
    """
    r = tuple(float(x) for x in r)
    if len(r) != p + q:
        raise ValueError(f"expected {p + q} side lengths, got {len(r)}")
    cons = _constraints(p, q, r)
    for c in cons:
        if c.upper is None and c.lower is None and c.rhs > 0:
            raise InfeasibleConstants(f"constant constraint fails: {c.source}")

    nodes = ["Z"] + list(range(2, p + q - 1))
    key = lambda v: "Z" if v is None else v  # noqa: E731
    # edge lower -> upper with weight rhs: x_upper >= x_lower + rhs
    fwd = [(key(c.lower), key(c.upper), c.rhs) for c in cons]
    rev = [(b, a, w) for a, b, w in fwd]
    lo = _longest_paths(nodes, fwd, "Z")
    hi = _longest_paths(nodes, rev, "Z")

    pp = Polytope(p, q, r, cons)
    for v in pp.variables:
        if lo[v] is None:
            raise ValueError(f"d{v} has no lower bound")  # impossible for this system
        pp.lower[v] = lo[v]
        pp.upper[v] = None if hi[v] is None else -hi[v]
    return pp


def contains(pp: Polytope, d, tol: float = 1e-9) -> bool:
    """Membership of the vector (d_2, ..., d_{n-2}) with absolute tolerance."""
    d = np.asarray(d, dtype=float).reshape(-1)
    if d.shape[0] != pp.dim:
        raise ValueError(f"expected {pp.dim} diagonal lengths, got {d.shape[0]}")
    val = lambda v: 0.0 if v is None else float(d[v - 2])  # noqa: E731
    return all(
        val(c.upper) - val(c.lower) >= float(c.rhs) - tol for c in pp.constraints
    )


def _closure(pp: Polytope, start: int, upward: bool) -> Optional[set[int]]:
    """Variables forced to move with ``start``; None if a constant blocks it."""
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for c in pp.constraints:
            src, dst = (c.lower, c.upper) if upward else (c.upper, c.lower)
            if src != v:
                continue
            if dst is None:
                return None
            if dst not in seen:
                seen.add(dst)
                stack.append(dst)
    return seen


def recession_ray(pp: Polytope) -> Optional[np.ndarray]:
    """A nonzero 0/+-1 direction along which the polytope is unbounded, or None.

    The recession cone of a difference system is a lattice under
    componentwise max/min, so it is nontrivial iff it holds a nonzero
    nonnegative or nonpositive vector, and those are indicator vectors of
    closed sets found by graph search.
    """
    for sign, upward in ((1.0, True), (-1.0, False)):
        for v in pp.variables:
            s = _closure(pp, v, upward)
            if s is not None:
                ray = np.zeros(pp.dim)
                for u in s:
                    ray[u - 2] = sign
                return ray
    return None


def is_bounded(pp: Polytope) -> bool:
    return recession_ray(pp) is None


def _iter_points(pp: Polytope, ranges, partial: list[int], i: int) -> Iterator[list[int]]:
    if i == len(ranges):
        yield list(partial)
        return
    v = pp.variables[i]
    for x in range(ranges[i][0], ranges[i][1] + 1):
        partial.append(x)
        ok = True
        for c in pp.constraints:
            # check constraints whose variables are all assigned and involve v
            if v not in (c.upper, c.lower):
                continue
            others = [u for u in (c.upper, c.lower) if u is not None and u != v]
            if any(u - 2 > i for u in others):
                continue
            up = 0 if c.upper is None else partial[c.upper - 2]
            dn = 0 if c.lower is None else partial[c.lower - 2]
            if up - dn < c.rhs:
                ok = False
                break
        if ok:
            yield from _iter_points(pp, ranges, partial, i + 1)
        partial.pop()


def lattice_points(pp: Polytope, dmax: Optional[float] = None) -> list[list[int]]:
    """Integer points of the polytope (capped at ``dmax``) in lexicographic order."""
    if dmax is None and not is_bounded(pp):
        raise UnboundedNeedsDmax("polytope is unbounded; pass dmax")
    cap = None if dmax is None else Fraction(dmax)
    ranges = []
    for v in pp.variables:
        lo = math.ceil(pp.lower[v])
        hi_f = pp.upper[v]
        if cap is not None:
            hi_f = cap if hi_f is None else min(hi_f, cap)
        hi = math.floor(hi_f)
        if hi < lo:
            return []
        ranges.append((lo, hi))
    return list(_iter_points(pp, ranges, [], 0))
