"""Gelfand-Tsetlin variables for U(p, q) and the matrix model of polygons.

A polygon is lifted to an n x 2 matrix M = (z w) by the pseudo-Hopf map

    edge_i = J_ii * (Re 2 conj(z_i) w_i, Im 2 conj(z_i) w_i, |z_i|^2 + |w_i|^2),

J = diag(1 (p times), -1 (q times)).  On the level set
J_ii (|z_i|^2 - |w_i|^2) = r_i each edge has Minkowski length r_i, the
truncations nu(M_l) = J_{1,1} M_l^* J_l M_l have eigenvalues gamma_l <= delta_l
with gamma_l + delta_l = r_1 + ... + r_l and delta_l - gamma_l = d_l.

For l <= p the truncated form J_l is the definite one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import mink3
from .charpoly import eigenvalues
from .errors import ChildNotReal, NonRealSpectrum, NotJHermitian, NullVector, PoleAt
from .mink3 import SU11
from .polygon import Polygon, PolygonSpec, validate

__all__ = [
    "J11",
    "signature",
    "MatrixPoint",
    "GTPattern",
    "eta",
    "nu_trunc",
    "gt_variables",
    "minimal_pattern_margins",
    "lift_polygon",
    "project_edges",
    "right_action",
    "right_action_su11",
    "OrbitSpectrum",
    "admissible",
    "random_upq",
    "orbit_matrix",
    "truncation_spectrum",
    "is_real",
    "InterlacingReport",
    "interlacing_check",
    "SecularUpdate",
    "SecularRoots",
    "secular_ratio",
    "secular_roots",
    "secular_matrix",
    "rayleigh",
    "rayleigh_batch",
]

J11 = np.diag([1.0, -1.0])


def signature(p: int, q: int) -> np.ndarray:
    """Diagonal of J_{p,q}."""
    return np.array([1.0] * p + [-1.0] * q)


@dataclass(frozen=True, eq=False)
class MatrixPoint:
    z: np.ndarray
    w: np.ndarray
    spec: PolygonSpec

    @property
    def M(self) -> np.ndarray:
        return np.stack([self.z, self.w], axis=1)

    def level(self) -> np.ndarray:
        """J_ii (|z_i|^2 - |w_i|^2); equals r on the polygon level set."""
        return self.spec.signs * (np.abs(self.z) ** 2 - np.abs(self.w) ** 2)


@dataclass(frozen=True)
class GTPattern:
    gamma: np.ndarray
    delta: np.ndarray

    @property
    def d(self) -> np.ndarray:
        return self.delta - self.gamma

    @property
    def trace_partial(self) -> np.ndarray:
        return self.gamma + self.delta

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma.tolist(),
            "delta": self.delta.tolist(),
            "d": self.d.tolist(),
            "trace_partial": self.trace_partial.tolist(),
        }


def eta(mp: MatrixPoint) -> np.ndarray:
    """eta(M) = M J_{1,1} M^* J_{p,q}."""
    M = mp.M
    return M @ J11 @ M.conj().T @ np.diag(mp.spec.signs)


def nu_trunc(mp: MatrixPoint, l: int) -> np.ndarray:
    """nu(M_l) = J_{1,1} M_l^* J_l M_l for the first l rows of M."""
    n = mp.spec.n
    if not 1 <= l <= n:
        raise IndexError(f"truncation {l} outside 1..{n}")
    Ml = mp.M[:l]
    Jl = np.diag(mp.spec.signs[:l])
    return J11 @ Ml.conj().T @ Jl @ Ml


def gt_variables(mp: MatrixPoint, tol: float = 1e-12) -> GTPattern:
    """Eigenvalue ladder (gamma_l, delta_l), l = 1..n, of the truncations.

    Raises NonRealSpectrum(l, disc) if some 2x2 truncation has a complex pair.
    """
    n = mp.spec.n
    gamma = np.zeros(n)
    delta = np.zeros(n)
    for l in range(1, n + 1):
        nu = nu_trunc(mp, l)
        T = (nu[0, 0] + nu[1, 1]).real
        # (a - d)^2 + 4bc rather than T^2 - 4 det: no cancellation when the
        # two eigenvalues nearly coincide (l = n, where d_n = 0)
        disc = ((nu[0, 0] - nu[1, 1]) ** 2 + 4.0 * nu[0, 1] * nu[1, 0]).real
        if disc < -tol * max(1.0, T * T):
            raise NonRealSpectrum(l, disc)
        root = np.sqrt(max(disc, 0.0))
        gamma[l - 1] = 0.5 * (T - root)
        delta[l - 1] = 0.5 * (T + root)
    # A_1 has the single nontrivial eigenvalue delta_1
    gamma[0] = 0.0
    return GTPattern(gamma, delta)


def minimal_pattern_margins(gt: GTPattern, p: int) -> dict[str, float]:
    """Worst slack of each family of inequalities of the minimal-orbit pattern.

    Every entry is >= 0 (up to rounding) when the pattern holds.
    """
    g, dl = gt.gamma, gt.delta
    n = g.shape[0]
    fam = {
        "gamma_increasing (l >= p)": [g[l] - g[l - 1] for l in range(p, n)],
        "delta_decreasing (l >= p)": [dl[l - 1] - dl[l] for l in range(p, n)],
        "gamma_decreasing (l < p)": [g[l - 1] - g[l] for l in range(1, p)],
        "delta_increasing (l < p)": [dl[l] - dl[l - 1] for l in range(1, p)],
        "gamma_nonpositive (l <= p)": [-g[l - 1] for l in range(1, p + 1)],
        "gamma_le_delta": list(dl - g),
    }
    return {k: (min(v) if v else np.inf) for k, v in fam.items()}


def lift_polygon(P: Polygon, rng=None) -> MatrixPoint:
    """A point of the level set projecting to P; the U(1) phase of each row is random."""
    rng = np.random.default_rng(rng)
    sig = P.spec.signs
    r = np.asarray(P.spec.r)
    n = P.n
    z = np.zeros(n, dtype=complex)
    w = np.zeros(n, dtype=complex)
    chi = rng.uniform(0.0, 2.0 * np.pi, size=n)
    for i in range(n):
        x, y, t = sig[i] * P.edges[i]
        zeta = x + 1j * y  # = 2 conj(z) w
        big = 0.5 * (t + r[i])
        small = max(0.5 * (t - r[i]), 0.0)
        zz, ww = (big, small) if sig[i] > 0 else (small, big)
        phase = np.exp(1j * chi[i])
        if zz >= ww:
            z[i] = np.sqrt(zz) * phase
            w[i] = zeta / (2.0 * np.conj(z[i]))
        else:
            w[i] = np.sqrt(ww) * phase
            z[i] = np.conj(zeta / (2.0 * w[i]))
    return MatrixPoint(z, w, P.spec)


def _edges(z, w, signs) -> np.ndarray:
    zeta = 2.0 * np.conj(z) * w
    return signs[:, None] * np.stack(
        [zeta.real, zeta.imag, np.abs(z) ** 2 + np.abs(w) ** 2], axis=1
    )


def project_edges(mp: MatrixPoint, tol: float = 1e-9) -> Polygon:
    """Pseudo-Hopf projection of every row, validated as a polygon."""
    return validate(mp.spec, _edges(mp.z, mp.w, mp.spec.signs), tol)


def right_action(mp: MatrixPoint, h: SU11) -> MatrixPoint:
    """(z w) -> (z w) h."""
    M = mp.M @ h.matrix
    return MatrixPoint(M[:, 0].copy(), M[:, 1].copy(), mp.spec)


def right_action_su11(h: SU11) -> SU11:
    """The element g with project(M h) = ad_action(g, project(M)).

    nu transforms as h^{-1} nu h, and the pseudo-Hopf edge sits a quarter turn
    away from the su(1,1) identification, so g = rot(pi/2) h^{-1} rot(-pi/2).
    """
    return mink3.rotation(0.5 * np.pi) @ h.inverse() @ mink3.rotation(-0.5 * np.pi)


# --- U(p, q) orbits and interlacing ------------------------------------------


@dataclass(frozen=True)
class OrbitSpectrum:
    """Lambda = (lambda_1..lambda_p, mu_1..mu_q), each block non-decreasing."""

    lam: tuple[float, ...]
    mu: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(sorted(float(x) for x in self.lam)))
        object.__setattr__(self, "mu", tuple(sorted(float(x) for x in self.mu)))

    @property
    def p(self) -> int:
        return len(self.lam)

    @property
    def q(self) -> int:
        return len(self.mu)

    @property
    def diagonal(self) -> np.ndarray:
        return np.array(self.lam + self.mu)


def admissible(spectrum: OrbitSpectrum) -> bool:
    """lambda_1 > mu_q."""
    if not spectrum.lam or not spectrum.mu:
        return True
    return spectrum.lam[0] > spectrum.mu[-1]


def _random_unitary(k: int, rng) -> np.ndarray:
    X = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    Q, R = np.linalg.qr(X)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_upq(p: int, q: int, rng=None, boost_scale: float = 0.5) -> np.ndarray:
    """K1 exp(B) K2 with K_i in U(p) x U(q) and B = [[0, X], [X^*, 0]].

    X has i.i.d. complex Gaussian entries of standard deviation ``boost_scale``.
    """
    rng = np.random.default_rng(rng)
    n = p + q

    def k():
        K = np.zeros((n, n), dtype=complex)
        K[:p, :p] = _random_unitary(p, rng)
        K[p:, p:] = _random_unitary(q, rng)
        return K

    X = boost_scale * (rng.normal(size=(p, q)) + 1j * rng.normal(size=(p, q)))
    B = np.zeros((n, n), dtype=complex)
    B[:p, p:] = X
    B[p:, :p] = X.conj().T
    vals, vecs = np.linalg.eigh(B)  # B is Hermitian, so exp(B) = V e^D V^*
    expB = (vecs * np.exp(vals)) @ vecs.conj().T
    return k() @ expB @ k()


def orbit_matrix(spectrum: OrbitSpectrum, g: np.ndarray) -> np.ndarray:
    """g Lambda g^{-1} with g^{-1} = J g^* J."""
    J = np.diag(signature(spectrum.p, spectrum.q))
    return g @ np.diag(spectrum.diagonal) @ J @ g.conj().T @ J


def is_real(vals, tol: float = 1e-8) -> np.ndarray:
    """|Im| < tol (1 + |Re|), elementwise."""
    vals = np.asarray(vals)
    return np.abs(vals.imag) < tol * (1.0 + np.abs(vals.real))


def truncation_spectrum(A, l: int, J=None, tol: float = 1e-10) -> np.ndarray:
    """All eigenvalues of the upper-left l x l block of A, imaginary parts kept.

    When ``J`` (the diagonal of J_{p,q}) is given, J A must be Hermitian.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if J is not None:
        JA = np.diag(np.asarray(J, dtype=float)) @ A
        if np.max(np.abs(JA - JA.conj().T)) > tol * max(1.0, np.max(np.abs(A))):
            raise NotJHermitian("J A is not Hermitian")
    if not 1 <= l <= n:
        raise IndexError(f"truncation {l} outside 1..{n}")
    vals = eigenvalues(A[:l, :l])
    return vals[np.lexsort((vals.imag, vals.real))]


@dataclass
class InterlacingReport:
    checks: list[tuple[str, float]]
    ties: bool = False

    @property
    def worst_margin(self) -> float:
        return min((m for _, m in self.checks), default=np.inf)

    def ok(self, tol: float = 1e-9) -> bool:
        return self.worst_margin >= -tol

    @property
    def failures(self) -> list[tuple[str, float]]:
        return [(k, m) for k, m in self.checks if m < -1e-9]


def interlacing_check(parent: OrbitSpectrum, child, tol: float = 1e-8) -> InterlacingReport:
    """Check the U(p, q) -> U(p, q-1) interlacing for a sorted child spectrum.

    The child's n-1 values are split as mu^{n-1}_1..mu^{n-1}_{q-1} (the
    smallest q-1) and lambda^{n-1}_1..lambda^{n-1}_p.  Each check reports its
    slack; negative slack is a violation.
    """
    child = np.asarray(child)
    if np.iscomplexobj(child):
        if not np.all(is_real(child, tol)):
            raise ChildNotReal(f"child spectrum has non-real values: {child}")
        child = child.real
    child = np.sort(np.asarray(child, dtype=float))
    p, q = parent.p, parent.q
    if child.shape[0] != p + q - 1:
        raise ValueError(f"expected {p + q - 1} child eigenvalues, got {child.shape[0]}")
    lam, mu = parent.lam, parent.mu
    cmu, clam = child[: q - 1], child[q - 1 :]
    checks = []
    for i in range(q - 1):
        checks.append((f"mu_{i+1} <= mu'_{i+1}", cmu[i] - mu[i]))
        checks.append((f"mu'_{i+1} <= mu_{i+2}", mu[i + 1] - cmu[i]))
    for j in range(p - 1):
        checks.append((f"lambda_{j+1} <= lambda'_{j+1}", clam[j] - lam[j]))
        checks.append((f"lambda'_{j+1} <= lambda_{j+2}", lam[j + 1] - clam[j]))
    checks.append((f"lambda'_{p} >= lambda_{p}", clam[p - 1] - lam[p - 1]))
    ties = bool(np.any(np.diff(child) == 0.0)) or len(set(lam + mu)) < p + q
    return InterlacingReport(checks, ties)


# --- rank-one secular update -------------------------------------------------


@dataclass(frozen=True)
class SecularUpdate:
    """L = e + r w w^dagger with e = diag(delta, gamma) and w = alpha u + beta v."""

    delta: float
    gamma: float
    alpha: complex
    beta: complex
    r: float

    @property
    def condition(self) -> float:
        """gamma r |alpha|^2 - delta r |beta|^2 + gamma delta (<= 0 gives real roots)."""
        a2, b2 = abs(self.alpha) ** 2, abs(self.beta) ** 2
        return self.gamma * self.r * a2 - self.delta * self.r * b2 + self.gamma * self.delta


@dataclass(frozen=True)
class SecularRoots:
    root1: complex
    root2: complex
    placement: str  # "outer", "inner", "left", "right", "complex", "mixed"
    claim_holds: Optional[bool]


def secular_ratio(su: SecularUpdate, lam: float) -> float:
    """det(lam I - L) / det(lam I - e) = 1 - r|alpha|^2/(lam - delta) + r|beta|^2/(lam - gamma)."""
    if lam == su.delta:
        raise PoleAt(su.delta)
    if lam == su.gamma:
        raise PoleAt(su.gamma)
    a2, b2 = abs(su.alpha) ** 2, abs(su.beta) ** 2
    return 1.0 - su.r * a2 / (lam - su.delta) + su.r * b2 / (lam - su.gamma)


def secular_matrix(su: SecularUpdate) -> np.ndarray:
    """The explicit 2x2 L in the basis u = (1, 0), v = (0, 1), J = diag(1, -1)."""
    w = np.array([su.alpha, su.beta], dtype=complex)
    w_dag = J11 @ w.conj()
    return np.diag([su.delta, su.gamma]).astype(complex) + su.r * np.outer(w, w_dag)


def secular_roots(su: SecularUpdate, real_tol: float = 1e-12) -> SecularRoots:
    """Zeros of the secular function and where they fall relative to gamma < delta.

    ``claim_holds`` records whether the placement agrees with the expected
    one: outer for r > 0; inner for r < 0 when ``su.condition <= 0``.  It is
    None when no claim applies.
    """
    if not su.delta > su.gamma:
        raise ValueError("need delta > gamma")
    a2, b2 = abs(su.alpha) ** 2, abs(su.beta) ** 2
    d, g, r = su.delta, su.gamma, su.r
    # (x - d)(x - g) - r a2 (x - g) + r b2 (x - d)
    b = -(d + g) - r * a2 + r * b2
    c = d * g + r * a2 * g - r * b2 * d
    disc = b * b - 4.0 * c
    if disc < -real_tol * max(1.0, b * b):
        sq = 1j * np.sqrt(-disc)
        x1, x2 = (-b - sq) / 2.0, (-b + sq) / 2.0
        placement = "complex"
    else:
        sq = np.sqrt(max(disc, 0.0))
        # stable pairing of the two roots
        big = -0.5 * (b + np.copysign(sq, b)) if b != 0 else 0.5 * sq
        other = c / big if big != 0 else -big
        x1, x2 = sorted((big, other))
        if x1 < g and x2 > d:
            placement = "outer"
        elif g < x1 and x2 < d:
            placement = "inner"
        elif x2 < g:
            placement = "left"
        elif x1 > d:
            placement = "right"
        else:
            placement = "mixed"
    claim: Optional[bool] = None
    if r > 0:
        claim = placement == "outer"
    elif r < 0 and su.condition <= 0:
        claim = placement == "inner"
    return SecularRoots(complex(x1), complex(x2), placement, claim)


# --- Rayleigh quotient ---------------------------------------------------------


def rayleigh(A, x, J, tol: float = 1e-10) -> float:
    """x^dagger A x / x^dagger x with x^dagger = (J conj(x))^T."""
    A = np.asarray(A, dtype=complex)
    x = np.asarray(x, dtype=complex)
    J = np.asarray(J, dtype=float)
    den = np.vdot(x, J * x)
    scale = np.vdot(x, x).real
    if abs(den) <= 1e-14 * scale:
        raise NullVector("x is (numerically) lightlike for the J-pairing")
    val = np.vdot(x, J * (A @ x)) / den
    if abs(val.imag) > tol * max(1.0, abs(val.real)):
        raise ValueError(f"Rayleigh quotient is not real: {val}")
    return float(val.real)


def rayleigh_batch(A, X, J):
    """Quotients and the sign of x^dagger x for the rows of X."""
    A = np.asarray(A, dtype=complex)
    X = np.asarray(X, dtype=complex)
    J = np.asarray(J, dtype=float)
    den = np.einsum("ij,ij->i", X.conj(), X * J).real
    num = np.einsum("ij,ij->i", X.conj() * J, X @ A.T)
    return num.real / den, np.sign(den)
