"""Minkowski 3-space with coordinates (x, y, t) and quadratic form t^2 - x^2 - y^2.

Vectors are plain numpy arrays whose last axis has length 3; every function
here broadcasts over leading axes.  Group elements of SU(1,1) are stored as
the pair (a, b) of the matrix [[a, b], [conj(b), conj(a)]] and act on vectors
through conjugation in su(1,1), using the identification

    (x, y, t)  ->  1/2 [[-i t, x + i y], [x - i y, i t]].

Orientation conventions (checked in tests/test_mink3.py):

* ``cross((1,0,0), (0,1,0)) == (0,0,1)``;
* ``rotation(theta)`` = diag(e^{i theta/2}, e^{-i theta/2}) turns the (x, y)
  plane *counter-clockwise* by ``theta`` about the t-axis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NotTimelikeFuture

__all__ = [
    "Cone",
    "SU11",
    "dot",
    "cross",
    "det3",
    "classify",
    "norm",
    "to_su11",
    "from_su11",
    "ad_action",
    "rotation",
    "boost",
    "boost_to_t_axis",
    "random_su11",
    "light_tolerance",
]


class Cone(enum.Enum):
    TIMELIKE_FUTURE = "timelike-future"
    TIMELIKE_PAST = "timelike-past"
    SPACELIKE = "spacelike"
    LIGHTLIKE = "lightlike"


def dot(a, b):
    """Minkowski pairing -x1 x2 - y1 y2 + t1 t2."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return -a[..., 0] * b[..., 0] - a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def cross(a, b):
    """Minkowski cross product: the determinant with first row (-i, -j, k)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ax, ay, at = a[..., 0], a[..., 1], a[..., 2]
    bx, by, bt = b[..., 0], b[..., 1], b[..., 2]
    return np.stack(
        [-(ay * bt - at * by), ax * bt - at * bx, ax * by - ay * bx], axis=-1
    )


def det3(a, b, c):
    """det of the 3x3 matrix with rows a, b, c (plain Euclidean determinant)."""
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))
    return (
        a[..., 0] * (b[..., 1] * c[..., 2] - b[..., 2] * c[..., 1])
        - a[..., 1] * (b[..., 0] * c[..., 2] - b[..., 2] * c[..., 0])
        + a[..., 2] * (b[..., 0] * c[..., 1] - b[..., 1] * c[..., 0])
    )


def light_tolerance(a) -> float:
    """Absolute threshold below which |<a, a>| counts as lightlike.

    Scales with t^2 because boosts inflate coordinates.
    """
    t = float(np.asarray(a, dtype=float)[2])
    return 1e-10 * max(1.0, t * t)


def classify(a) -> tuple[Cone, float]:
    """Return the causal type of a single vector together with its norm.

    The norm is sqrt(<a,a>) for timelike vectors, sqrt(-<a,a>) for spacelike
    ones and 0 for lightlike ones.
    """
    a = np.asarray(a, dtype=float)
    q = float(dot(a, a))
    if abs(q) <= light_tolerance(a):
        return Cone.LIGHTLIKE, 0.0
    if q > 0:
        kind = Cone.TIMELIKE_FUTURE if a[2] > 0 else Cone.TIMELIKE_PAST
        return kind, float(np.sqrt(q))
    return Cone.SPACELIKE, float(np.sqrt(-q))


def norm(a):
    """sqrt(|<a, a>|), vectorised."""
    return np.sqrt(np.abs(dot(a, a)))


def to_su11(a):
    """Image of ``a`` in su(1,1) as a (..., 2, 2) complex array."""
    a = np.asarray(a, dtype=float)
    x, y, t = a[..., 0], a[..., 1], a[..., 2]
    out = np.empty(a.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = -0.5j * t
    out[..., 0, 1] = 0.5 * (x + 1j * y)
    out[..., 1, 0] = 0.5 * (x - 1j * y)
    out[..., 1, 1] = 0.5j * t
    return out


def from_su11(m):
    """Inverse of :func:`to_su11` (reads the (0,0) and (0,1) entries)."""
    m = np.asarray(m)
    z = 2.0 * m[..., 0, 1]
    t = -2.0 * m[..., 0, 0].imag
    return np.stack([z.real, z.imag, t], axis=-1)


@dataclass(frozen=True)
class SU11:
    """Element [[a, b], [conj(b), conj(a)]] of SU(1,1), |a|^2 - |b|^2 = 1."""

    a: complex
    b: complex

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.a, self.b], [np.conj(self.b), np.conj(self.a)]], dtype=complex
        )

    @property
    def pseudo_det(self) -> float:
        return abs(self.a) ** 2 - abs(self.b) ** 2

    @property
    def rapidity(self) -> float:
        """Hyperbolic distance the element moves the point (0, 0, 1)."""
        return 2.0 * float(np.arcsinh(abs(self.b)))

    def inverse(self) -> "SU11":
        return SU11(complex(np.conj(self.a)), complex(-self.b))

    def __matmul__(self, other: "SU11") -> "SU11":
        m = self.matrix @ other.matrix
        return SU11(complex(m[0, 0]), complex(m[0, 1]))

    @classmethod
    def identity(cls) -> "SU11":
        return cls(1.0 + 0j, 0j)

    @classmethod
    def from_matrix(cls, m) -> "SU11":
        m = np.asarray(m, dtype=complex)
        return cls(complex(m[0, 0]), complex(m[0, 1]))


def ad_action(g: SU11, a):
    """Act by ``g`` on vectors via conjugation g A g^{-1} in su(1,1)."""
    gm = g.matrix
    gi = g.inverse().matrix
    return from_su11(gm @ to_su11(a) @ gi)


def rotation(theta: float) -> SU11:
    """Counter-clockwise rotation by ``theta`` about the t-axis."""
    return SU11(complex(np.exp(0.5j * theta)), 0j)


def boost(rapidity: float, azimuth: float = 0.0) -> SU11:
    """Pure boost taking (0, 0, 1) to the unit hyperboloid point at ``rapidity``
    in the direction ``azimuth`` of the (x, y) plane."""
    c = np.cosh(0.5 * rapidity)
    s = np.sinh(0.5 * rapidity)
    # conjugating k by [[c, s e^{ia}], ...] lands at azimuth a + pi/2
    b = s * np.exp(1j * (azimuth - 0.5 * np.pi))
    return SU11(complex(c), complex(b))


def boost_to_t_axis(a) -> SU11:
    """Return g with ``ad_action(g, a) == (0, 0, |a|)`` for future timelike a."""
    a = np.asarray(a, dtype=float)
    kind, m = classify(a)
    if kind is not Cone.TIMELIKE_FUTURE:
        raise NotTimelikeFuture(a)
    h = float(np.hypot(a[0], a[1]))
    if h == 0.0:
        return SU11.identity()
    rho = float(np.arcsinh(h / m))
    return boost(rho, float(np.arctan2(a[1], a[0]))).inverse()


def random_su11(rng=None, rho_max: float = 2.0) -> SU11:
    """Random element rotation(theta) @ boost(rho, azimuth).

    theta and azimuth are uniform on [0, 2 pi), the rapidity rho is uniform on
    [0, rho_max].  ``rng`` is anything accepted by ``np.random.default_rng``.
    """
    rng = np.random.default_rng(rng)
    theta, azimuth = rng.uniform(0.0, 2.0 * np.pi, size=2)
    rho = rng.uniform(0.0, rho_max)
    return rotation(theta) @ boost(rho, azimuth)
