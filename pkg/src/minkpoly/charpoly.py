"""Characteristic polynomials and their roots for small dense complex matrices.

Sized for n <= 8: Faddeev-LeVerrier for the coefficients, Durand-Kerner for
the roots, then a Newton step on det(lambda I - A) evaluated through the
matrix itself, which does not inherit the conditioning of the coefficients.
"""

from __future__ import annotations

import numpy as np

__all__ = ["charpoly", "durand_kerner", "newton_polish", "eigenvalues"]


def charpoly(A) -> np.ndarray:
    """Monic coefficients of det(lambda I - A), highest degree first."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    M = np.zeros_like(A)
    eye = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        M = A @ M + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(A @ M) / k
    return coeffs


def durand_kerner(coeffs, maxiter: int = 200, tol: float = 1e-13) -> np.ndarray:
    """All roots of the monic polynomial ``coeffs`` (highest degree first)."""
    c = np.asarray(coeffs, dtype=complex)
    c = c / c[0]
    n = c.shape[0] - 1
    if n == 0:
        return np.zeros(0, dtype=complex)
    radius = 1.0 + np.max(np.abs(c[1:]))
    z = radius * (0.4 + 0.9j) ** np.arange(n)
    absc = np.abs(c)
    for _ in range(maxiter):
        pz = np.polyval(c, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        step = pz / np.prod(diff, axis=1)
        z = z - step
        # converged once every step is tiny or every residual is at rounding level
        if np.all(np.abs(step) <= tol * (1.0 + np.abs(z))):
            break
        if np.all(np.abs(np.polyval(c, z)) <= 8 * np.finfo(float).eps * np.polyval(absc, np.abs(z))):
            break
    return z


def newton_polish(A, root: complex, iters: int = 1) -> complex:
    """Newton on log det(lambda I - A): lambda -= 1 / tr((lambda I - A)^-1)."""
    A = np.asarray(A, dtype=complex)
    eye = np.eye(A.shape[0])
    lam = complex(root)
    for _ in range(iters):
        try:
            t = np.trace(np.linalg.inv(lam * eye - A))
        except np.linalg.LinAlgError:
            break
        if not np.isfinite(t) or t == 0:
            break
        step = 1.0 / t
        # the step is meaningless once we sit on the root to rounding
        if abs(step) > 1e-3 * (1.0 + abs(lam)):
            break
        lam -= step
    return lam


def eigenvalues(A, polish: bool = True) -> np.ndarray:
    """Eigenvalues of a small matrix via its characteristic polynomial."""
    A = np.asarray(A, dtype=complex)
    roots = durand_kerner(charpoly(A))
    if polish:
        roots = np.array([newton_polish(A, z) for z in roots])
    return roots
