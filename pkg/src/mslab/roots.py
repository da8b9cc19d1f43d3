"""Independent root oracle for monic univariate polynomials.

Aberth-Ehrlich simultaneous iteration, deliberately separate from the
path-tracking code so harvested data can be validated against it.
"""
from __future__ import annotations

import numpy as np


class RootFindingError(RuntimeError):
    """Simultaneous iteration failed to converge."""


def poly_coeffs(low_coeffs) -> np.ndarray:
    """Monic coefficient vector [1, a_{d-1}, ..., a_0] from (a_0, ..., a_{d-1})."""
    low = np.asarray(low_coeffs, dtype=complex)
    return np.concatenate(([1.0 + 0j], low[::-1]))


def eval_poly(low_coeffs, x):
    return np.polyval(poly_coeffs(low_coeffs), x)


def eval_dpoly(low_coeffs, x):
    return np.polyval(np.polyder(poly_coeffs(low_coeffs)), x)


def reference_roots(low_coeffs, tol: float = 1e-12, max_iter: int = 1000) -> np.ndarray:
    """All d roots of x^d + a_{d-1} x^{d-1} + ... + a_0.

    ``low_coeffs`` is (a_0, ..., a_{d-1}). Each root converges to backward
    error ``tol`` (residual small against sum_i |c_i| |z|^i, so every returned
    point is an exact root of a tol-perturbed polynomial); raises
    :class:`RootFindingError` past ``max_iter``.
    """
    low = np.asarray(low_coeffs, dtype=complex)
    d = len(low)
    if d == 0:
        return np.empty(0, dtype=complex)
    if d == 1:
        return np.array([-low[0]], dtype=complex)
    coeffs = poly_coeffs(low)
    dcoeffs = np.polyder(coeffs)
    # Cauchy-style radius, slightly offset angles so no start is a real axis
    # symmetry point
    radius = 1.0 + np.max(np.abs(low))
    angles = 2 * np.pi * (np.arange(d) + 0.25) / d + 0.5 / d
    z = radius * np.exp(1j * angles)
    abs_coeffs = np.abs(coeffs)

    def scale(zz):
        return np.polyval(abs_coeffs, np.abs(zz)) + 1e-300

    for _ in range(max_iter):
        p = np.polyval(coeffs, z)
        if np.all(np.abs(p) <= tol * scale(z)):
            return z
        dp = np.polyval(dcoeffs, z)
        dp = np.where(dp == 0, 1e-300, dp)
        w = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        z = z - w / (1.0 - w * s)
    p = np.polyval(coeffs, z)
    if np.all(np.abs(p) <= tol * scale(z)):
        return z
    raise RootFindingError(
        f"Aberth-Ehrlich did not converge in {max_iter} iterations "
        f"(worst scaled residual {np.max(np.abs(p) / scale(z)):.3e})")
