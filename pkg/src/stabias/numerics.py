"""Matrix-equation and scalar-minimization primitives shared by the policy solvers.

Everything here is a pure function of its inputs, so parallel sweep workers
can call into this module without synchronization.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

# Eigenvalues this close to the unit circle are treated as on it: solvers fail
# loudly near degenerate parameter points instead of returning junk.
UNIT_CIRCLE_TOL = 1e-9


class SolverError(Exception):
    """Base class for numerical failures raised by this package."""


class NonStationaryError(SolverError):
    """Spectral radius at or above the unit circle; no stationary distribution."""


class NonConvergenceError(SolverError):
    """An iterative scheme exhausted its iteration budget."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class ObjectiveFailureError(SolverError):
    """The scalar objective failed at every seed point of the search grid."""


def spectral_radius(m: np.ndarray) -> float:
    """Largest eigenvalue modulus of a square matrix (0.0 for empty input)."""
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def discrete_lyapunov(
    t: np.ndarray,
    q: np.ndarray,
    discount: float = 1.0,
    *,
    tol: float = 1e-10,
    max_iter: int = 10_000,
) -> np.ndarray:
    """Solve ``sigma = discount * t @ sigma @ t.T + q`` by doubling.

    Parameters
    ----------
    t : square transition matrix
    q : symmetric PSD forcing term
    discount : scalar in (0, 1]

    Returns the symmetric fixed point, accurate to a max-norm residual of
    ``tol * (1 + max|q|)``.  Raises NonStationaryError when
    ``sqrt(discount) * t`` has spectral radius within UNIT_CIRCLE_TOL of one,
    NonConvergenceError if the residual bound is not met within ``max_iter``
    doubling steps.
    """
    t = np.asarray(t, dtype=float)
    q = np.asarray(q, dtype=float)
    if not (0.0 < discount <= 1.0):
        raise ValueError(f"discount must lie in (0, 1], got {discount}")
    q = 0.5 * (q + q.T)
    if t.size == 0:
        return q.copy()

    a = math.sqrt(discount) * t
    radius = spectral_radius(a)
    if radius >= 1.0 - UNIT_CIRCLE_TOL:
        raise NonStationaryError(
            f"spectral radius {radius:.12g} of sqrt(discount)*T is not inside the unit circle"
        )

    sigma = q.copy()
    bound = tol * (1.0 + np.max(np.abs(q), initial=0.0))
    for _ in range(max_iter):
        sigma_next = sigma + a @ sigma @ a.T
        sigma_next = 0.5 * (sigma_next + sigma_next.T)
        a = a @ a
        if np.max(np.abs(sigma_next - sigma)) <= 0.25 * bound:
            sigma = sigma_next
            break
        sigma = sigma_next
    residual = np.max(np.abs(sigma - discount * (t @ sigma @ t.T) - q))
    if residual > bound:
        raise NonConvergenceError(
            f"Lyapunov doubling stalled at residual {residual:.3e} (bound {bound:.3e})",
            residual=float(residual),
        )
    return sigma


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_scalar(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-8,
    *,
    grid_points: int = 21,
) -> tuple[float, float]:
    """Grid-seeded golden-section minimization on [lo, hi].

    A coarse scan over ``grid_points`` equally spaced seeds guards against
    non-unimodal objectives; golden-section search then refines a bracket
    around the best seed until its width is at most ``tol``.  Points where
    ``f`` raises are skipped during the scan (treated as +inf afterwards);
    if every seed fails, ObjectiveFailureError carries the recorded failures.

    Returns ``(argmin, value)``.  The result is never worse than the best
    seed, and ties within 1e-12 resolve to the smaller argument.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    xs = np.linspace(lo, hi, grid_points)
    values = np.full(grid_points, np.inf)
    failures: list[tuple[float, Exception]] = []
    for i, x in enumerate(xs):
        try:
            values[i] = f(float(x))
        except Exception as exc:  # recorded, point skipped
            failures.append((float(x), exc))
    if not np.any(np.isfinite(values)):
        raise ObjectiveFailureError(
            f"objective failed at all {grid_points} seed points; first failure: {failures[0][1]!r}"
        )
    vmin = float(np.min(values))
    # near-ties resolve to the smallest argument (flat objectives are stable)
    best = int(np.flatnonzero(values <= vmin + 1e-12 * (1.0 + abs(vmin)))[0])
    x_seed, f_seed = float(xs[best]), float(values[best])

    def safe(x: float) -> float:
        try:
            v = f(x)
        except Exception:
            return math.inf
        return v if math.isfinite(v) else math.inf

    a = float(xs[max(best - 1, 0)])
    b = float(xs[min(best + 1, grid_points - 1)])
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = safe(c), safe(d)
    while (b - a) > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = safe(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = safe(d)
    x_gold, f_gold = (c, fc) if fc <= fd else (d, fd)

    # Golden refinement must not lose to its own seed; break near-ties toward
    # the smaller argument so repeated runs and flat objectives are stable.
    tie = 1e-12 * (1.0 + min(abs(f_seed), abs(f_gold)))
    if f_gold < f_seed - tie:
        return x_gold, f_gold
    if f_seed < f_gold - tie:
        return x_seed, f_seed
    return (x_seed, f_seed) if x_seed <= x_gold else (x_gold, f_gold)
