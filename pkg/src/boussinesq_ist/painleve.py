"""Hastings-McLeod solution of Painleve II, u'' = y u + 2 u^3.

The boundary value problem on [-y_max, y_max] is solved with second-order
central differences and Newton's method; two Richardson levels (grids h,
h/2, h/4) lift the nodal values to sixth order.  Outside the grid the
solution is continued with its asymptotic tails:

    u ~ Ai(y)                                     y -> +inf
    u ~ sqrt(-y/2) (1 + 1/(8 y^3) - 73/(128 y^6))  y -> -inf

The 1/8 coefficient follows by inserting sqrt(-y/2)(1 + a y^-3) in the
equation: y u + 2 u^3 = -2 a sqrt(-y/2) y^-2 must balance
(sqrt(-y/2))'' = -sqrt(-y/2)/(4 y^2), so a = 1/8.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.linalg import solve_banded
from scipy.special import airy

UP_SCALE = 2 ** (2 / 3) * 3 ** (1 / 3)


class NewtonDivergence(RuntimeError):
    pass


def left_tail(y):
    """Three-term expansion of u and u' for y -> -inf."""
    y = np.asarray(y, dtype=float)
    s = np.sqrt(-y / 2)
    corr = 1 + 1 / (8 * y**3) - 73 / (128 * y**6)
    dcorr = -3 / (8 * y**4) + 6 * 73 / (128 * y**7)
    ds = -1 / (4 * s)
    return s * corr, ds * corr + s * dcorr


def right_tail(y):
    ai, aip, _, _ = airy(np.asarray(y, dtype=float))
    return ai, aip


def _initial_guess(y):
    ai, _ = right_tail(np.maximum(y, 0))
    c = 0.254
    left = np.sqrt((np.sqrt(y * y + c) - y) / 4)
    return np.where(y > 0, ai * left[np.argmin(np.abs(y))] / ai[np.argmin(np.abs(y))], left)


def _fd_solve(y, guess, tol=1e-13, max_iter=50):
    """Newton solve of the central-difference equations; Dirichlet left, Robin right."""
    n = y.size
    h = y[1] - y[0]
    u = guess.copy()
    u[0] = left_tail(y[0])[0]
    ai, aip = right_tail(y[-1])
    rho = aip / ai
    for it in range(max_iter):
        F = np.empty(n)
        F[0] = 0.0
        F[1:-1] = (u[2:] - 2 * u[1:-1] + u[:-2]) / h**2 - y[1:-1] * u[1:-1] - 2 * u[1:-1] ** 3
        # ghost node from u'(y_max) = rho u(y_max)
        F[-1] = (2 * u[-2] - 2 * u[-1] + 2 * h * rho * u[-1]) / h**2 - y[-1] * u[-1] - 2 * u[-1] ** 3
        ab = np.zeros((3, n))
        diag = -2 / h**2 - y - 6 * u**2
        diag[0] = 1.0
        diag[-1] += 2 * rho / h
        ab[1] = diag
        ab[0, 2:] = 1 / h**2          # superdiagonal
        ab[2, :-2] = 1 / h**2         # subdiagonal
        ab[2, -2] = 2 / h**2
        du = solve_banded((1, 1), ab, -F)
        u += du
        if not np.all(np.isfinite(u)):
            raise NewtonDivergence("Newton iteration diverged; try continuation in y_max or damping")
        if np.max(np.abs(du)) < tol:
            return u, it + 1
    raise NewtonDivergence(f"Newton did not converge in {max_iter} iterations "
                           f"(last update {np.max(np.abs(du)):.3g}); try damping or continuation")


def _richardson_levels(ymax, n):
    """Nodal values on the coarse grid, extrapolated from grids h, h/2, h/4."""
    sols = []
    for m in (1, 2, 4):
        y = np.linspace(-ymax, ymax, (n - 1) * m + 1)
        u, _ = _fd_solve(y, _initial_guess(y))
        sols.append(u[::m])
    r1a = (4 * sols[1] - sols[0]) / 3
    r1b = (4 * sols[2] - sols[1]) / 3
    return (16 * r1b - r1a) / 15, float(np.max(np.abs(r1b - r1a)))


def _derivative8(u, h):
    """Eighth-order central first derivative, lower order near the ends."""
    c = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
    d = np.gradient(u, h, edge_order=2)
    d[4:-4] = sum(c[j] * u[j:u.size - 8 + j] for j in range(9)) / h
    return d


def _second_derivative8(u, h):
    c = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])
    d = np.full(u.shape, np.nan)
    d[4:-4] = sum(c[j] * u[j:u.size - 8 + j] for j in range(9)) / h**2
    return d


@dataclass
class HastingsMcLeod:
    y_grid: np.ndarray
    u: np.ndarray
    u_prime: np.ndarray
    converged: bool
    refinement_change: float = 0.0

    def __post_init__(self):
        self._spline = CubicHermiteSpline(self.y_grid, self.u, self.u_prime)

    @property
    def y_max(self):
        return float(self.y_grid[-1])

    def residual(self, margin=1.0):
        """max |u'' - y u - 2u^3| over nodes at least `margin` inside the grid."""
        h = self.y_grid[1] - self.y_grid[0]
        upp = _second_derivative8(self.u, h)
        r = upp - self.y_grid * self.u - 2 * self.u**3
        inner = np.abs(self.y_grid) <= self.y_max - margin
        return float(np.nanmax(np.abs(r[inner])))

    def eval(self, y):
        """(u, u') with asymptotic tails outside the grid."""
        y = np.asarray(y, dtype=float)
        u = np.empty_like(y)
        up = np.empty_like(y)
        lo = y < self.y_grid[0]
        hi = y > self.y_grid[-1]
        mid = ~(lo | hi)
        u[mid] = self._spline(y[mid])
        up[mid] = self._spline(y[mid], 1)
        if np.any(lo):
            u[lo], up[lo] = left_tail(y[lo])
        if np.any(hi):
            u[hi], up[hi] = right_tail(y[hi])
        return u, up


def solve_hastings_mcleod(y_max=12.0, n=2401) -> HastingsMcLeod:
    if y_max < 6:
        raise ValueError("y_max must be at least 6")
    if n < 200:
        raise ValueError("n must be at least 200")
    if n % 2 == 0:
        n += 1          # keep y = 0 on the grid
    u, change = _richardson_levels(y_max, n)
    y = np.linspace(-y_max, y_max, n)
    h = y[1] - y[0]
    up = _derivative8(u, h)
    # the ends use the exact boundary relations instead of one-sided differences
    up[0] = left_tail(y[0])[1]
    ai, aip = right_tail(y[-1])
    up[-1] = aip / ai * u[-1]
    return HastingsMcLeod(y, u, up, True, change)


def eval_uP(hm: HastingsMcLeod, y):
    """u_P(y) = 2^{2/3} 3^{1/3} (u'(y) - u(y)^2)."""
    u, up = hm.eval(y)
    return UP_SCALE * (up - u * u)


def chebyshev_hastings_mcleod(y_max=12.0, n=240, tol=1e-13, max_iter=60):
    """Independent Chebyshev-collocation solve; returns a callable u(y) and the nodes."""
    j = np.arange(n + 1)
    xc = np.cos(np.pi * j / n)
    c = np.where((j == 0) | (j == n), 2.0, 1.0) * (-1.0) ** j
    X = np.tile(xc, (n + 1, 1)).T
    dX = X - X.T
    D = np.outer(c, 1 / c) / (dX + np.eye(n + 1))
    D -= np.diag(D.sum(axis=1))
    D /= y_max
    D2 = D @ D
    y = y_max * xc
    u = _initial_guess(y)
    ai, aip = right_tail(y_max)
    rho = aip / ai
    for it in range(max_iter):
        F = D2 @ u - y * u - 2 * u**3
        J = D2 - np.diag(y + 6 * u**2)
        F[0] = D[0] @ u - rho * u[0]
        J[0] = D[0] - rho * np.eye(n + 1)[0]
        F[-1] = u[-1] - left_tail(-y_max)[0]
        J[-1] = np.eye(n + 1)[-1]
        du = np.linalg.solve(J, -F)
        u = u + du
        if np.max(np.abs(du)) < tol:
            break
    else:
        raise NewtonDivergence("Chebyshev Newton iteration did not converge")
    w = np.where((j == 0) | (j == n), 0.5, 1.0) * (-1.0) ** j

    def interp(yy):
        # barycentric interpolation in the Chebyshev nodes
        yy = np.atleast_1d(np.asarray(yy, dtype=float))
        diff = yy[:, None] - y[None, :]
        exact = np.isclose(diff, 0, atol=1e-15)
        diff[exact] = 1.0
        tmp = w / diff
        out = (tmp @ u) / tmp.sum(axis=1)
        rows, cols = np.nonzero(exact)
        out[rows] = u[cols]
        return out

    return interp, y, u
