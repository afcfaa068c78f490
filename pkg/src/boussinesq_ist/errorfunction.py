"""Complex error function and the explicit error-function model m^W.

The Faddeeva function w(z) = e^{-z^2} erfc(-iz) is evaluated with
Weideman's rational expansion in the upper half plane, a Laplace continued
fraction far from the origin, and the reflection w(z) = 2e^{-z^2} - w(-z)
below the real axis.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_SQRT_PI = np.sqrt(np.pi)


@lru_cache(maxsize=4)
def _weideman_coefficients(n):
    m = 2 * n
    k = np.arange(-m + 1, m)
    L = np.sqrt(n / np.sqrt(2))
    theta = k * np.pi / m
    t = L * np.tan(theta / 2)
    f = np.concatenate([[0.0], np.exp(-t * t) * (L * L + t * t)])
    a = np.real(np.fft.fft(np.fft.fftshift(f))) / (2 * m)
    return np.flipud(a[1:n + 1]), L


def _w_upper_rational(z, n=48):
    a, L = _weideman_coefficients(n)
    Z = (L + 1j * z) / (L - 1j * z)
    p = np.polyval(a, Z)
    return 2 * p / (L - 1j * z) ** 2 + (1 / _SQRT_PI) / (L - 1j * z)


def _w_upper_cf(z, depth=80):
    # w(z) = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...))))
    tail = np.zeros_like(z)
    for m in range(depth, 0, -1):
        tail = (m / 2) / (z - tail)
    return 1j / _SQRT_PI / (z - tail)


def faddeeva(z):
    """w(z) = e^{-z^2} erfc(-i z) for complex z (vectorised)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    lower = z.imag < 0
    zu = np.where(lower, -z, z)
    far = np.abs(zu) > 8
    res = np.empty_like(zu)
    if np.any(far):
        res[far] = _w_upper_cf(zu[far])
    if np.any(~far):
        res[~far] = _w_upper_rational(zu[~far])
    out[~lower] = res[~lower]
    zl = z[lower]
    out[lower] = 2 * np.exp(-zl * zl) - res[lower]
    return out


def erf_complex(z):
    """erf(z) = 1 - e^{-z^2} w(iz)."""
    z = np.asarray(z, dtype=complex)
    return 1 - np.exp(-z * z) * faddeeva(1j * z)


def erf_by_quadrature(z, n=400):
    """erf(z) = (2/sqrt(pi)) z int_0^1 e^{-z^2 s^2} ds by Gauss-Legendre (oracle)."""
    s, wts = np.polynomial.legendre.leggauss(n)
    s = (s + 1) / 2
    wts = wts / 2
    z = np.asarray(z, dtype=complex)
    return 2 / _SQRT_PI * z * np.sum(wts * np.exp(-np.multiply.outer(z * z, s * s)), axis=-1)


# ---------------------------------------------------------------- m^W

SIGMA = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)
LINE_ANGLE = np.pi / 6


@dataclass
class ErrorFunctionModel:
    y_tilde: float
    s_param: complex
    w: complex
    value: np.ndarray


def _side(w):
    """+1 on the side arg w in (pi/6, 7pi/6) (left of the oriented line), -1 on the other."""
    return np.where(np.imag(w * np.exp(-1j * LINE_ANGLE)) > 0, 1, -1)


def mW_entry(y_tilde, s, w, side=None):
    """The (12) entry g of m^W; the (32) entry is -g.

    `side` forces the boundary value: +1 for the limit from arg w in
    (pi/6, 7pi/6), -1 from arg w in (-5pi/6, pi/6).
    """
    if y_tilde <= -1:
        raise ValueError("y_tilde must exceed -1")
    w = np.asarray(w, dtype=complex)
    z = np.exp(1j * np.pi / 4) * w * np.sqrt(3.0) * np.sqrt(1 + y_tilde)
    sd = _side(w) if side is None else np.broadcast_to(side, w.shape)
    # e^{z^2}(erf z - 1) = -w(iz);  e^{z^2}(erf z + 1) = w(-iz)
    out = np.empty(z.shape, dtype=complex)
    up = sd > 0
    out[up] = s / 2 * faddeeva(-1j * z[up])
    out[~up] = -s / 2 * faddeeva(1j * z[~up])
    return out[()] if out.ndim == 0 else out


def mW_matrix(y_tilde, s, w, side=None):
    g = mW_entry(y_tilde, s, w, side)
    out = np.zeros(np.shape(g) + (3, 3), dtype=complex)
    out[..., 0, 0] = out[..., 1, 1] = out[..., 2, 2] = 1
    out[..., 0, 1] = g
    out[..., 2, 1] = -g
    return out


def eval_mW(y_tilde, s, w, side=None) -> ErrorFunctionModel:
    return ErrorFunctionModel(float(y_tilde), complex(s), complex(w),
                              mW_matrix(y_tilde, s, complex(w), side))


def jump_matrix(y_tilde, s, w):
    """v^W = e^{alpha tau^} [[1, s, 0], [0, 1, 0], [0, -s, 1]], alpha = i(1+y~)w^2, tau = diag(1,-2,1)."""
    w = np.asarray(w, dtype=complex)
    e3 = np.exp(3j * (1 + y_tilde) * w * w)
    v = np.zeros(w.shape + (3, 3), dtype=complex)
    v[..., 0, 0] = v[..., 1, 1] = v[..., 2, 2] = 1
    v[..., 0, 1] = s * e3
    v[..., 2, 1] = -s * e3
    return v


def jump_residual(y_tilde, s, w):
    """max |m_+ - m_- v| at points w on the line e^{i pi/6} R."""
    mp = mW_matrix(y_tilde, s, w, side=+1)
    mm = mW_matrix(y_tilde, s, w, side=-1)
    v = jump_matrix(y_tilde, s, w)
    return float(np.max(np.abs(mp - mm @ v)))


def m_coefficient(y_tilde, s, j):
    """(12) entry of the coefficient of w^{-(2j+1)} in the large-w expansion."""
    prod = 1.0
    for m in range(1, j + 1):
        prod *= 0.5 - m
    return -s / (2 * _SQRT_PI) * prod / (np.exp(1j * np.pi / 4 * (2 * j + 1)) * (3 * (1 + y_tilde)) ** (j + 0.5))


def leading_coefficient(y_tilde, s):
    """s e^{3 pi i/4} / (sqrt(12 pi) sqrt(1 + y~)), the (12) entry of m_1^W."""
    return s * np.exp(3j * np.pi / 4) / (np.sqrt(12 * np.pi) * np.sqrt(1 + y_tilde))


def richardson_coefficients(y_tilde, s, radii=(25.0, 50.0, 100.0), direction=0.0):
    """m_1 and m_3 from samples w (m - I)_{12} at three radii.

    w g(w) = m_1 + m_3 w^-2 + m_5 w^-4 + ..., so two elimination steps in
    w^-2 remove the m_3 and m_5 terms from the estimate of m_1.
    """
    ws = np.asarray(radii, dtype=float) * np.exp(1j * direction)
    vals = ws * mW_entry(y_tilde, s, ws)
    x = ws ** -2
    # polynomial in x through three points, value and slope at x = 0
    V = np.vander(x, 3, increasing=True)
    coef = np.linalg.solve(V, vals)
    return coef[0], coef[1]
