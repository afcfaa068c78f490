"""Smooth interpolation of reflection data sampled on the unit circle."""
from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from . import spectral as sp


def periodic_spline(theta, values):
    """Periodic cubic spline in the angle through (possibly gappy) samples."""
    theta = np.asarray(theta, dtype=float)
    values = np.asarray(values)
    order = np.argsort(theta)
    th = theta[order]
    va = values[order]
    th = np.concatenate([th, [th[0] + 2 * np.pi]])
    va = np.concatenate([va, va[:1]])
    spl = CubicSpline(th, va, bc_type="periodic")
    start = th[0]

    def f(x, nu=0):
        x = start + np.mod(np.asarray(x, dtype=float) - start, 2 * np.pi)
        return spl(x, nu)

    return f


_ZEROS_OF_F = np.angle(np.array([1, -1, sp.OMEGA, -sp.OMEGA]))


def _log_zero_factor(theta, nu=0):
    """sum over the zeros z0 of f of 2 ln|e^{i theta} - z0| (and its theta-derivatives)."""
    theta = np.asarray(theta, dtype=float)
    out = np.zeros_like(theta)
    for a in _ZEROS_OF_F:
        half = (theta - a) / 2
        if nu == 0:
            # |e^{i theta} - e^{i a}| = 2|sin((theta-a)/2)|
            with np.errstate(divide="ignore"):
                out += 2 * np.log(2 * np.abs(np.sin(half)))
        elif nu == 1:
            out += 1 / np.tan(half)
        else:
            raise ValueError(nu)
    return out


class CircleData:
    """Interpolated r1, r2, 1 + r1 r2 and f on the whole unit circle.

    r1 is splined directly (it is smooth and bounded on the circle).  r2 is
    rebuilt from r2 = r~ conj(r1).  ln f is splined after removing its
    logarithmic zeros at +-1 and +-omega, which are known in closed form.
    """

    def __init__(self, table):
        self.table = table
        ok = np.isfinite(table.r1)
        th = table.theta[ok]
        self._r1re = periodic_spline(th, table.r1.real[ok])
        self._r1im = periodic_spline(th, table.r1.imag[ok])
        from .scattering import f_values

        fv = f_values(table).real
        okf = np.isfinite(fv) & (fv > 0)
        resid = np.log(fv[okf]) - _log_zero_factor(table.theta[okf])
        self._lnf_smooth = periodic_spline(table.theta[okf], resid)

    def r1(self, theta):
        return self._r1re(theta) + 1j * self._r1im(theta)

    def dr1(self, theta):
        return self._r1re(theta, 1) + 1j * self._r1im(theta, 1)

    def r2(self, theta):
        rt, _ = sp.rtilde_on_circle(theta)
        return rt * np.conj(self.r1(theta))

    def g(self, theta):
        """1 + r1 r2 = 1 + r~ |r1|^2 (real on the circle)."""
        rt, _ = sp.rtilde_on_circle(theta)
        return 1 + rt * np.abs(self.r1(theta)) ** 2

    def dg(self, theta):
        rt, drt = sp.rtilde_on_circle(theta)
        r = self.r1(theta)
        dr = self.dr1(theta)
        return drt * np.abs(r) ** 2 + 2 * rt * np.real(np.conj(r) * dr)

    def ln_g(self, theta):
        return np.log(self.g(theta))

    def dln_g(self, theta):
        return self.dg(theta) / self.g(theta)

    def ln_f(self, theta):
        return self._lnf_smooth(theta) + _log_zero_factor(theta)

    def dln_f(self, theta):
        return self._lnf_smooth(theta, 1) + _log_zero_factor(theta, 1)

    def f(self, theta):
        return np.exp(self.ln_f(theta))
