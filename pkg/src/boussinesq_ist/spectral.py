"""Spectral-plane geometry for the bad Boussinesq Lax pair.

Everything here is a pure function of the spectral parameter ``k`` (and of
the ray parameter ``zeta = x/t`` for the phase functions).  Inputs may be
scalars or numpy arrays; outputs follow numpy broadcasting.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OMEGA = np.exp(2j * np.pi / 3)
SQRT3 = np.sqrt(3.0)
# sixth roots of unity, kappa_1 = 1, kappa_2 = e^{i pi/3}, ...
KAPPA = np.exp(1j * np.pi * np.arange(6) / 3)

SINGULAR_RADIUS = 1e-3

SUBSONIC = "subsonic"
MIDRANGE = "midrange"
TRANSITION = "transition"
SUPERSONIC = "supersonic"


class SingularPointError(ValueError):
    """Raised when k is too close to 0 or to a sixth root of unity."""

    def __init__(self, k, nearest, distance):
        self.k = k
        self.nearest = nearest
        self.distance = distance
        super().__init__(
            f"k={k!r} lies within {distance:.3g} of the singular point {nearest!r}"
        )


def nearest_singular_point(k):
    """Return (point, distance) of the closest element of {0} U {kappa_j}."""
    k = complex(k)
    cands = np.concatenate([[0.0], KAPPA])
    d = np.abs(cands - k)
    j = int(np.argmin(d))
    return complex(cands[j]), float(d[j])


def check_regular(k, radius=SINGULAR_RADIUS, roots=True):
    """Refuse k inside the exclusion disks around 0 and (optionally) the kappa_j."""
    for kk in np.atleast_1d(np.asarray(k, dtype=complex)).ravel():
        if abs(kk) < radius:
            raise SingularPointError(complex(kk), 0j, abs(kk))
        if roots:
            p, d = nearest_singular_point(kk)
            if d < radius:
                raise SingularPointError(complex(kk), p, d)


@dataclass(frozen=True)
class SpectralPoint:
    k: complex
    l: tuple
    z: tuple


def _lz_arrays(k):
    k = np.asarray(k, dtype=complex)
    wk = OMEGA ** np.arange(1, 4).reshape((3,) + (1,) * k.ndim) * k
    l = 1j * (wk + 1 / wk) / (2 * SQRT3)
    z = 1j * (wk**2 + wk**-2) / (4 * SQRT3)
    return l, z


def l_values(k):
    """l_1, l_2, l_3 stacked along the first axis."""
    return _lz_arrays(k)[0]


def z_values(k):
    return _lz_arrays(k)[1]


def eval_lz(k) -> SpectralPoint:
    if complex(k) == 0:
        raise SingularPointError(0j, 0j, 0.0)
    l, z = _lz_arrays(complex(k))
    return SpectralPoint(complex(k), tuple(complex(v) for v in l), tuple(complex(v) for v in z))


def p_matrix(k):
    """Vandermonde matrix in (l_1, l_2, l_3); shape (..., 3, 3)."""
    l = np.moveaxis(l_values(k), 0, -1)
    return np.stack([np.ones_like(l), l, l * l], axis=-2)


def det_p_closed_form(k):
    k = np.asarray(k, dtype=complex)
    return 1j * (OMEGA**2 - OMEGA) * (1 - k**6) / (8 * SQRT3 * k**3)


def eval_P(k, radius=SINGULAR_RADIUS):
    """Return (P(k), det P(k)) with the closed-form determinant.

    Raises SingularPointError near a sixth root of unity, where P is singular.
    """
    k = complex(k)
    check_regular(k, radius)
    return p_matrix(k), complex(det_p_closed_form(k))


def p_inverse(k):
    """Inverse of P(k) from the Vandermonde structure (batched)."""
    l = l_values(k)
    l1, l2, l3 = l[0], l[1], l[2]
    # Lagrange basis: row j of P^{-1} holds the coefficients of
    # prod_{m != j} (x - l_m) / (l_j - l_m) in the monomials 1, x, x^2
    rows = []
    for a, b, c in ((l1, l2, l3), (l2, l1, l3), (l3, l1, l2)):
        den = (a - b) * (a - c)
        rows.append(np.stack([b * c / den, -(b + c) / den, 1 / den], axis=-1))
    return np.stack(rows, axis=-2)


# ---------------------------------------------------------------- phases

_PAIRS = {21: (1, 0), 31: (2, 0), 32: (2, 1)}


@dataclass(frozen=True)
class PhaseValue:
    zeta: float
    pair_ij: int
    value: complex
    dk: complex


def _dl_dz(k):
    k = np.asarray(k, dtype=complex)
    w = OMEGA ** np.arange(1, 4).reshape((3,) + (1,) * k.ndim)
    dl = 1j * (w - 1 / (w * k * k)) / (2 * SQRT3)
    dz = 1j * (2 * w * w * k - 2 / (w * w * k**3)) / (4 * SQRT3)
    return dl, dz


def phase(zeta, k, pair=21):
    """Phi_ij(zeta, k) = (l_i - l_j) zeta + (z_i - z_j)."""
    i, j = _PAIRS[pair]
    l, z = _lz_arrays(k)
    return (l[i] - l[j]) * zeta + (z[i] - z[j])


def phase_dk(zeta, k, pair=21):
    i, j = _PAIRS[pair]
    dl, dz = _dl_dz(k)
    return (dl[i] - dl[j]) * zeta + (dz[i] - dz[j])


def phase_dkk(zeta, k, pair=21):
    i, j = _PAIRS[pair]
    k = np.asarray(k, dtype=complex)
    w = OMEGA ** np.arange(1, 4).reshape((3,) + (1,) * k.ndim)
    d2l = 1j * (2 / (w * k**3)) / (2 * SQRT3)
    d2z = 1j * (2 * w * w + 6 / (w * w * k**4)) / (4 * SQRT3)
    return (d2l[i] - d2l[j]) * zeta + (d2z[i] - d2z[j])


def eval_phase(zeta: float, k: complex, pair: int = 21) -> PhaseValue:
    if complex(k) == 0:
        raise SingularPointError(0j, 0j, 0.0)
    return PhaseValue(float(zeta), pair, complex(phase(zeta, k, pair)),
                      complex(phase_dk(zeta, k, pair)))


def dzeta_im_phase(zeta_unused, k, pair=21):
    """d/dzeta Im Phi_ij(zeta, k(zeta)) at a saddle point k(zeta).

    The k-derivative vanishes at a saddle, so only the explicit
    zeta-dependence survives: Im(l_i - l_j)(k).
    """
    i, j = _PAIRS[pair]
    l = l_values(k)
    return np.imag(l[i] - l[j])


# ---------------------------------------------------------------- saddles

@dataclass(frozen=True)
class SaddleConfig:
    zeta: float
    k1: complex
    k2: complex
    k3: complex
    k4: complex
    regime: str

    @property
    def points(self):
        return (self.k1, self.k2, self.k3, self.k4)


def classify(zeta):
    """Regime tag; the thresholds are half-open (1/sqrt3 -> midrange, 1 -> transition)."""
    if zeta < 1 / SQRT3:
        return SUBSONIC
    if zeta < 1:
        return MIDRANGE
    if zeta == 1:
        return TRANSITION
    return SUPERSONIC


def saddle_points(zeta: float) -> SaddleConfig:
    """The four saddle points of Phi_21(zeta, .) for zeta >= 0."""
    zeta = float(zeta)
    if zeta < 0 or not np.isfinite(zeta):
        raise ValueError(f"zeta must be finite and >= 0, got {zeta}")
    if zeta == 1.0:
        # all radicands vanish together; use the limit values
        return SaddleConfig(1.0, OMEGA, OMEGA.conjugate(), 1 + 0j, 1 + 0j, TRANSITION)
    root = np.sqrt(8 + zeta * zeta)
    a = np.sqrt(complex(4 - zeta * zeta + zeta * root))
    b = np.sqrt(complex(-4 + zeta * zeta + zeta * root))
    s2 = np.sqrt(2.0)
    k1 = (zeta - root + 1j * s2 * a) / 4
    k2 = (zeta - root - 1j * s2 * a) / 4
    k3 = (zeta + root + s2 * b) / 4
    k4 = (zeta + root - s2 * b) / 4
    return SaddleConfig(zeta, complex(k1), complex(k2), complex(k3), complex(k4), classify(zeta))


# ---------------------------------------------------------------- r tilde

def rtilde(k):
    k = np.asarray(k, dtype=complex)
    return (OMEGA**2 - k * k) / (1 - OMEGA**2 * k * k)


def eval_rtilde(k, radius=1e-12):
    k = complex(k)
    for pole in (OMEGA**2, -(OMEGA**2)):
        if abs(k - pole) < radius:
            raise SingularPointError(k, complex(pole), abs(k - pole))
    return complex(rtilde(k))


def rtilde_on_circle(theta):
    """Real values of r~(e^{i theta}) and their theta-derivative."""
    k = np.exp(1j * np.asarray(theta, dtype=float))
    den = 1 - OMEGA**2 * k * k
    val = (OMEGA**2 - k * k) / den
    # d/dk r~ = (-2k(1 - w^2 k^2) + 2 w^2 k (w^2 - k^2)) / den^2
    dk = (-2 * k * den + 2 * OMEGA**2 * k * (OMEGA**2 - k * k)) / den**2
    return np.real(val), np.real(1j * k * dk)
