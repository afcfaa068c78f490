"""Long-time asymptotics of u(x, t) in the five sectors x >= 0.

All contour integrals run along arcs of the unit circle.  Integrands are
built from the interpolated reflection data (see interp.CircleData), and
each arc is integrated with Gauss-Legendre panels graded geometrically
toward both endpoints, where the integrands may have logarithmic
singularities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import loggamma

from . import spectral as sp
from .interp import CircleData
from .painleve import HastingsMcLeod, eval_uP

OMEGA = sp.OMEGA
TWO_PI = 2 * np.pi


class NearArcError(ValueError):
    pass


class LogDomainError(ValueError):
    pass


# ---------------------------------------------------------------- quadrature

@lru_cache(maxsize=8)
def _unit_graded_rule(order=24, levels=14, ratio=0.18):
    """Nodes on [0, 1/2] geometrically refined toward 0, with weights.

    The full rule on [0, 1] is this half and its mirror image; nodes are
    kept as distances from the nearer end so that nothing rounds onto an
    endpoint where the integrand may be singular.
    """
    brk = np.array([0.0] + [0.5 * ratio**j for j in range(levels, 0, -1)] + [0.5])
    g, w = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for a, b in zip(brk[:-1], brk[1:]):
        nodes.append(a + (b - a) * (g + 1) / 2)
        weights.append(w * (b - a) / 2)
    return np.concatenate(nodes), np.concatenate(weights)


def arc_rule(theta_start, theta_end, order=24, levels=14):
    """Angles and signed weights for integrating d(theta) from start to end."""
    span = theta_end - theta_start
    # keep the finest panel above ~1e-12 rad so no node rounds onto an endpoint
    cap = int(math.log(max(0.5 * abs(span), 1e-300) / 1e-12) / math.log(1 / 0.18))
    d, w = _unit_graded_rule(order, max(1, min(levels, cap)))
    th = np.concatenate([theta_start + span * d, (theta_end - span * d)[::-1]])
    return th, span * np.concatenate([w, w[::-1]])


# ---------------------------------------------------------------- branches

def _cross(u, v):
    return u.real * v.imag - u.imag * v.real


def branch_log(k, s, kind="ln"):
    """ln_s(k - s) (kind 'ln') or the tilde branch (kind 'tilde').

    'ln': the cut runs from s along the unit circle to i and then up the
    imaginary axis to i*inf; the argument is 2 pi where k - s = 1.
    'tilde': the cut runs from s along the unit circle to -1 and then along
    the negative real axis; the argument is 0 where k - s = 1.

    The reference branch has a straight cut along the chord from s to the
    corner point and beyond; two regions are then corrected by 2 pi: the thin
    circular segment between chord and arc, and the wedge between the
    extended chord and the second leg of the cut.
    """
    k = np.asarray(k, dtype=complex)
    s = np.asarray(s, dtype=complex)
    if kind == "ln":
        corner, leg, target = 1j, np.pi / 2, TWO_PI
    elif kind == "tilde":
        corner, leg, target = -1 + 0j, np.pi, 0.0
    else:
        raise ValueError(kind)
    k, s = np.broadcast_arrays(k, s)
    chord = corner - s
    deg = np.abs(chord) < 1e-14
    u = np.where(deg, np.exp(1j * leg), chord / np.where(deg, 1, np.abs(chord)))
    phi0 = np.angle(u)
    a = _ref_arg(k, s, u, phi0)
    # k = 1 and k = s + 1 are joined by a segment that avoids both cuts, and
    # |arg(1 - s)| < pi, so rounding at k = 1 fixes the value at k - s = 1
    a1 = _ref_arg(np.ones_like(k), s, u, phi0)
    # wedge at the corner between the extended chord and the second leg
    lu = np.exp(1j * leg)
    side_leg = _cross(u, lu)                     # > 0: leg lies ccw of the chord direction
    dk = k - corner
    in_wedge = (~deg) & (np.abs(dk) > 0) & (np.sign(_cross(u, dk)) == np.sign(side_leg)) & \
        (np.sign(_cross(lu, dk)) == -np.sign(side_leg))
    a = a + np.where(in_wedge, np.where(side_leg > 0, TWO_PI, -TWO_PI), 0.0)
    # circular segment between chord and arc (inside the unit disk)
    mid = np.exp(1j * (np.angle(s) + np.angle(corner / s) / 2))
    arc_side = np.sign(_cross(u, mid - s))
    in_seg = (~deg) & (np.abs(k) < 1) & (np.sign(_cross(u, k - s)) == arc_side)
    a = a + np.where(in_seg, np.where(arc_side > 0, TWO_PI, -TWO_PI), 0.0)
    shift = TWO_PI * np.round((target - a1) / TWO_PI)
    return np.log(np.abs(k - s)) + 1j * (a + shift)


def _ref_arg(z, s, u, phi0):
    """Argument of z - s continuous off the ray s + t u (t > 0), in (phi0 - 2pi, phi0)."""
    rel = np.angle((z - s) / u)            # in (-pi, pi], zero along the ray
    rel = np.where(rel > 0, rel - TWO_PI, rel)
    return phi0 + rel


def principal_log(z):
    return np.log(np.asarray(z, dtype=complex))


# ---------------------------------------------------------------- arcs

@dataclass(frozen=True)
class ArcLog:
    """A logarithm ln F(e^{i theta}) integrated from theta_start to theta_end."""

    name: str
    theta_start: float
    theta_end: float
    lnF: object
    dlnF: object
    singular_end: bool = False

    def contains(self, k, tol):
        k = complex(k)
        lo, hi = sorted((self.theta_start, self.theta_end))
        th = np.angle(k)
        th = lo + np.mod(th - lo, TWO_PI)
        if lo - tol <= th <= hi + tol:
            return abs(abs(k) - 1) < tol
        # distance to the endpoints
        ends = np.exp(1j * np.array([lo, hi]))
        return bool(np.min(np.abs(ends - k)) < tol)


@dataclass
class DeltaChi:
    which: str
    k: complex
    value: complex
    chi: complex
    branch_log: str
    log_value: complex = 0j


def delta_cauchy(arc: ArcLog, k, order=24, levels=14):
    """log delta(k) = (1/2 pi i) int ln F(s) / (s - k) ds by direct quadrature."""
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    th, w = arc_rule(arc.theta_start, arc.theta_end, order, levels)
    s = np.exp(1j * th)
    lnF = arc.lnF(th)
    ds = 1j * s * w
    return (lnF * ds) @ (1 / (s[:, None] - k[None, :])) / (2j * np.pi)


def chi_integral(arc: ArcLog, k, kind="ln", order=24, levels=14):
    """chi(k) = (1/2 pi i) int ln_s(k - s) d ln F(s), regularised at a singular end."""
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    th, w = arc_rule(arc.theta_start, arc.theta_end, order, levels)
    s = np.exp(1j * th)
    dF = arc.dlnF(th) * w
    L = branch_log(k[None, :], s[:, None], kind)
    if arc.singular_end:
        se = np.exp(1j * arc.theta_end)
        Le = branch_log(k, se, kind)
        th0 = np.array([arc.theta_start])
        body = dF @ (L - Le[None, :])
        return (body - Le * arc.lnF(th0)[0]) / (2j * np.pi)
    return (dF @ L) / (2j * np.pi)


def delta_closed_form(arc: ArcLog, k, kind="ln", order=24, levels=14):
    """log delta(k) through integration by parts (endpoint logs minus chi)."""
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    chi = chi_integral(arc, k, kind, order, levels)
    sa = np.exp(1j * arc.theta_start)
    out = -arc.lnF(np.array([arc.theta_start]))[0] * branch_log(k, sa, kind) / (2j * np.pi) - chi
    if not arc.singular_end:
        sb = np.exp(1j * arc.theta_end)
        out = out + arc.lnF(np.array([arc.theta_end]))[0] * branch_log(k, sb, kind) / (2j * np.pi)
    return out


# ---------------------------------------------------------------- tables

def as_circle(data) -> CircleData:
    """CircleData for a ReflectionTable (cached on the table) or CircleData itself."""
    if isinstance(data, CircleData):
        return data
    cd = getattr(data, "_circle_cache", None)
    if cd is None:
        cd = CircleData(data)
        try:
            object.__setattr__(data, "_circle_cache", cd)
        except AttributeError:
            pass
    return cd


# ---------------------------------------------------------------- nu values

@dataclass
class NuValues:
    at: complex
    nu1: float
    nu2: float
    nu3: float
    nu4: float
    nu5: float
    nu_hat1: float
    nu_hat2: float


def _theta(k):
    return float(np.mod(np.angle(complex(k)), TWO_PI))


def _safe_log(values, what, where):
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise LogDomainError(f"{what} is not positive at {where}; this violates the sign "
                             "conditions the reflection data must satisfy on the circle")
    return np.log(values)


def eval_nu(cd, k) -> NuValues:
    """nu_1..nu_4 at k, their hatted combinations, and nu_5 := nu_3 at k."""
    cd = as_circle(cd)
    th = _theta(k)
    w1, w2 = th + 2 * np.pi / 3, th + 4 * np.pi / 3
    g1 = float(cd.g(np.array([w1]))[0])
    g2 = float(cd.g(np.array([w2]))[0])
    nu1 = -float(_safe_log(g1, "1 + r1 r2", "omega k")) / TWO_PI
    nu2 = -float(_safe_log(g2, "1 + r1 r2", "omega^2 k")) / TWO_PI
    nu3 = -float(cd.ln_f(np.array([w1]))[0]) / TWO_PI
    nu4 = -float(cd.ln_f(np.array([w2]))[0]) / TWO_PI
    return NuValues(complex(k), nu1, nu2, nu3, nu4, nu3, nu3 - nu1, nu2 + nu3 - nu4)


# ---------------------------------------------------------------- arc families

def _shifted(fn, shift):
    return lambda th, nu=None: fn(np.asarray(th) + shift)


def front_arc(cd):
    """Arc of the wave-front delta: clockwise from omega to i, integrand ln(1 + r1 r2)."""
    return ArcLog("delta", 2 * np.pi / 3, np.pi / 2, cd.ln_g, cd.dln_g)


def sector_arcs(cd: CircleData, zeta, sector):
    """The five arcs (and integrands) defining delta_1..delta_5 in Sector IV or V."""
    sad = sp.saddle_points(zeta)
    t4 = _theta(OMEGA * sad.k4)
    t2 = _theta(OMEGA**2 * sad.k2)
    rot = 4 * np.pi / 3            # F(omega^2 s)
    arcs = {}
    if sector == "IV":
        arcs["delta1"] = ArcLog("delta1", t4, np.pi / 2, cd.ln_g, cd.dln_g)
        arcs["delta2"] = ArcLog("delta2", t4, t2, cd.ln_g, cd.dln_g)
        arcs["delta3"] = ArcLog("delta3", t4, t2, cd.ln_f, cd.dln_f)
    elif sector == "V":
        arcs["delta1"] = ArcLog("delta1", t4, np.pi / 2, _shifted(cd.ln_g, rot), _shifted(cd.dln_g, rot))
        arcs["delta2"] = ArcLog("delta2", np.pi / 2, t2, cd.ln_g, cd.dln_g)
        arcs["delta3"] = ArcLog("delta3", np.pi / 2, t2, cd.ln_f, cd.dln_f)
    else:
        raise ValueError(sector)
    arcs["delta4"] = ArcLog("delta4", t2, 2 * np.pi / 3, cd.ln_f, cd.dln_f, singular_end=True)
    arcs["delta5"] = ArcLog("delta5", t2, 2 * np.pi / 3, _shifted(cd.ln_f, rot),
                            _shifted(cd.dln_f, rot), singular_end=True)
    return arcs


def eval_delta_chi(cd, which, k, zeta=None, sector="IV", kind="ln", dist_min=1e-6):
    """delta (direct Cauchy quadrature) and chi at k.

    which: 'delta' (wave front, no zeta needed) or 'delta1'..'delta5' of
    Sector IV or V at the given zeta.
    """
    cd = as_circle(cd)
    arc = front_arc(cd) if which == "delta" else sector_arcs(cd, zeta, sector)[which]
    if arc.contains(k, dist_min):
        raise NearArcError(f"k={complex(k)!r} lies on or within {dist_min} of the arc of {which}")
    logd = complex(delta_cauchy(arc, k)[0])
    chi = complex(chi_integral(arc, k, kind)[0])
    return DeltaChi(which, complex(k), complex(np.exp(logd)), chi, kind, logd)


# ---------------------------------------------------------------- amplitudes

@dataclass
class AsymptoticTerm:
    sector: str
    amplitudes: list
    phases: list
    decay_exponent: float
    error_order: str
    details: dict = field(default_factory=dict)

    def value(self, t):
        if self.sector == "III":
            return self.details["u"]
        return sum(a * math.cos(p) for a, p in zip(self.amplitudes, self.phases)) / math.sqrt(t)


def _branch_fixed_zstar(radicand, point):
    """sqrt(2) e^{i pi/4} sqrt(radicand) with the sign making -i point z* > 0."""
    z = np.sqrt(2) * np.exp(1j * np.pi / 4) * np.sqrt(complex(radicand))
    if (-1j * point * z).real < 0:
        z = -z
    return z


def _log_zstar(z, point):
    """log z* = ln|z*| + i (pi/2 - arg point)."""
    return math.log(abs(z)) + 1j * (np.pi / 2 - np.angle(point))


def _arg_gamma(x):
    return float(np.imag(loggamma(1j * x))) if x != 0 else 0.0


def _r1(cd, k):
    return complex(cd.r1(np.array([_theta(k)]))[0])


def _rt_abs_sqrt(k):
    return math.sqrt(abs(complex(sp.rtilde(complex(k)))))


def beta_integral(cd: CircleData, k1, order=24, levels=14):
    """(1/2 pi) int_i^{k1} ln|...| d ln(1 + r1 r2) along the circle, counterclockwise."""
    th, w = arc_rule(np.pi / 2, _theta(k1), order, levels)
    s = np.exp(1j * th)
    num = (k1 - s) ** 2 * (1 / (OMEGA**2 * k1) - s) * (1 / (OMEGA * k1) - s)
    den = (1 / k1 - s) ** 2 * (OMEGA * k1 - s) * (OMEGA**2 * k1 - s)
    integrand = np.log(np.abs(num / den)) * cd.dln_g(th)
    return float(np.sum(integrand * w)) / TWO_PI


def eval_sector_I_II(cd, zeta, t):
    cd = as_circle(cd)
    if zeta <= 1:
        raise ValueError("Sectors I/II need zeta > 1")
    k1 = sp.saddle_points(zeta).k1
    g = float(cd.g(np.array([_theta(k1)]))[0])
    nu = -float(_safe_log(g, "1 + r1 r2", "k1")) / TWO_PI
    zs = _branch_fixed_zstar((4 - 3 * k1 * zeta - k1**3 * zeta) / (4 * k1**4), k1)
    dphi = float(sp.dzeta_im_phase(zeta, k1, 21))
    ang = np.angle(k1)
    den = (-1j * k1 * zs)
    A = 2 * np.sqrt(3) * math.sqrt(max(-nu, 0.0)) * math.sqrt(-1 - 2 * math.cos(2 * ang)) / den * dphi
    r2k1 = complex(cd.r2(np.array([_theta(k1)]))[0])
    c = abs((1 / (OMEGA**2 * k1) - k1) * (1 / (OMEGA * k1) - k1) / (3 * (1 / k1 - k1) ** 2 * zs**2))
    beta = nu * math.log(c) - nu * math.log(t) + beta_integral(cd, k1)
    phase_t = float(np.imag(sp.phase(zeta, k1, 21)))
    alpha = 3 * np.pi / 4 + np.angle(r2k1) + _arg_gamma(nu) + beta + t * phase_t
    sector = "I" if zeta >= 2 else "II"
    return AsymptoticTerm(sector, [float(np.real(A))], [float(alpha)], 0.5,
                          "ln t / t", {"nu": nu, "k1": k1, "z_star": zs, "beta": beta,
                                        "amplitude_imag": float(np.imag(A))})


def eval_sector_III(t, x, hm: HastingsMcLeod):
    if not hm.converged:
        raise RuntimeError("Hastings-McLeod solution is not converged")
    y = (2 / (3 * t)) ** (1 / 3) * (x - t)
    uP = float(eval_uP(hm, np.array([y]))[0])
    return AsymptoticTerm("III", [], [], 2 / 3, "t^(-5/6)", {"y": y, "u_P": uP, "u": uP / t ** (2 / 3)})


class _DeltaBank:
    """Cached delta_j values (direct Cauchy quadrature) for one zeta."""

    def __init__(self, arcs):
        self.arcs = arcs

    def log(self, j, k):
        return complex(delta_cauchy(self.arcs[f"delta{j}"], k)[0])


def _log_D1(bank, k, sector):
    w, w2 = OMEGA, OMEGA**2
    L = bank.log
    if sector == "IV":
        t1 = L(1, w * k) + 2 * L(1, 1 / (w2 * k)) - 2 * L(1, w2 * k) - L(1, 1 / (w * k)) - L(1, 1 / k)
        t2 = L(2, w2 * k) + 2 * L(2, 1 / k) - 2 * L(2, w * k) - L(2, 1 / (w2 * k)) - L(2, 1 / (w * k))
        t3 = L(3, w * k) + L(3, w2 * k) + 2 * L(3, 1 / (w * k)) - L(3, 1 / k) - L(3, 1 / (w2 * k))
    else:
        t1 = L(1, w2 * k) + 2 * L(1, 1 / (w * k)) + L(1, w * k) - L(1, 1 / k) - L(1, 1 / (w2 * k))
        t2 = L(2, k) + L(2, w2 * k) + 2 * L(2, 1 / k) - 2 * L(2, w * k) - L(2, 1 / (w2 * k)) - L(2, 1 / (w * k))
        t3 = L(3, w * k) + L(3, w2 * k) + 2 * L(3, 1 / (w * k)) - 2 * L(3, k) - L(3, 1 / k) - L(3, 1 / (w2 * k))
    t4 = 2 * L(4, w2 * k) + L(4, 1 / k) + L(4, 1 / (w * k)) - L(4, k) - L(4, w * k) - 2 * L(4, 1 / (w2 * k))
    t5 = 2 * L(5, w * k) + L(5, 1 / (w * k)) + L(5, 1 / (w2 * k)) - L(5, k) - 2 * L(5, 1 / k) - L(5, w2 * k)
    return t1 + t2 + t3 + t4 + t5


def _log_D2(bank, k, sector):
    w, w2 = OMEGA, OMEGA**2
    L = bank.log
    if sector == "IV":
        t1 = 2 * L(1, w * k) + L(1, 1 / (w2 * k)) + L(1, 1 / k) - L(1, w2 * k) - 2 * L(1, 1 / (w * k)) - L(1, k)
    else:
        t1 = 2 * L(1, w2 * k) + L(1, 1 / (w * k)) + L(1, 1 / (w2 * k)) - L(1, k) - 2 * L(1, 1 / k) - L(1, w * k)
    t2 = L(2, 1 / k) + L(2, 1 / (w * k)) - L(2, w * k) - 2 * L(2, 1 / (w2 * k)) - L(2, w2 * k)
    t3 = 2 * L(3, w2 * k) + L(3, 1 / (w * k)) + L(3, 1 / (w2 * k)) - 2 * L(3, 1 / k) - L(3, w * k)
    t4 = L(4, w2 * k) + 2 * L(4, 1 / (w * k)) - 2 * L(4, w * k) - L(4, 1 / (w2 * k)) - L(4, 1 / k)
    t5 = L(5, w * k) + 2 * L(5, 1 / (w2 * k)) + L(5, w2 * k) - L(5, 1 / k) - L(5, 1 / (w * k))
    return t1 + t2 + t3 + t4 + t5


def _chi(arcs, j, k, kind):
    return complex(chi_integral(arcs[f"delta{j}"], k, kind)[0])


def _common_IV_V(cd, zeta):
    sad = sp.saddle_points(zeta)
    k2, k4 = sad.k2, sad.k4
    p1 = OMEGA * k4                 # saddle of Phi_31
    p2 = OMEGA**2 * k2              # saddle of Phi_32
    z1 = _branch_fixed_zstar(OMEGA * (4 - 3 * k4 * zeta - k4**3 * zeta) / (4 * k4**4), p1)
    z2 = _branch_fixed_zstar(-OMEGA**2 * (4 - 3 * k2 * zeta - k2**3 * zeta) / (4 * k2**4), p2)
    nu_k4 = eval_nu(cd, k4)
    nu_k2 = eval_nu(cd, k2)
    dphi31 = float(sp.dzeta_im_phase(zeta, p1, 31))
    dphi32 = float(sp.dzeta_im_phase(zeta, p2, 32))
    return sad, k2, k4, p1, p2, z1, z2, nu_k4, nu_k2, dphi31, dphi32


def _amp2(nu_hat2, k2, p2, z2, dphi32):
    den = -1j * p2 * z2
    return (-4 * np.sqrt(3) * math.sqrt(max(nu_hat2, 0.0)) * _rt_abs_sqrt(1 / k2) * dphi32
            / den * math.sin(np.angle(p2)))


def _q_values(cd, k2, k4):
    q2 = np.sqrt(complex(sp.rtilde(OMEGA**2 * k2))) * _r1(cd, OMEGA**2 * k2)
    q5 = _rt_abs_sqrt(OMEGA * k2) * _r1(cd, OMEGA * k2)
    q6 = _rt_abs_sqrt(1 / k2) * _r1(cd, 1 / k2)
    q3 = _rt_abs_sqrt(1 / k4) * _r1(cd, 1 / k4)
    q1 = np.sqrt(complex(sp.rtilde(OMEGA * k4))) * _r1(cd, OMEGA * k4)
    qt1 = _rt_abs_sqrt(k4) * _r1(cd, k4)
    return {"q1": q1, "q2": q2, "q3": q3, "q5": q5, "q6": q6, "qt1": qt1}


def log_d_coefficients_IV(cd, zeta, t):
    """log d_{1,0} and log d_{2,0} (Sector IV)."""
    cd = as_circle(cd)
    sad, k2, k4, p1, p2, z1, z2, n4, n2, *_ = _common_IV_V(cd, zeta)
    arcs = sector_arcs(cd, zeta, "IV")
    bank = _DeltaBank(arcs)
    nu1, nu3 = n4.nu1, n4.nu3
    nu2, nu4, nu5 = n2.nu2, n2.nu4, n2.nu3
    lt = math.log(t)
    lz1, lz2 = _log_zstar(z1, p1), _log_zstar(z2, p2)
    log_d1 = (-_chi(arcs, 1, p1, "ln") - _chi(arcs, 2, p1, "tilde") + 2 * _chi(arcs, 3, p1, "tilde")
              + 1j * (nu2 - 2 * nu4) * complex(branch_log(p1, p2, "tilde"))
              + 1j * (nu1 - nu3) * lt + 2j * (nu1 - nu3) * lz1 + _log_D1(bank, p1, "IV"))
    log_d2 = (-2 * _chi(arcs, 2, p2, "ln") + _chi(arcs, 3, p2, "ln") - _chi(arcs, 4, p2, "tilde")
              + 2 * _chi(arcs, 5, p2, "tilde")
              + 1j * (nu3 - 2 * nu1) * complex(branch_log(p2, p1, "ln"))
              + 1j * (nu4 - nu5 - nu2) * lt + 2j * (nu4 - nu5 - nu2) * lz2 + _log_D2(bank, p2, "IV"))
    return log_d1, log_d2, {"nu1": nu1, "nu2": nu2, "nu3": nu3, "nu4": nu4, "nu5": nu5}


def log_d_coefficients_V(cd, zeta, t):
    """log of the tilde d_{1,0} and d_{2,0} coefficients (Sector V)."""
    cd = as_circle(cd)
    sad, k2, k4, p1, p2, z1, z2, n4, n2, *_ = _common_IV_V(cd, zeta)
    arcs = sector_arcs(cd, zeta, "V")
    bank = _DeltaBank(arcs)
    nu1_w2k4 = eval_nu(cd, OMEGA**2 * k4).nu1
    nu3_w2i = -float(cd.ln_f(np.array([np.pi / 2]))[0]) / TWO_PI     # nu_3(omega^2 i)
    lt = math.log(t)
    lz1, lz2 = _log_zstar(z1, p1), _log_zstar(z2, p2)
    log_d1 = (-4 * np.pi * nu1_w2k4 + 2 * _chi(arcs, 1, p1, "ln")
              - 2j * nu3_w2i * complex(branch_log(p1, 1j, "ln"))
              - 1j * nu1_w2k4 * lt - 2j * nu1_w2k4 * lz1 + _log_D1(bank, p1, "V"))
    e = n2.nu4 - n2.nu3 - n2.nu2
    log_d2 = (-2 * _chi(arcs, 2, p2, "ln") + _chi(arcs, 3, p2, "ln") - _chi(arcs, 4, p2, "tilde")
              + 2 * _chi(arcs, 5, p2, "tilde")
              + 1j * nu3_w2i * complex(branch_log(p2, 1j, "ln"))
              + 1j * e * lt + 2j * e * lz2 + _log_D2(bank, p2, "V"))
    return log_d1, log_d2, {"nu1_w2k4": nu1_w2k4, "nu3_w2i": nu3_w2i}


def eval_sector_IV(cd, zeta, t):
    cd = as_circle(cd)
    if not (1 / np.sqrt(3) <= zeta < 1):
        raise ValueError("Sector IV needs 1/sqrt(3) <= zeta < 1")
    sad, k2, k4, p1, p2, z1, z2, n4, n2, dphi31, dphi32 = _common_IV_V(cd, zeta)
    q = _q_values(cd, k2, k4)
    nh1, nh2 = n4.nu_hat1, n2.nu_hat2
    A1 = (-4 * np.sqrt(3) * math.sqrt(max(nh1, 0.0)) * dphi31
          / (-1j * p1 * z1 * _rt_abs_sqrt(1 / k4)) * math.sin(np.angle(p1)))
    A2 = _amp2(nh2, k2, p2, z2, dphi32)
    ld1, ld2, nus = log_d_coefficients_IV(cd, zeta, t)
    a1 = (3 * np.pi / 4 + np.angle(q["q3"]) + _arg_gamma(nh1) + ld1.imag
          - t * float(np.imag(sp.phase(zeta, p1, 31))))
    a2 = (3 * np.pi / 4 - np.angle(q["q6"] - q["q2"] * q["q5"]) + _arg_gamma(nh2) + ld2.imag
          - t * float(np.imag(sp.phase(zeta, p2, 32))))
    return AsymptoticTerm("IV", [float(np.real(A1)), float(np.real(A2))], [float(a1), float(a2)], 0.5,
                          "ln t / t", {"nu_hat1": nh1, "nu_hat2": nh2, "log_d10": ld1, "log_d20": ld2,
                                        "amplitude_imag": [float(np.imag(A1)), float(np.imag(A2))],
                                        **nus, **q})


def eval_sector_V(cd, zeta, t):
    cd = as_circle(cd)
    if not (0 <= zeta < 1 / np.sqrt(3)):
        raise ValueError("Sector V needs 0 <= zeta < 1/sqrt(3)")
    sad, k2, k4, p1, p2, z1, z2, n4, n2, dphi31, dphi32 = _common_IV_V(cd, zeta)
    q = _q_values(cd, k2, k4)
    ld1, ld2, nus = log_d_coefficients_V(cd, zeta, t)
    n1 = nus["nu1_w2k4"]
    nh2 = n2.nu_hat2
    A1 = (-4 * np.sqrt(3) * math.sqrt(max(n1, 0.0)) * dphi31
          / (-1j * p1 * z1 * _rt_abs_sqrt(1 / k4)) * math.sin(np.angle(p1)))
    A2 = _amp2(nh2, k2, p2, z2, dphi32)
    a1 = (3 * np.pi / 4 - np.angle(q["qt1"]) + _arg_gamma(n1) + ld1.imag
          - t * float(np.imag(sp.phase(zeta, p1, 31))))
    a2 = (3 * np.pi / 4 - np.angle(q["q6"] - q["q2"] * q["q5"]) + _arg_gamma(nh2) + ld2.imag
          - t * float(np.imag(sp.phase(zeta, p2, 32))))
    return AsymptoticTerm("V", [float(np.real(A1)), float(np.real(A2))], [float(a1), float(a2)], 0.5,
                          "ln t / t", {"nu_hat2": nh2, "log_d10": ld1, "log_d20": ld2,
                                        "amplitude_imag": [float(np.imag(A1)), float(np.imag(A2))],
                                        **nus, **q})


# ---------------------------------------------------------------- dispatch

@dataclass
class AsymptoteConfig:
    M: float = 2.0
    t_min: float = 1.0
    sector_I_from: float = 2.0
    transition_width: float = 0.05


@dataclass
class AsymptoticValue:
    x: float
    t: float
    u: float
    sector: str
    extrapolated: bool


def classify_point(x, t, config: AsymptoteConfig = AsymptoteConfig()):
    """(sector, extrapolated) for x >= 0."""
    zeta = x / t
    if abs(zeta - 1) <= config.M * t ** (-2 / 3):
        return "III", False
    ext = abs(zeta - 1) < config.transition_width
    if zeta > 1:
        return ("I" if zeta >= config.sector_I_from else "II"), ext
    if zeta >= 1 / np.sqrt(3):
        return "IV", ext
    return "V", ext or zeta == 0


def u_asymptotic(cd, hm: HastingsMcLeod, x, t, config: AsymptoteConfig = AsymptoteConfig()):
    if t < config.t_min:
        raise ValueError(f"t={t} is below t_min={config.t_min}")
    cd = as_circle(cd)
    xr = abs(x)                      # the formulas are invariant under x -> -x
    sector, ext = classify_point(xr, t, config)
    zeta = xr / t
    if sector == "III":
        term = eval_sector_III(t, xr, hm)
    elif sector in ("I", "II"):
        term = eval_sector_I_II(cd, zeta, t)
    elif sector == "IV":
        term = eval_sector_IV(cd, zeta, t)
    else:
        term = eval_sector_V(cd, zeta, t)
    return AsymptoticValue(float(x), float(t), float(term.value(t)), sector, bool(ext))
