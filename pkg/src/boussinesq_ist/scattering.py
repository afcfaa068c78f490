"""Direct scattering: Volterra solves for X and X^A, the matrices s and s^A,
the reflection coefficients r1 and r2, and the blow-up horizon estimate.

The Volterra equations are discretised by product integration: on each
grid cell the product U X is replaced by its linear interpolant and the
exponential kernel e^{(x-x')(l_i-l_j)} is integrated exactly.  The resulting
lower-triangular system is solved exactly by marching from the right edge
of the support (each step is a rank-one Sherman-Morrison update, because U
has rank one).  A plain Neumann iteration of the same discrete system is
available for comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import spectral as sp


class VolterraError(RuntimeError):
    """Non-convergence or breakdown of a Volterra solve."""

    def __init__(self, message, residual=float("nan")):
        self.residual = residual
        super().__init__(message)


class NearZeroDenominator(VolterraError):
    pass


# ---------------------------------------------------------------- data

def central_derivative(y, h):
    """Fourth-order central differences, second order at the two ends."""
    y = np.asarray(y, dtype=float)
    d = np.gradient(y, h, edge_order=2)
    if y.size >= 5:
        d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)
    return d


@dataclass(frozen=True)
class InitialData:
    """Initial data (u0, v0) sampled on a uniform grid."""

    x: np.ndarray
    u0: np.ndarray
    v0: np.ndarray
    decay_tail: float = 1e-13
    u0x: np.ndarray | None = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 1 or x.size < 3:
            raise ValueError("grid needs at least three points")
        steps = np.diff(x)
        h = (x[-1] - x[0]) / (x.size - 1)
        if h <= 0 or np.max(np.abs(steps - h)) > 1e-9 * abs(h) * max(1.0, np.max(np.abs(x)) / abs(h) * 1e-6):
            if np.max(np.abs(steps - h)) > 1e-9 * max(abs(h), np.max(np.abs(x)) * 1e-6):
                raise ValueError("grid is not uniformly spaced")
        for name in ("u0", "v0"):
            a = np.asarray(getattr(self, name), dtype=float)
            if a.shape != x.shape:
                raise ValueError(f"{name} has shape {a.shape}, grid has {x.shape}")
            if not np.all(np.isfinite(a)):
                raise ValueError(f"{name} has non-finite values")
            object.__setattr__(self, name, a)
        object.__setattr__(self, "x", x)
        if self.u0x is None:
            object.__setattr__(self, "u0x", central_derivative(self.u0, h))
        else:
            object.__setattr__(self, "u0x", np.asarray(self.u0x, dtype=float))

    @property
    def h(self):
        return (self.x[-1] - self.x[0]) / (self.x.size - 1)

    def tails_negligible(self):
        ends = [self.u0[0], self.u0[-1], self.v0[0], self.v0[-1]]
        return bool(np.max(np.abs(ends)) < self.decay_tail)

    def trimmed(self):
        """Restrict to the smallest grid window outside of which |u0|,|v0| < decay_tail."""
        big = np.nonzero((np.abs(self.u0) >= self.decay_tail) | (np.abs(self.v0) >= self.decay_tail))[0]
        if big.size == 0:
            return InitialData(self.x[:3], 0 * self.u0[:3], 0 * self.v0[:3], self.decay_tail)
        lo = max(big[0] - 2, 0)
        hi = min(big[-1] + 2, self.x.size - 1)
        return InitialData(self.x[lo:hi + 1], self.u0[lo:hi + 1], self.v0[lo:hi + 1],
                           self.decay_tail, self.u0x[lo:hi + 1])

    @classmethod
    def from_functions(cls, u0, v0, xmin, xmax, n, u0x=None, decay_tail=1e-13):
        x = np.linspace(xmin, xmax, n)
        return cls(x, u0(x), v0(x), decay_tail, None if u0x is None else u0x(x))

    @classmethod
    def from_u1(cls, x, u0, u1, decay_tail=1e-13):
        """Build v0 as the running integral of u1 (which must have zero mean)."""
        x = np.asarray(x, dtype=float)
        u1 = np.asarray(u1, dtype=float)
        h = x[1] - x[0]
        v0 = np.concatenate([[0.0], np.cumsum(0.5 * h * (u1[1:] + u1[:-1]))])
        scale = max(np.max(np.abs(u1)) * (x[-1] - x[0]), 1e-300)
        if abs(v0[-1]) > 1e-8 * scale:
            raise ValueError("u1 must integrate to zero; otherwise the mass grows linearly in t")
        return cls(x, np.asarray(u0, dtype=float), v0, decay_tail)


def compact_example_data(n=4097):
    """Compactly supported test data on [-1, 1] (u0 and v0 vanish outside)."""
    x = np.linspace(-1.0, 1.0, n)
    w = (1 - x * x) ** 2
    u0 = -np.exp(-x * x) * w
    v0 = 2 * (np.exp(-x * x) + 5 * (x - 0.2)) * w
    u0x = np.exp(-x * x) * (2 * x * w + 4 * x * (1 - x * x))
    return InitialData(x, u0, v0, u0x=u0x)


def gaussian_example_data(amplitude=-0.05, width=0.02, xmax=40.0, h=0.02):
    """u0 = amplitude * exp(-width x^2), u1 = 0 (so v0 = 0)."""
    n = int(round(2 * xmax / h)) + 1
    x = np.linspace(-xmax, xmax, n)
    u0 = amplitude * np.exp(-width * x * x)
    return InitialData(x, u0, 0 * x, u0x=-2 * width * x * u0)


# ---------------------------------------------------------------- potential

@dataclass
class PotentialMatrix:
    x: np.ndarray
    k: complex
    U: np.ndarray


def potential_row(data: InitialData):
    """Entries (3,1) and (3,2) of the undressed potential."""
    m31 = -data.u0x / 4 - 1j * data.v0 / (4 * sp.SQRT3)
    m32 = -data.u0 / 2
    return m31, m32


def build_potential(data: InitialData, k, radius=sp.SINGULAR_RADIUS) -> PotentialMatrix:
    """U(x, k) = P^{-1} M(x) P on every grid point; shape (n, 3, 3)."""
    sp.check_regular(k, radius)
    P = sp.p_matrix(k)
    Pinv = sp.p_inverse(k)
    m31, m32 = potential_row(data)
    c = Pinv[:, 2]
    b = m31[:, None] * P[0][None, :] + m32[:, None] * P[1][None, :]
    return PotentialMatrix(data.x, complex(k), c[None, :, None] * b[:, None, :])


# ---------------------------------------------------------------- kernels

def _phi_weights(z):
    """phi_a(z) = int_0^1 e^{-zs}(1-s) ds and phi_b(z) = int_0^1 e^{-zs} s ds."""
    z = np.asarray(z, dtype=complex)
    pa = np.empty_like(z)
    pb = np.empty_like(z)
    small = np.abs(z) < 0.25
    zs = z[small]
    # series: phi_a = sum_{n>=2} (-z)^{n-2}/n!, phi_b = sum_{n>=2} (n-1)(-z)^{n-2}/n!
    sa = np.zeros_like(zs)
    sb = np.zeros_like(zs)
    term = np.ones_like(zs)
    for n in range(2, 20):
        coef = 1.0 / math.factorial(n)
        sa += coef * term
        sb += (n - 1) * coef * term
        term = term * (-zs)
    pa[small] = sa
    pb[small] = sb
    zb = z[~small]
    e = np.exp(-zb)
    pa[~small] = (zb - 1 + e) / zb**2
    pb[~small] = (1 - e - zb * e) / zb**2
    return pa, pb


class _Kernel:
    """Per-k constants of the product-integration step (uniform step h)."""

    def __init__(self, k, h, columns, adjoint):
        k = np.atleast_1d(np.asarray(k, dtype=complex))
        self.k = k
        l = np.moveaxis(sp.l_values(k), 0, -1)                       # (K,3)
        self.l = l
        d = l[:, :, None] - l[:, None, :]                            # d_ij = l_i - l_j
        d = d[:, :, columns]
        self.d = d
        self.sign = 1.0 if adjoint else -1.0
        dd = -d if adjoint else d
        self.E = np.exp(-h * dd)
        pa, pb = _phi_weights(h * dd)
        self.A = h * pa
        self.B = h * pb
        Pinv = sp.p_inverse(k)
        self.c = Pinv[:, :, 2]                                       # (K,3)
        self.adjoint = adjoint
        self.columns = list(columns)

    def factors(self, m31, m32):
        """Rank-one factors (p, q) with U = p q^T (or U^T for the adjoint)."""
        b = m31 + m32 * self.l
        return (b, self.c) if self.adjoint else (self.c, b)


def _march(kern: _Kernel, m31, m32):
    """Exact solve of the discrete Volterra system; returns X at the left end."""
    n = m31.size
    K = kern.k.size
    ncol = len(kern.columns)
    y = np.zeros((K, 3, ncol), dtype=complex)
    for j, col in enumerate(kern.columns):
        y[:, col, j] = 1.0
    p, q = kern.factors(m31[-1], m32[-1])
    beta = np.einsum("ki,kij->kj", q, y)
    F = p[:, :, None] * beta[:, None, :]
    sgn = kern.sign
    for i in range(n - 2, -1, -1):
        p, q = kern.factors(m31[i], m32[i])
        R = kern.E * y + sgn * kern.B * F
        Ap = kern.A * p[:, :, None]
        qR = np.einsum("ki,kij->kj", q, R)
        qAp = np.einsum("ki,kij->kj", q, Ap)
        beta = qR / (1 - sgn * qAp)
        y = R + sgn * Ap * beta[:, None, :]
        F = p[:, :, None] * beta[:, None, :]
    if not np.all(np.isfinite(y)):
        raise VolterraError("non-finite values during the Volterra march")
    return y


def _neumann(kern: _Kernel, m31, m32, tol, max_iter):
    """Fixed-point (Neumann) iteration of the same discrete system."""
    n = m31.size
    K = kern.k.size
    ncol = len(kern.columns)
    eye = np.zeros((K, 3, ncol), dtype=complex)
    for j, col in enumerate(kern.columns):
        eye[:, col, j] = 1.0
    X = np.broadcast_to(eye, (n, K, 3, ncol)).copy()
    sgn = kern.sign
    last = np.inf
    for it in range(1, max_iter + 1):
        new = np.empty_like(X)
        J = np.zeros((K, 3, ncol), dtype=complex)
        p, q = kern.factors(m31[-1], m32[-1])
        Fn1 = p[:, :, None] * np.einsum("ki,kij->kj", q, X[-1])[:, None, :]
        new[-1] = eye
        for i in range(n - 2, -1, -1):
            p, q = kern.factors(m31[i], m32[i])
            Fn = p[:, :, None] * np.einsum("ki,kij->kj", q, X[i])[:, None, :]
            J = kern.E * J + kern.A * Fn + kern.B * Fn1
            new[i] = eye + sgn * J
            Fn1 = Fn
        last = float(np.max(np.abs(new - X)))
        X = new
        if not np.isfinite(last):
            break
        if last < tol:
            return X[0], it, last
    raise VolterraError(f"Neumann iteration did not converge in {max_iter} sweeps", last)


# ---------------------------------------------------------------- s, s^A

@dataclass
class ScatteringSample:
    k: complex
    s11: complex
    s12: complex
    sA11: complex
    sA12: complex
    converged: bool
    iterations: int


def _left_end_matrix(data, k, columns, adjoint, method, tol, max_iter):
    m31, m32 = potential_row(data)
    kern = _Kernel(k, data.h, columns, adjoint)
    if method == "march":
        X, it, res = _march(kern, m31, m32), 1, 0.0
    elif method == "neumann":
        X, it, res = _neumann(kern, m31, m32, tol, max_iter)
    else:
        raise ValueError(f"unknown method {method!r}")
    a = data.x[0]
    if adjoint:
        S = np.exp(a * kern.d) * X
    else:
        S = np.exp(-a * kern.d) * X
    return S, it, res


def scattering_matrices(data: InitialData, k, which="X", columns=(0, 1), method="march",
                        richardson=True, tol=1e-12, max_iter=200, radius=sp.SINGULAR_RADIUS):
    """Columns of s(k) (which='X') or s^A(k) (which='XA') at the points k.

    Returns (S, info) with S of shape (K, 3, len(columns)).  With
    ``richardson`` the result on the given grid is combined with the result
    on every second grid point, cancelling the leading h^2 error.
    """
    k = np.atleast_1d(np.asarray(k, dtype=complex))
    sp.check_regular(k, radius)
    adjoint = {"X": False, "XA": True}[which]
    S, it, res = _left_end_matrix(data, k, columns, adjoint, method, tol, max_iter)
    info = {"iterations": it, "residual": res, "richardson_change": 0.0}
    if richardson and (data.x.size - 1) % 2 == 0 and data.x.size >= 5:
        coarse = InitialData(data.x[::2], data.u0[::2], data.v0[::2], data.decay_tail, data.u0x[::2])
        S2, _, _ = _left_end_matrix(coarse, k, columns, adjoint, method, tol, max_iter)
        corr = (S - S2) / 3
        info["richardson_change"] = np.max(np.abs(corr), axis=(1, 2))
        S = S + corr
    return S, info


def solve_volterra(data: InitialData, k: complex, which="X", method="march", richardson=True,
                   tol=1e-12, max_iter=200, tol_zero=1e-12, full=False):
    """Scattering sample at a single k; entries (11), (12) of s and s^A."""
    cols = (0, 1, 2) if full else (0, 1)
    out = {}
    conv = True
    its = 0
    for w in (("X", "XA") if which == "both" else (which,)):
        S, info = scattering_matrices(data, [k], w, cols, method, richardson, tol, max_iter)
        out[w] = S[0]
        its = max(its, info["iterations"])
        conv = conv and np.all(np.asarray(info["richardson_change"]) < max(tol, 1e-6))
    s = out.get("X")
    sA = out.get("XA")
    if s is not None and abs(s[0, 0]) < tol_zero:
        raise NearZeroDenominator(f"|s11({k})| below {tol_zero}: possible soliton")
    nan = complex("nan")
    return ScatteringSample(
        complex(k),
        complex(s[0, 0]) if s is not None else nan,
        complex(s[0, 1]) if s is not None else nan,
        complex(sA[0, 0]) if sA is not None else nan,
        complex(sA[0, 1]) if sA is not None else nan,
        bool(conv), int(its))


def born_term(data: InitialData, k):
    """First Born approximation s - I ~ -int e^{-x ad L} U dx by Simpson's rule."""
    from scipy.integrate import simpson

    U = build_potential(data, k).U
    l = sp.l_values(complex(k))
    d = l[:, None] - l[None, :]
    integrand = np.exp(-data.x[:, None, None] * d[None]) * U
    return -simpson(integrand, x=data.x, axis=0)


# ---------------------------------------------------------------- tables

@dataclass
class ReflectionTable:
    """r1 and r2 on the unit circle, r1 on the ray (0, i)."""

    theta: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    converged: np.ndarray
    tau: np.ndarray = field(default_factory=lambda: np.zeros(0))
    r1_ray: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    s11: np.ndarray | None = None
    excluded: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def valid(self):
        return np.isfinite(self.r1) & np.isfinite(self.r2)

    def index_of(self, theta):
        """Sample index for the angle theta (mod 2 pi) if it lies on the grid."""
        n = self.theta.size
        step = 2 * np.pi / n
        j = np.rint((np.mod(theta - self.theta[0], 2 * np.pi)) / step).astype(int) % n
        return j


def circle_plan(n_theta=1200, exclusion=0.05):
    """Uniform angles (n_theta divisible by 6) and a mask of excluded samples."""
    if n_theta % 6:
        raise ValueError("n_theta must be divisible by 6 so that rotations map the grid to itself")
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    dist = np.abs(np.angle(np.exp(1j * theta)[:, None] / sp.KAPPA[None, :]))
    keep = np.min(dist, axis=1) >= exclusion
    arcs = [(float(np.mod(a - exclusion, 2 * np.pi)), float(np.mod(a + exclusion, 2 * np.pi)))
            for a in np.angle(sp.KAPPA)]
    return theta, keep, arcs


def reflection_coefficients(data: InitialData, n_theta=1200, exclusion=0.05, tau=None,
                            richardson=True, method="march", tol=1e-6, chunk=400,
                            tol_zero=1e-12):
    """Sample r1, r2 on the circle and r1 on the ray k = i tau."""
    data = data.trimmed() if data.tails_negligible() else data
    theta, keep, arcs = circle_plan(n_theta, exclusion)
    k = np.exp(1j * theta[keep])
    r1 = np.full(theta.size, np.nan + 0j)
    r2 = np.full(theta.size, np.nan + 0j)
    s11 = np.full(theta.size, np.nan + 0j)
    conv = np.zeros(theta.size, dtype=bool)
    idx = np.nonzero(keep)[0]
    for lo in range(0, idx.size, chunk):
        sl = idx[lo:lo + chunk]
        kk = k[lo:lo + chunk]
        S, info = scattering_matrices(data, kk, "X", (0, 1), method, richardson)
        SA, infoA = scattering_matrices(data, kk, "XA", (0, 1), method, richardson)
        s11[sl] = S[:, 0, 0]
        if np.any(np.abs(S[:, 0, 0]) < tol_zero) or np.any(np.abs(SA[:, 0, 0]) < tol_zero):
            raise NearZeroDenominator("near-zero s11 on the circle: possible soliton")
        r1[sl] = S[:, 0, 1] / S[:, 0, 0]
        r2[sl] = SA[:, 0, 1] / SA[:, 0, 0]
        ch = np.maximum(np.asarray(info["richardson_change"]) * np.ones(sl.size),
                        np.asarray(infoA["richardson_change"]) * np.ones(sl.size))
        conv[sl] = ch < tol
    if tau is None:
        tau = np.linspace(0.05, 0.95, 91)
    tau = np.asarray(tau, dtype=float)
    r1_ray = np.zeros(tau.size, dtype=complex)
    if tau.size:
        S, _ = scattering_matrices(data, 1j * tau, "X", (0, 1), method, richardson)
        r1_ray = S[:, 0, 1] / S[:, 0, 0]
    meta = {"n_theta": n_theta, "exclusion": exclusion, "grid_points": int(data.x.size),
            "xmin": float(data.x[0]), "xmax": float(data.x[-1]), "h": float(data.h),
            "richardson": bool(richardson), "method": method}
    return ReflectionTable(theta, r1, r2, conv, tau, r1_ray, s11, arcs, meta)


# ---------------------------------------------------------------- f, identities

def _rot(table, theta):
    j = table.index_of(theta)
    return j


def f_values(table: ReflectionTable):
    """f(e^{i theta}) on the grid (complex; NaN where an ingredient is missing)."""
    th = table.theta
    j2 = table.index_of(-th - 4 * np.pi / 3)          # 1/(omega^2 k)
    return 1 + table.r1 * table.r2 + table.r1[j2] * table.r2[j2]


def eval_f(table: ReflectionTable, theta, tol=1e-8):
    """Real value of f at theta by periodic interpolation of the grid values."""
    fv = f_values(table)
    ok = np.isfinite(fv)
    if np.max(np.abs(fv.imag[ok])) > tol * max(1.0, np.max(np.abs(fv[ok]))):
        raise ValueError("f has a non-negligible imaginary part: inconsistent scattering data")
    from .interp import periodic_spline

    return periodic_spline(table.theta[ok], fv.real[ok])(theta)


def _arg_in(theta, lo, hi):
    t = np.mod(theta, 2 * np.pi)
    return (t > lo) & (t < hi)


def verify_identities(table: ReflectionTable, tol=1e-6, tol_ineq=1e-8):
    """Residuals of the exact relations and inequalities on the sampled circle."""
    th = table.theta
    r1, r2 = table.r1, table.r2
    ok = table.valid
    report = []

    def add(name, residuals, tolerance, note=""):
        residuals = np.asarray(residuals, dtype=float)
        residuals = residuals[np.isfinite(residuals)]
        m = float(np.max(residuals)) if residuals.size else 0.0
        entry = {"name": name, "max_residual": m, "tolerance": tolerance,
                 "pass": bool(m < tolerance), "samples": int(residuals.size)}
        if note:
            entry["note"] = note
        report.append(entry)

    # circle relation r1(1/(wk)) + r2(wk) + r1(w^2 k) r2(1/k) = 0
    ja = table.index_of(-th - 2 * np.pi / 3)
    jb = table.index_of(th + 2 * np.pi / 3)
    jc = table.index_of(th + 4 * np.pi / 3)
    jd = table.index_of(-th)
    terms = [r1[ja], r2[jb], r1[jc] * r2[jd]]
    res = np.abs(terms[0] + terms[1] + terms[2]) / (1 + sum(np.abs(t) for t in terms))
    mask = ok & ok[ja] & ok[jb] & ok[jc] & ok[jd]
    add("circle_relation", res[mask], tol, "scaled by 1 + sum of term magnitudes")

    # r2 from r1 through the alternative closed form
    jw = table.index_of(th + 2 * np.pi / 3)
    jw2 = table.index_of(th + 4 * np.pi / 3)
    jinv = table.index_of(-th)
    jinvw = table.index_of(-th - 2 * np.pi / 3)
    num = r1[jw] * r1[jw2] - r1[jinv]
    den = 1 - r1[jw] * r1[jinvw]
    with np.errstate(invalid="ignore", divide="ignore"):
        alt = num / den
    mask2 = ok & ok[jw] & ok[jw2] & ok[jinv] & ok[jinvw] & (np.abs(den) > 1e-3)
    add("r2_alternative_form", (np.abs(alt - r2) / (1 + np.abs(r2)))[mask2], tol)

    # conjugate symmetry r2 = r~ conj(r1) on the circle
    rt, _ = sp.rtilde_on_circle(th)
    add("conjugate_symmetry", (np.abs(r2 - rt * np.conj(r1)) / (1 + np.abs(r2)))[ok], tol,
        "scaled by 1 + |r2|")

    fv = f_values(table)
    okf = np.isfinite(fv)
    if table.s11 is not None and np.any(np.isfinite(table.s11)):
        inv = 1 / np.abs(table.s11) ** 2
        m = okf & np.isfinite(inv)
        add("f_equals_inverse_abs_s11_squared", (np.abs(fv - inv) / (1 + np.abs(inv)))[m], tol)
    add("f_imaginary_part", np.abs(fv.imag)[okf], tol)

    f = fv.real
    add("f_nonnegative", np.maximum(-f, 0)[okf], tol_ineq)
    band = _arg_in(th, 2 * np.pi / 3, np.pi) | _arg_in(th, 5 * np.pi / 3, 2 * np.pi)
    add("f_at_most_one", np.maximum(f - 1, 0)[okf & band], tol_ineq)

    g = (1 + r1 * r2)
    band2 = _arg_in(th, np.pi / 3, np.pi) | _arg_in(th, 4 * np.pi / 3, 2 * np.pi)
    add("one_plus_r1r2_positive", np.maximum(-g.real, 0)[ok & band2], tol_ineq)
    add("one_plus_r1r2_real", np.abs(g.imag)[ok & band2], tol)
    band3 = _arg_in(th, 5 * np.pi / 3, 2 * np.pi)
    with np.errstate(invalid="ignore", divide="ignore"):
        nu = -np.log(g.real) / (2 * np.pi)
    add("minus_log_one_plus_r1r2_nonnegative", np.maximum(-nu, 0)[ok & band3 & (g.real > 0)], tol_ineq)

    with np.errstate(invalid="ignore", divide="ignore"):
        j1 = table.index_of(th + 2 * np.pi / 3)
        j2 = table.index_of(th + 4 * np.pi / 3)
        nu1 = -np.log(g.real[j1]) / (2 * np.pi)
        nu2 = -np.log(g.real[j2]) / (2 * np.pi)
        nu3 = -np.log(f[j1]) / (2 * np.pi)
        nu4 = -np.log(f[j2]) / (2 * np.pi)
    hat1 = nu3 - nu1
    hat2 = nu2 + nu3 - nu4
    m1 = band3 & np.isfinite(hat1)
    add("nu_hat_1_nonnegative", np.maximum(-hat1, 0)[m1], tol_ineq)
    m2 = _arg_in(th, np.pi, 4 * np.pi / 3) & np.isfinite(hat2)
    add("nu_hat_2_nonnegative", np.maximum(-hat2, 0)[m2], tol_ineq)

    # f decreases monotonically toward each zero +-1, +-omega
    viol = []
    for z in (1, -1, sp.OMEGA, -sp.OMEGA):
        a0 = np.angle(z)
        for side in (1, -1):
            dist = np.mod(side * (th - a0), 2 * np.pi)
            cand = np.nonzero(okf & (dist < np.pi / 6))[0]
            near = cand[np.argsort(dist[cand])][:5]
            vals = f[near]
            # ordered from nearest to farthest, f must increase
            viol.append(float(np.max(np.maximum(vals[:-1] - vals[1:], 0))) if vals.size > 1 else 0.0)
    add("f_decreases_toward_zeros", viol, tol_ineq)
    return report


# ---------------------------------------------------------------- blow-up

@dataclass
class BlowupEstimate:
    T_est: float
    fit_window: tuple
    residual: float
    samples: int


class InsufficientData(ValueError):
    pass


def estimate_blowup_T(tau, r1_ray, window=(0.05, 0.3), floor=1e-300, min_samples=3):
    """Slope of -ln|r1(i tau)| against X = 1/(4 tau^2) over the fit window.

    The fit is Y = T X + b ln X + c, so a power-law prefactor tau^p is
    absorbed by b instead of leaking into T.  +inf when r1 vanishes
    (underflows the floor) throughout the window; slopes below 1e-8 of the
    data scale, or negative, are reported as zero.
    """
    tau = np.asarray(tau, dtype=float)
    r = np.abs(np.asarray(r1_ray, dtype=complex))
    sel = (tau >= window[0] - 1e-12) & (tau <= window[1] + 1e-12)
    if np.count_nonzero(sel) < min_samples:
        raise InsufficientData(f"need at least {min_samples} ray samples in {window}")
    t, a = tau[sel], r[sel]
    if np.all(a <= floor):
        return BlowupEstimate(math.inf, tuple(window), 0.0, int(t.size))
    good = a > floor
    if np.count_nonzero(good) < min_samples:
        return BlowupEstimate(math.inf, tuple(window), 0.0, int(t.size))
    X = 1 / (4 * t[good] ** 2)
    Y = -np.log(a[good])
    M = np.stack([X, np.log(X), np.ones_like(X)], axis=1)
    coef, *_ = np.linalg.lstsq(M, Y, rcond=None)
    resid = float(np.sqrt(np.mean((M @ coef - Y) ** 2)))
    slope = float(coef[0])
    if slope < 1e-8 * max(1.0, float(np.max(np.abs(Y)))) / float(np.max(X)):
        slope = 0.0
    return BlowupEstimate(slope, tuple(window), resid, int(t.size))
