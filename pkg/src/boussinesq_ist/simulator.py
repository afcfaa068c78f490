"""Damped Fourier pseudo-spectral solver for u_tt = u_xx + (u^2)_xx + u_xxxx.

The equation is advanced as the first-order system

    u_t = v_x,    v_t = u_x + (u^2)_x + u_xxx

with classical RK4 in Fourier space.  Modes with |kappa| > 1 are linearly
unstable (growth rate kappa sqrt(kappa^2 - 1)); after every step both
fields are multiplied by exp(-gamma ((|kappa| - kappa_c)_+)^p dt), and
everything above the 2/3 dealiasing cutoff is removed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np


class InstabilityError(RuntimeError):
    def __init__(self, message, kappa=float("nan")):
        self.kappa = kappa
        super().__init__(message)


class WrapAroundError(RuntimeError):
    pass


@dataclass(frozen=True)
class Damping:
    kappa_c: float = 1.0
    p: float = 0.5
    gamma: float = 60.0
    enabled: bool = True


@dataclass(frozen=True)
class SimConfig:
    L: float = 4096.0
    N: int = 32768
    dt: float = 0.1
    damping: Damping = field(default_factory=Damping)
    dealias: float = 2 / 3
    t_end: float = 0.0
    snapshot_times: tuple = ()
    edge_guard: float = math.inf

    def __post_init__(self):
        if self.N % 2:
            raise ValueError("N must be even")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.damping.kappa_c < 1:
            raise ValueError("kappa_c must be at least 1 (modes below 1 are physical)")

    @property
    def x(self):
        return -self.L + 2 * self.L * np.arange(self.N) / self.N

    @property
    def kappa(self):
        return 2 * np.pi * np.fft.rfftfreq(self.N, d=2 * self.L / self.N)


@dataclass(frozen=True)
class FieldSnapshot:
    t: float
    x: np.ndarray
    u: np.ndarray
    v: np.ndarray


def damping_filter(kappa, damping: Damping, dt):
    if not damping.enabled:
        return np.ones_like(kappa)
    excess = np.maximum(np.abs(kappa) - damping.kappa_c, 0.0)
    return np.exp(-damping.gamma * excess**damping.p * dt)


def rk4_amplification(kappa, dt):
    """Largest RK4 amplification factor of the linear mode kappa."""
    lam = np.sqrt((kappa**2 * (kappa**2 - 1)).astype(complex))
    z = lam * dt
    poly = 1 + z + z**2 / 2 + z**3 / 6 + z**4 / 24
    poly_m = 1 - z + z**2 / 2 - z**3 / 6 + z**4 / 24
    return np.maximum(np.abs(poly), np.abs(poly_m))


class Simulator:
    """Single-owner mutable simulation state."""

    def __init__(self, config: SimConfig, u_hat, v_hat, t=0.0):
        self.config = config
        self.kappa = config.kappa
        self.u_hat = u_hat
        self.v_hat = v_hat
        self.t = t
        self.steps = 0
        cut = config.dealias * np.max(self.kappa)
        self.mask = (self.kappa <= cut).astype(float)
        self.filter = damping_filter(self.kappa, config.damping, config.dt) * self.mask
        self._ik = 1j * self.kappa
        self._lin = 1j * self.kappa * (1 - self.kappa**2)

    # -- construction

    @classmethod
    def from_fields(cls, config, u0, v0):
        u_hat = np.fft.rfft(np.asarray(u0, dtype=float))
        v_hat = np.fft.rfft(np.asarray(v0, dtype=float))
        sim = cls(config, u_hat, v_hat)
        sim.u_hat *= sim.mask
        sim.v_hat *= sim.mask
        return sim

    @classmethod
    def from_u1(cls, config, u0, u1, tol=1e-10):
        """v is the zero-mean antiderivative of u1, which must integrate to zero."""
        u1_hat = np.fft.rfft(np.asarray(u1, dtype=float))
        scale = max(np.sum(np.abs(u1)), 1e-300)
        if abs(u1_hat[0]) > tol * scale:
            raise ValueError("u1 must have zero integral: the mass of u would grow linearly in t")
        kappa = config.kappa
        v_hat = np.zeros_like(u1_hat)
        v_hat[1:] = u1_hat[1:] / (1j * kappa[1:])
        sim = cls(config, np.fft.rfft(np.asarray(u0, dtype=float)), v_hat)
        sim.u_hat *= sim.mask
        sim.v_hat *= sim.mask
        return sim

    # -- dynamics

    def _rhs(self, uh, vh):
        u = np.fft.irfft(uh, n=self.config.N)
        nl = np.fft.rfft(u * u) * self.mask
        return self._ik * vh, self._lin * uh + self._ik * nl

    def step(self):
        dt = self.config.dt
        u, v = self.u_hat, self.v_hat
        # overflow is caught by the finiteness check below
        with np.errstate(over="ignore", invalid="ignore"):
            k1u, k1v = self._rhs(u, v)
            k2u, k2v = self._rhs(u + dt / 2 * k1u, v + dt / 2 * k1v)
            k3u, k3v = self._rhs(u + dt / 2 * k2u, v + dt / 2 * k2v)
            k4u, k4v = self._rhs(u + dt * k3u, v + dt * k3v)
            self.u_hat = (u + dt / 6 * (k1u + 2 * k2u + 2 * k3u + k4u)) * self.filter
            self.v_hat = (v + dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)) * self.filter
        self.t += dt
        self.steps += 1
        if not (np.all(np.isfinite(self.u_hat)) and np.all(np.isfinite(self.v_hat))):
            amp = rk4_amplification(self.kappa, dt) * self.filter
            j = int(np.argmax(amp))
            raise InstabilityError(f"non-finite field at t={self.t:.6g}; largest growth at "
                                   f"kappa={self.kappa[j]:.6g} (factor {amp[j]:.6g} per step)",
                                   float(self.kappa[j]))
        return self

    def snapshot(self):
        c = self.config
        return FieldSnapshot(self.t, c.x, np.fft.irfft(self.u_hat, n=c.N), np.fft.irfft(self.v_hat, n=c.N))

    def mass(self):
        return float(np.real(self.u_hat[0])) * 2 * self.config.L / self.config.N

    def check_edges(self):
        g = self.config.edge_guard
        if math.isfinite(g):
            u = np.fft.irfft(self.u_hat, n=self.config.N)
            edge = max(abs(u[0]), abs(u[-1]))
            if edge > g:
                raise WrapAroundError(f"|u| = {edge:.3g} at the domain edge exceeds {g:g} at t={self.t:.6g}")


def run(sim: Simulator, config: SimConfig | None = None, progress=None):
    """Step to t_end, collecting snapshots at the requested times (nearest step)."""
    config = config or sim.config
    dt = config.dt
    n_end = int(round(config.t_end / dt))
    targets = {}
    for ts in config.snapshot_times:
        targets.setdefault(int(round(ts / dt)), []).append(ts)
    snaps = []
    if 0 in targets or n_end == 0:
        snaps.append(sim.snapshot())
    for n in range(1, n_end + 1):
        sim.step()
        if n in targets:
            sim.check_edges()
            snaps.append(sim.snapshot())
        if progress is not None:
            progress(n, n_end)
    if n_end > 0 and n_end not in targets:
        snaps.append(sim.snapshot())
    return snaps


def with_damping(config: SimConfig, **kw):
    return replace(config, damping=replace(config.damping, **kw))
