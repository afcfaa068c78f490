"""Gap metrics between simulated and asymptotic u over sector windows."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline


class HashMismatch(ValueError):
    pass


@dataclass
class Windows:
    """Sector windows; zeta intervals except Sector III, which is |x - t| <= c t^(1/3)."""

    I: tuple = (2.0, 3.0)
    II: tuple = (1.2, 2.0)
    IV: tuple = (0.65, 0.95)
    V: tuple = (0.1, 0.5)
    III_width: float = 2.0

    def mask(self, sector, x, t):
        if sector == "III":
            return np.abs(x - t) <= self.III_width * t ** (1 / 3)
        lo, hi = getattr(self, sector)
        z = x / t
        return (z >= lo) & (z <= hi)

    def describe(self):
        return {"I": list(self.I), "II": list(self.II), "IV": list(self.IV), "V": list(self.V),
                "III": f"|x - t| <= {self.III_width} t^(1/3)"}


SECTORS = ("I", "II", "III", "IV", "V")
# natural scaling of the gap: leading terms decay like t^-1/2 (t^-2/3 in III)
SCALE_EXPONENT = {"I": 0.5, "II": 0.5, "III": 2 / 3, "IV": 0.5, "V": 0.5}


@dataclass
class CompareReport:
    times: list
    windows: dict
    metrics: list
    trend: dict
    flags: list = field(default_factory=list)
    settings: dict = field(default_factory=dict)

    def as_dict(self):
        return {"times": self.times, "windows": self.windows, "metrics": self.metrics,
                "trend": self.trend, "flags": self.flags, "settings": self.settings}

    def metric(self, t, sector):
        for m in self.metrics:
            if m["sector"] == sector and abs(m["t"] - t) < 1e-9 * max(1.0, abs(t)):
                return m
        raise KeyError((t, sector))


def near_critical_part(x, u, band=(0.975, 1.0)):
    """Part of a periodic grid function with wavenumbers |kappa| in the band."""
    n = u.size
    h = x[1] - x[0]
    k = 2 * np.pi * np.fft.rfftfreq(n, h)
    U = np.fft.rfft(u)
    return np.fft.irfft(U * ((k >= band[0]) & (k <= band[1])), n=n)


def sample_sim(x_sim, u_sim, x):
    """Periodic-grid values at x: exact on grid points, cubic spline otherwise."""
    h = x_sim[1] - x_sim[0]
    j = np.rint((x - x_sim[0]) / h).astype(int)
    on = (j >= 0) & (j < x_sim.size) & np.isclose(x_sim[np.clip(j, 0, x_sim.size - 1)], x, atol=1e-9 * h)
    out = np.empty_like(x, dtype=float)
    out[on] = u_sim[j[on]]
    if np.any(~on):
        out[~on] = CubicSpline(x_sim, u_sim)(x[~on])
    return out


def _gaps(gap, u_ref, dx):
    linf = float(np.max(np.abs(gap))) if gap.size else float("nan")
    l2 = float(np.sqrt(np.sum(gap**2) * dx)) if gap.size else float("nan")
    ref_inf = float(np.max(np.abs(u_ref))) if gap.size else float("nan")
    ref_l2 = float(np.sqrt(np.sum(u_ref**2) * dx)) if gap.size else float("nan")
    return {
        "linf": linf,
        "l2": l2,
        "rel_linf": linf / ref_inf if ref_inf > 0 else (0.0 if linf == 0 else float("inf")),
        "rel_l2": l2 / ref_l2 if ref_l2 > 0 else (0.0 if l2 == 0 else float("inf")),
    }


def compare(snapshots, asym, windows: Windows = Windows(), sim_hash=None, asym_hash=None,
            include_extrapolated=False, time_tol=1e-6, band=(0.975, 1.0)):
    """snapshots: list of FieldSnapshot; asym: dict of arrays x, t, u, sector, extrapolated."""
    if sim_hash is not None and asym_hash is not None and sim_hash != asym_hash:
        raise HashMismatch(f"simulation data hash {sim_hash} differs from asymptote data hash {asym_hash}")
    times = sorted(set(np.round(asym["t"], 12).tolist()))
    metrics, flags, used = [], [], []
    for t in times:
        snap = min(snapshots, key=lambda s: abs(s.t - t))
        if abs(snap.t - t) > time_tol * max(1.0, t):
            continue
        used.append(t)
        rows = np.abs(asym["t"] - t) <= 1e-9 * max(1.0, t)
        x = asym["x"][rows]
        ua = asym["u"][rows]
        ext = asym["extrapolated"][rows]
        half = snap.x[-1] + (snap.x[1] - snap.x[0])     # periodic half-length
        inside = np.abs(x) < half
        us = np.full(x.shape, np.nan)
        us[inside] = sample_sim(snap.x, snap.u, x[inside])
        nc = np.full(x.shape, np.nan)
        nc[inside] = sample_sim(snap.x, near_critical_part(snap.x, snap.u, band), x[inside])
        dx = float(np.median(np.diff(np.sort(x)))) if x.size > 1 else 1.0
        for sec in SECTORS:
            m = windows.mask(sec, np.abs(x), t) & inside
            if not include_extrapolated:
                m &= ~ext
            gap = ua[m] - us[m]
            entry = {"t": float(t), "sector": sec, "n": int(np.count_nonzero(m))}
            entry.update(_gaps(gap, us[m], dx))
            p = SCALE_EXPONENT[sec]
            entry["scaled_linf"] = entry["linf"] * t**p
            entry["scale"] = "t^(2/3)" if sec == "III" else "sqrt(t)"
            entry["near_critical_linf"] = float(np.max(np.abs(nc[m]))) if np.any(m) else float("nan")
            if sec == "III" and np.any(m):
                left = m & (np.abs(x) < t)
                right = m & (np.abs(x) >= t)
                gl = float(np.max(np.abs(ua[left] - us[left]))) if np.any(left) else 0.0
                gr = float(np.max(np.abs(ua[right] - us[right]))) if np.any(right) else 0.0
                entry["linf_left"], entry["linf_right"] = gl, gr
                if gl > gr:
                    flags.append({"t": float(t), "sector": "III", "flag": "slow-convergence",
                                  "detail": "gap on the left half of the window exceeds the right half"})
            metrics.append(entry)
    trend = {}
    for sec in SECTORS:
        pts = [(m["t"], m["linf"]) for m in metrics if m["sector"] == sec and m["n"] > 0 and m["linf"] > 0]
        if len(pts) >= 2:
            tt, gg = np.log([p[0] for p in pts]), np.log([p[1] for p in pts])
            slope = float(np.polyfit(tt, gg, 1)[0])
        else:
            slope = float("nan")
        scaled = [m["scaled_linf"] for m in metrics if m["sector"] == sec]
        trend[sec] = {"gap_decay_exponent": -slope if np.isfinite(slope) else slope,
                      "scaled_gap": scaled,
                      "scaled_gap_decreasing": bool(len(scaled) >= 2 and all(
                          b < a for a, b in zip(scaled, scaled[1:])))}
    settings = {"include_extrapolated": include_extrapolated, "time_tol": time_tol,
                "near_critical_band": list(band), "sim_hash": sim_hash, "asym_hash": asym_hash}
    return CompareReport(used, windows.describe(), metrics, trend, flags, settings)
