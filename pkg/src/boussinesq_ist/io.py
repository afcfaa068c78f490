"""CSV/JSON readers and writers, data hashing and key=value config files.

Every float is written with 17 significant digits and lines end in '\\n',
so identical inputs give byte-identical outputs.
"""
from __future__ import annotations

import configparser
import json
import math
import os
from pathlib import Path

import numpy as np

from .scattering import InitialData, ReflectionTable, circle_plan

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def fnv1a_64(data: bytes) -> str:
    h = FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return f"{h:016x}"


def file_hash(path) -> str:
    return fnv1a_64(Path(path).read_bytes())


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.17g}"


def _write_rows(path, header, rows, meta=None):
    lines = [f"# {k}={v}" for k, v in (meta or {}).items()]
    lines.append(",".join(header))
    for r in rows:
        lines.append(",".join(x if isinstance(x, str) else fmt(x) for x in r))
    Path(path).write_bytes(("\n".join(lines) + "\n").encode())


def read_csv(path):
    """(meta dict from '# key=value' lines, header list, columns as dict of string lists)."""
    meta, header, rows = {}, None, []
    with open(path, "r", newline="") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    meta[k.strip()] = v.strip()
                continue
            if header is None:
                header = [h.strip() for h in line.split(",")]
            else:
                rows.append(line.split(","))
    if header is None:
        raise ValueError(f"{path}: no header line")
    cols = {h: [r[i] for r in rows] for i, h in enumerate(header)}
    return meta, header, cols


def _require(header, needed, path):
    missing = [h for h in needed if h not in header]
    if missing:
        raise ValueError(f"{path}: missing column(s) {', '.join(missing)}")


def _floats(col):
    return np.array([float(v) for v in col])


# ---------------------------------------------------------------- initial data

def read_initial_csv(path) -> InitialData:
    meta, header, cols = read_csv(path)
    _require(header, ("x", "u0", "v0"), path)
    return InitialData(_floats(cols["x"]), _floats(cols["u0"]), _floats(cols["v0"]))


def write_initial_csv(path, data: InitialData):
    _write_rows(path, ("x", "u0", "v0"), zip(data.x, data.u0, data.v0))


# ---------------------------------------------------------------- reflection tables

def sidecar(path, kind):
    p = Path(path)
    return p.with_name(f"{p.stem}_{kind}{p.suffix or '.csv'}")


def write_reflection_csv(path, table: ReflectionTable, extra_meta=None):
    meta = dict(table.meta)
    meta.update(extra_meta or {})
    rows = zip(table.theta, table.r1.real, table.r1.imag, table.r2.real, table.r2.imag, table.converged)
    _write_rows(path, ("theta", "re_r1", "im_r1", "re_r2", "im_r2", "converged"), rows, meta)
    _write_rows(sidecar(path, "ray"), ("tau", "re_r1", "im_r1"),
                zip(table.tau, table.r1_ray.real, table.r1_ray.imag), meta)
    if table.s11 is not None:
        _write_rows(sidecar(path, "s11"), ("theta", "re_s11", "im_s11"),
                    zip(table.theta, table.s11.real, table.s11.imag), meta)


def read_ray_csv(path):
    meta, header, cols = read_csv(path)
    _require(header, ("tau", "re_r1", "im_r1"), path)
    return _floats(cols["tau"]), _floats(cols["re_r1"]) + 1j * _floats(cols["im_r1"]), meta


def read_reflection_csv(path) -> ReflectionTable:
    meta, header, cols = read_csv(path)
    _require(header, ("theta", "re_r1", "im_r1", "re_r2", "im_r2", "converged"), path)
    theta = _floats(cols["theta"])
    r1 = _floats(cols["re_r1"]) + 1j * _floats(cols["im_r1"])
    r2 = _floats(cols["re_r2"]) + 1j * _floats(cols["im_r2"])
    conv = np.array([v.strip() not in ("0", "False", "false") for v in cols["converged"]])
    tau = np.zeros(0)
    ray = np.zeros(0, dtype=complex)
    rp = sidecar(path, "ray")
    if rp.exists():
        tau, ray, _ = read_ray_csv(rp)
    s11 = None
    sp_ = sidecar(path, "s11")
    if sp_.exists():
        _, _, c = read_csv(sp_)
        s11 = _floats(c["re_s11"]) + 1j * _floats(c["im_s11"])
    excl = float(meta.get("exclusion", 0.05))
    arcs = circle_plan(theta.size, excl)[2] if theta.size % 6 == 0 else []
    return ReflectionTable(theta, r1, r2, conv, tau, ray, s11, arcs, meta)


# ---------------------------------------------------------------- other tables

def write_asymptote_csv(path, rows, meta=None):
    """rows: iterables of (x, t, u_asym, sector, extrapolated)."""
    _write_rows(path, ("x", "t", "u_asym", "sector", "extrapolated"),
                ((x, t, u, s, "1" if e else "0") for x, t, u, s, e in rows), meta)


def read_asymptote_csv(path):
    meta, header, cols = read_csv(path)
    _require(header, ("x", "t", "u_asym", "sector", "extrapolated"), path)
    return {
        "x": _floats(cols["x"]),
        "t": _floats(cols["t"]),
        "u": _floats(cols["u_asym"]),
        "sector": np.array(cols["sector"]),
        "extrapolated": np.array([v.strip() == "1" for v in cols["extrapolated"]]),
        "meta": meta,
    }


def write_snapshot_csv(path, snap, meta=None):
    m = {"t": fmt(snap.t)}
    m.update(meta or {})
    _write_rows(path, ("x", "u", "v"), zip(snap.x, snap.u, snap.v), m)


def read_snapshot_csv(path):
    from .simulator import FieldSnapshot

    meta, header, cols = read_csv(path)
    _require(header, ("x", "u", "v"), path)
    if "t" not in meta:
        raise ValueError(f"{path}: missing '# t=' header")
    return FieldSnapshot(float(meta["t"]), _floats(cols["x"]), _floats(cols["u"]), _floats(cols["v"])), meta


def write_hm_csv(path, hm, uP):
    _write_rows(path, ("y", "u", "u_prime", "u_P"), zip(hm.y_grid, hm.u, hm.u_prime, uP),
                {"y_max": fmt(hm.y_max), "n": len(hm.y_grid), "refinement_change": fmt(hm.refinement_change)})


def read_hm_csv(path):
    from .painleve import HastingsMcLeod

    meta, header, cols = read_csv(path)
    _require(header, ("y", "u", "u_prime"), path)
    return HastingsMcLeod(_floats(cols["y"]), _floats(cols["u"]), _floats(cols["u_prime"]), True,
                          float(meta.get("refinement_change", 0.0)))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def write_json(path, obj):
    Path(path).write_bytes((json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n").encode())


# ---------------------------------------------------------------- config

def read_config(path) -> dict:
    """Flat key=value file ('#' or ';' comments); keys are normalised to snake_case."""
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    cp.read_string("[config]\n" + Path(path).read_text())
    return {k.strip().replace("-", "_"): v.strip() for k, v in cp["config"].items()}
