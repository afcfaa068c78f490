import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boussinesq_ist import spectral as sp
from boussinesq_ist.asymptotics import (AsymptoteConfig, NearArcError, as_circle, branch_log, classify_point,
                                        delta_cauchy, delta_closed_form, eval_delta_chi, eval_nu,
                                        eval_sector_I_II, eval_sector_III, eval_sector_IV, eval_sector_V,
                                        front_arc, log_d_coefficients_IV, sector_arcs, u_asymptotic)
from boussinesq_ist.painleve import eval_uP
from boussinesq_ist.scattering import InitialData, reflection_coefficients

OMEGA = sp.OMEGA


# ---------------------------------------------------------------- branches

@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(-np.pi, np.pi), st.floats(0.6, 2.2), st.sampled_from(["ln", "tilde"]))
def test_branch_log_is_a_logarithm(r, phi, theta_s, kind):
    k = r * np.exp(1j * phi)
    s = np.exp(1j * theta_s)
    if abs(k - s) < 1e-6:
        return
    L = complex(branch_log(k, s, kind))
    assert abs(np.exp(L) - (k - s)) < 1e-12 * max(1.0, abs(k - s))


@pytest.mark.parametrize("theta_s", [np.pi / 2, 1.8, 2.0, 2 * np.pi / 3])
def test_branch_normalisation(theta_s):
    s = np.exp(1j * theta_s)
    assert complex(branch_log(s + 1, s, "ln")).imag == pytest.approx(2 * np.pi, abs=1e-12)
    assert complex(branch_log(s + 1, s, "tilde")).imag == pytest.approx(0.0, abs=1e-12)


def _jump(kind, s, p, n, eps=1e-7):
    return complex(branch_log(p + eps * n, s, kind) - branch_log(p - eps * n, s, kind)).imag


# (point, unit normal to the cut there)
LN_CUT = [(np.exp(1.8j), np.exp(1.8j)), (2j, 1.0), (5j, 1.0)]
TILDE_CUT = [(np.exp(2.5j), np.exp(2.5j)), (-3.0, 1j), (-1.5, 1j)]
OFF = [np.exp(1.8j), np.exp(2.5j), 2j, -3.0, 0.5 + 0.1j, -0.3 - 0.2j]


@pytest.mark.parametrize("kind,cut", [("ln", LN_CUT), ("tilde", TILDE_CUT)])
def test_branch_cut_location(kind, cut):
    s = np.exp(2.0j)
    for p, n in cut:
        assert abs(abs(_jump(kind, s, p, n)) - 2 * np.pi) < 1e-5, p
    cut_points = [p for p, _ in cut]
    for p in OFF:
        if any(abs(p - c) < 1e-12 for c in cut_points):
            continue
        for n in (1, 1j):
            assert abs(_jump(kind, s, p, n)) < 1e-5, (p, n)


# ---------------------------------------------------------------- delta and chi

OFF_ARC = [0.5 + 0.2j, 1.7 * np.exp(2.1j), 0.3 * np.exp(-1j), 2.5j, -1.4 + 0.3j, 0.8 * np.exp(1.9j)]


def test_front_delta_two_routes_agree(compact_table):
    cd = as_circle(compact_table)
    arc = front_arc(cd)
    k = np.array(OFF_ARC)
    a = delta_cauchy(arc, k)
    # the by-parts route integrates the spline derivative, which is only
    # piecewise smooth, and resolves the knots to about 1e-6 at default order
    for kind in ("ln", "tilde"):
        b = delta_closed_form(arc, k, kind)
        assert np.max(np.abs(np.exp(a) - np.exp(b))) < 5e-6
    b = delta_closed_form(arc, k, "ln", order=64)
    assert np.max(np.abs(np.exp(a) - np.exp(b))) < 1e-7


@pytest.mark.parametrize("zeta,sector", [(0.8, "IV"), (0.3, "V")])
def test_sector_deltas_two_routes_agree(gaussian_table, zeta, sector):
    cd = as_circle(gaussian_table)
    k = np.array([0.5 + 0.2j, 1.7 * np.exp(2.1j), 0.3 * np.exp(-1j), -1.4 + 0.3j])
    for name, arc in sector_arcs(cd, zeta, sector).items():
        a = delta_cauchy(arc, k)
        b = delta_closed_form(arc, k, "ln")
        assert np.max(np.abs(np.exp(a) - np.exp(b))) < 1e-7, name


def test_delta_tends_to_one(compact_table):
    arc = front_arc(as_circle(compact_table))
    assert abs(delta_cauchy(arc, np.array([1e7j]))[0]) < 1e-6


def test_delta_jump_across_arc(compact_table):
    cd = as_circle(compact_table)
    arc = front_arc(cd)
    th = 1.9
    eps = 1e-3
    # the arc runs clockwise, so its left (+) side is outside the circle
    out = delta_closed_form(arc, np.array([(1 + eps) * np.exp(1j * th)]))[0]
    inn = delta_closed_form(arc, np.array([(1 - eps) * np.exp(1j * th)]))[0]
    assert abs((out - inn) - cd.ln_g(np.array([th]))[0]) < 1e-3


def test_near_arc_refused(compact_table):
    with pytest.raises(NearArcError):
        eval_delta_chi(compact_table, "delta", np.exp(1.9j))
    dc = eval_delta_chi(compact_table, "delta", 0.5 + 0.2j)
    assert abs(dc.value - np.exp(dc.log_value)) < 1e-15


# ---------------------------------------------------------------- nu and amplitudes

def test_nu_signs(gaussian_table):
    cd = as_circle(gaussian_table)
    for zeta in (1.2, 2.0, 3.0):
        k1 = sp.saddle_points(zeta).k1
        g = float(cd.g(np.array([np.angle(k1)]))[0])
        assert -math.log(g) / (2 * np.pi) <= 0
    for zeta in (0.65, 0.8, 0.95):
        sad = sp.saddle_points(zeta)
        assert eval_nu(cd, sad.k4).nu_hat1 >= 0
        assert eval_nu(cd, sad.k2).nu_hat2 >= 0


def test_zero_data_has_zero_amplitudes():
    x = np.linspace(-1, 1, 101)
    table = reflection_coefficients(InitialData(x, 0 * x, 0 * x), n_theta=120, tau=[0.1, 0.2, 0.3])
    for zeta in (1.5, 2.5):
        term = eval_sector_I_II(table, zeta, 100.0)
        assert term.amplitudes == [0.0] and term.value(100.0) == 0.0


def test_sector_I_details(gaussian_table):
    term = eval_sector_I_II(gaussian_table, 2.5, 200.0)
    k1, zs = term.details["k1"], term.details["z_star"]
    w = -1j * k1 * zs
    assert w.real > 0 and abs(w.imag) < 1e-12 * abs(w)
    assert abs(term.details["amplitude_imag"]) < 1e-14
    assert term.sector == "I" and eval_sector_I_II(gaussian_table, 1.5, 200.0).sector == "II"


def test_beta_shift_in_time(gaussian_table):
    a = eval_sector_I_II(gaussian_table, 1.6, 200.0)
    b = eval_sector_I_II(gaussian_table, 1.6, 800.0)
    assert b.details["beta"] - a.details["beta"] == pytest.approx(-a.details["nu"] * math.log(4.0), abs=1e-12)


def test_sector_I_time_doubling(gaussian_table):
    zeta, t = 2.2, 300.0
    a = eval_sector_I_II(gaussian_table, zeta, t)
    b = eval_sector_I_II(gaussian_table, zeta, 2 * t)
    k1 = a.details["k1"]
    expected = t * float(np.imag(sp.phase(zeta, k1, 21))) - a.details["nu"] * math.log(2)
    assert b.amplitudes[0] == pytest.approx(a.amplitudes[0], rel=1e-12)
    assert b.phases[0] - a.phases[0] == pytest.approx(expected, abs=1e-9)


def test_sector_IV_time_doubling(gaussian_table):
    zeta, t = 0.8, 300.0
    a = eval_sector_IV(gaussian_table, zeta, t)
    b = eval_sector_IV(gaussian_table, zeta, 2 * t)
    sad = sp.saddle_points(zeta)
    p1, p2 = OMEGA * sad.k4, OMEGA**2 * sad.k2
    d = a.details
    e1 = (d["nu1"] - d["nu3"]) * math.log(2) - t * float(np.imag(sp.phase(zeta, p1, 31)))
    e2 = (d["nu4"] - d["nu5"] - d["nu2"]) * math.log(2) - t * float(np.imag(sp.phase(zeta, p2, 32)))
    assert np.allclose(a.amplitudes, b.amplitudes, rtol=1e-12, atol=0)
    assert b.phases[0] - a.phases[0] == pytest.approx(e1, abs=1e-9)
    assert b.phases[1] - a.phases[1] == pytest.approx(e2, abs=1e-9)


def test_d_coefficient_moduli(gaussian_table):
    for zeta in (0.65, 0.8, 0.9):
        ld1, ld2, nus = log_d_coefficients_IV(gaussian_table, zeta, 400.0)
        assert abs(ld1.real + np.pi * nus["nu1"]) < 1e-7
        assert abs(ld2.real - np.pi * (2 * nus["nu2"] - nus["nu4"])) < 1e-7


@pytest.mark.parametrize("zeta,fn", [(0.7, eval_sector_IV), (0.9, eval_sector_IV), (0.2, eval_sector_V),
                                     (0.5, eval_sector_V), (0.0, eval_sector_V)])
def test_amplitudes_are_real(gaussian_table, zeta, fn):
    term = fn(gaussian_table, zeta, 500.0)
    assert max(abs(v) for v in term.details["amplitude_imag"]) < 1e-12 * max(1e-300, max(map(abs, term.amplitudes)))
    assert all(np.isfinite(term.amplitudes)) and all(np.isfinite(term.phases))


def test_sector_ranges_enforced(gaussian_table):
    with pytest.raises(ValueError):
        eval_sector_IV(gaussian_table, 0.5, 10.0)
    with pytest.raises(ValueError):
        eval_sector_V(gaussian_table, 0.6, 10.0)
    with pytest.raises(ValueError):
        eval_sector_I_II(gaussian_table, 0.9, 10.0)


# ---------------------------------------------------------------- wave front and dispatch

def test_sector_III_at_front(hm):
    t = 343.0
    term = eval_sector_III(t, t, hm)
    assert term.details["y"] == 0.0
    assert term.value(t) == pytest.approx(float(eval_uP(hm, np.array([0.0]))[0]) / t ** (2 / 3), rel=1e-14)


def test_classify_point():
    t = 1000.0
    assert classify_point(1000.0, t) == ("III", False)
    assert classify_point(1015.0, t) == ("III", False)
    assert classify_point(1030.0, t) == ("II", True)
    assert classify_point(1500.0, t) == ("II", False)
    assert classify_point(2000.0, t) == ("I", False)
    assert classify_point(800.0, t) == ("IV", False)
    assert classify_point(300.0, t) == ("V", False)
    assert classify_point(0.0, t) == ("V", True)
    assert classify_point(2000.0, t, AsymptoteConfig(sector_I_from=2.5)) == ("II", False)


def test_u_asymptotic_even_in_x(gaussian_table, hm):
    for x in (150.0, 250.0, 400.0):
        a = u_asymptotic(gaussian_table, hm, x, 300.0)
        b = u_asymptotic(gaussian_table, hm, -x, 300.0)
        assert a.u == b.u and a.sector == b.sector
    with pytest.raises(ValueError):
        u_asymptotic(gaussian_table, hm, 1.0, 0.5)
