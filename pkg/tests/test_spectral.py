import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boussinesq_ist import spectral as sp

W = sp.OMEGA
S3 = np.sqrt(3)


def test_lz_at_one():
    p = sp.eval_lz(1.0)
    assert abs(p.l[2] - 1j / S3) < 1e-15
    assert abs(p.z[2] - 1j / (2 * S3)) < 1e-15


def test_l3_vanishes_at_i():
    assert abs(sp.eval_lz(1j).l[2]) < 1e-15


def test_lz_zero_is_rejected():
    with pytest.raises(sp.SingularPointError):
        sp.eval_lz(0)


@given(st.floats(0.1, 5), st.floats(-np.pi, np.pi))
def test_l_and_z_sum_to_zero(r, th):
    k = r * np.exp(1j * th)
    l, z = sp.l_values(k), sp.z_values(k)
    assert abs(l.sum()) < 1e-13 * (1 + np.abs(l).max())
    assert abs(z.sum()) < 1e-13 * (1 + np.abs(z).max())


@given(st.floats(0.2, 5), st.floats(-np.pi, np.pi))
def test_inversion_swaps_l1_l2(r, th):
    k = r * np.exp(1j * th)
    a, b = sp.l_values(k), sp.l_values(1 / k)
    assert np.allclose([b[0], b[1], b[2]], [a[1], a[0], a[2]], atol=1e-12)


def test_det_at_i():
    _, d = sp.eval_P(1j)
    assert abs(d - 0.25j) < 1e-15


def _cofactor_det(m):
    return (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))


def test_det_matches_cofactor_expansion(rng):
    for k in rng.uniform(0.3, 2, 50) * np.exp(1j * rng.uniform(-np.pi, np.pi, 50)):
        try:
            P, d = sp.eval_P(k)
        except sp.SingularPointError:
            continue
        assert abs(_cofactor_det(P) - d) < 1e-12 * max(1, abs(d))


@pytest.mark.parametrize("j", range(6))
def test_P_singular_at_roots(j):
    assert abs(sp.det_p_closed_form(sp.KAPPA[j])) < 1e-14
    with pytest.raises(sp.SingularPointError) as info:
        sp.eval_P(sp.KAPPA[j])
    assert abs(info.value.nearest - sp.KAPPA[j]) < 1e-12


def test_P_inverse(rng):
    k = rng.uniform(0.5, 1.5, 400) * np.exp(1j * rng.uniform(-np.pi, np.pi, 400))
    dist = np.min(np.abs(k[:, None] - sp.KAPPA[None, :]), axis=1)
    k = k[dist > 0.05]
    prod = sp.p_matrix(k) @ sp.p_inverse(k)
    assert np.max(np.abs(prod - np.eye(3))) < 1e-11


def test_re_phi21_vanishes_on_circle():
    th = np.linspace(0, 2 * np.pi, 2001)
    for zeta in np.linspace(0, 10, 41):
        ph = sp.phase(zeta, np.exp(1j * th), 21)
        assert np.max(np.abs(ph.real) / (1 + np.abs(ph))) < 1e-12


def test_phase_relations(rng):
    zeta = rng.uniform(0, 5, 1000)
    k = rng.uniform(0.3, 3, 1000) * np.exp(1j * rng.uniform(-np.pi, np.pi, 1000))
    p21w2 = sp.phase(zeta, W**2 * k, 21)
    p21w = sp.phase(zeta, W * k, 21)
    assert np.max(np.abs(sp.phase(zeta, k, 31) + p21w2) / np.abs(p21w2)) < 1e-13
    assert np.max(np.abs(sp.phase(zeta, k, 32) - p21w) / np.abs(p21w)) < 1e-13


def test_phase_dk_matches_finite_difference(rng):
    for pair in (21, 31, 32):
        for _ in range(20):
            k = rng.uniform(0.5, 2) * np.exp(1j * rng.uniform(-np.pi, np.pi))
            z = rng.uniform(0, 3)
            h = 1e-6
            fd = (sp.phase(z, k + h, pair) - sp.phase(z, k - h, pair)) / (2 * h)
            assert abs(fd - sp.phase_dk(z, k, pair)) < 1e-7 * (1 + abs(fd))
            fd2 = (sp.phase_dk(z, k + h, pair) - sp.phase_dk(z, k - h, pair)) / (2 * h)
            assert abs(fd2 - sp.phase_dkk(z, k, pair)) < 1e-6 * (1 + abs(fd2))


def test_double_saddle_at_one():
    assert abs(sp.phase_dk(1.0, 1.0, 21)) < 1e-14
    assert abs(sp.phase_dkk(1.0, 1.0, 21)) < 1e-14


def test_saddle_residuals():
    for zeta in 0.01 * np.arange(1, 1001):
        s = sp.saddle_points(zeta)
        for k in s.points:
            assert abs(sp.phase_dk(zeta, k, 21)) < 1e-10


@pytest.mark.parametrize("zeta,expected", [
    (0.0, (np.exp(3j * np.pi / 4), np.exp(-3j * np.pi / 4), np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4))),
    (1 / np.sqrt(3), (None, None, np.exp(1j * np.pi / 6), np.exp(-1j * np.pi / 6))),
    (1.0, (W, W**2, 1, 1)),
])
def test_saddles_at_special_rays(zeta, expected):
    s = sp.saddle_points(zeta)
    for got, want in zip(s.points, expected):
        if want is not None:
            assert abs(got - want) < 1e-12


def test_saddle_structure():
    for zeta in np.linspace(0.01, 10, 300):
        s = sp.saddle_points(zeta)
        assert abs(s.k1 * s.k2 - 1) < 1e-12 and abs(s.k3 * s.k4 - 1) < 1e-12
        assert abs(s.k2 - np.conj(s.k1)) < 1e-12
        if zeta < 1:
            assert abs(s.k4 - np.conj(s.k3)) < 1e-12 and abs(abs(s.k3) - 1) < 1e-12
        if zeta > 1:
            assert np.pi / 2 < np.angle(s.k1) < 2 * np.pi / 3


def test_saddle_continuity_near_one():
    a, b = sp.saddle_points(1 - 1e-9), sp.saddle_points(1.0)
    for p, q in zip(a.points, b.points):
        assert abs(p - q) < 1e-4


def test_regimes():
    assert sp.saddle_points(0.3).regime == sp.SUBSONIC
    assert sp.saddle_points(1 / np.sqrt(3)).regime == sp.MIDRANGE
    assert sp.saddle_points(1.0).regime == sp.TRANSITION
    assert sp.saddle_points(1.5).regime == sp.SUPERSONIC
    with pytest.raises(ValueError):
        sp.saddle_points(-0.1)


def test_rtilde_values():
    assert abs(sp.eval_rtilde(1) + 1) < 1e-15
    assert abs(sp.eval_rtilde(1j) - 1) < 1e-15
    th = np.linspace(np.pi / 3 + 1e-3, 2 * np.pi / 3 - 1e-3, 200)
    assert np.all(sp.rtilde(np.exp(1j * th)).real > 0)
    with pytest.raises(sp.SingularPointError):
        sp.eval_rtilde(W**2)


@settings(max_examples=50)
@given(st.floats(0, 2 * np.pi))
def test_rtilde_real_on_circle(th):
    k = np.exp(1j * th)
    if min(abs(k - W**2), abs(k + W**2)) < 1e-3:
        return
    v = complex(sp.rtilde(k))
    assert abs(v.imag) < 1e-10 * (1 + abs(v))
    val, dval = sp.rtilde_on_circle(th)
    h = 1e-6
    fd = (sp.rtilde_on_circle(th + h)[0] - sp.rtilde_on_circle(th - h)[0]) / (2 * h)
    assert abs(fd - dval) < 1e-5 * (1 + abs(dval))


def test_envelope_identity():
    # d/dzeta Im Phi21(zeta, k1(zeta)) against centred differences
    for zeta in (1.2, 1.5, 2.5, 4.0):
        h = 1e-5
        f = lambda z: np.imag(sp.phase(z, sp.saddle_points(z).k1, 21))
        fd = (f(zeta + h) - f(zeta - h)) / (2 * h)
        assert abs(fd - sp.dzeta_im_phase(zeta, sp.saddle_points(zeta).k1, 21)) < 1e-8
