import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import wofz

from boussinesq_ist.errorfunction import (LINE_ANGLE, erf_by_quadrature, erf_complex, faddeeva, jump_matrix,
                                          jump_residual, leading_coefficient, m_coefficient, mW_entry,
                                          mW_matrix, richardson_coefficients)


@settings(max_examples=200, deadline=None)
@given(st.floats(-30, 30), st.floats(-30, 30))
def test_faddeeva_against_scipy(a, b):
    z = complex(a, b)
    ref = wofz(z)
    if not np.isfinite(ref) or abs(ref) > 1e250:
        return
    # below the real axis e^{-z^2} carries a relative condition number ~ 2|z|^2
    rel = 1e-13 + (4e-16 * abs(z) ** 2 if b < 0 else 0.0)
    assert abs(faddeeva(z) - ref) <= rel * max(1.0, abs(ref))


def test_erf_routes_agree():
    z = np.array([0.3 + 0.2j, 1.5 - 0.7j, -2 + 1j, 0.1j, 3 + 0.4j])
    assert np.max(np.abs(erf_complex(z) - erf_by_quadrature(z))) < 1e-12


def _cauchy_oracle(y_tilde, s, w, n=4000, R=12.0):
    """(12) entry from the Cauchy integral of its jump s e^{3i(1+y~)z^2} along e^{i pi/6} R."""
    e = np.exp(1j * LINE_ANGLE)
    x, wt = np.polynomial.legendre.leggauss(n)
    z = e * R * x
    jump = s * np.exp(3j * (1 + y_tilde) * z * z)
    return np.sum(wt * R * e * jump / (z - w)) / (2j * np.pi)


@pytest.mark.parametrize("w", [1.0 + 2.0j, -0.5 - 1.0j, 2.0 - 0.3j, -1.2 + 0.1j])
def test_entry_matches_cauchy_integral(w):
    y, s = 0.4, 0.3 - 0.2j
    assert abs(mW_entry(y, s, w) - _cauchy_oracle(y, s, w)) < 1e-10


def test_entry_is_analytic_off_the_line():
    y, s = 0.2, 0.7 + 0.1j
    h = 1e-5
    for w in (1 + 2j, -1 - 1j, 2 - 0.5j):
        dx = (mW_entry(y, s, w + h) - mW_entry(y, s, w - h)) / (2 * h)
        dy = (mW_entry(y, s, w + 1j * h) - mW_entry(y, s, w - 1j * h)) / (2 * h)
        assert abs(dy - 1j * dx) < 1e-8


def test_jump_at_fifty_points():
    w = np.exp(1j * LINE_ANGLE) * np.linspace(-6, 6, 50)
    for y, s in ((0.0, 1.0), (0.5, 0.3 - 0.4j), (-0.6, 2.0j)):
        assert jump_residual(y, s, w) < 1e-11


def test_jump_matrix_structure():
    v = jump_matrix(0.3, 0.5, np.array([0.0]))[0]
    assert np.allclose(v, [[1, 0.5, 0], [0, 1, 0], [0, -0.5, 1]])
    m = mW_matrix(0.3, 0.5, np.array([1j]))[0]
    assert m[0, 1] == -m[2, 1] and np.allclose(np.diag(m), 1)


@pytest.mark.parametrize("direction", [0.0, np.pi / 2, 2.5, -1.0])
def test_leading_coefficient_by_extrapolation(direction):
    y, s = 0.4, 0.3 - 0.2j
    m1, m3 = richardson_coefficients(y, s, direction=direction)
    assert abs(m1 - leading_coefficient(y, s)) < 1e-6
    assert abs(m3 - m_coefficient(y, s, 1)) < 1e-6


def test_leading_term_is_first_expansion_coefficient():
    for y in (-0.5, 0.0, 2.0):
        assert abs(m_coefficient(y, 1.3, 0) - leading_coefficient(y, 1.3)) < 1e-15


def test_entry_decays_at_infinity():
    w = 1e4 * np.exp(0.3j)
    assert abs(mW_entry(0.1, 1.0, w)) < 1e-4


def test_y_tilde_domain():
    with pytest.raises(ValueError):
        mW_entry(-1.0, 1.0, 1j)
