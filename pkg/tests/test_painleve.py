import numpy as np
import pytest
from scipy.special import airy

from boussinesq_ist.painleve import (UP_SCALE, chebyshev_hastings_mcleod, eval_uP, left_tail,
                                     solve_hastings_mcleod)

# frozen from the Chebyshev collocation oracle (n = 240, y_max = 12)
U0 = 0.3670615515480784
UP0 = -0.2953721054475501


def test_values_at_origin(hm):
    u, up = hm.eval(np.array([0.0]))
    assert abs(u[0] - U0) < 1e-9
    assert abs(up[0] - UP0) < 1e-8


def test_chebyshev_oracle_agrees(hm):
    cheb, _, _ = chebyshev_hastings_mcleod()
    y = np.linspace(-8, 8, 33)
    assert abs(cheb(0.0)[0] - hm.eval(np.array([0.0]))[0][0]) < 1e-8
    assert np.max(np.abs(cheb(y) - hm.eval(y)[0])) < 1e-8


def test_ode_residual(hm):
    assert hm.residual() < 1e-8


def test_airy_matching():
    h = solve_hastings_mcleod(y_max=10.0, n=2001)
    u, _ = h.eval(np.array([8.0]))
    ai = airy(8.0)[0]
    assert abs(u[0] - ai) / ai < 1e-6


def test_uP_at_eight(hm):
    ai, aip, _, _ = airy(8.0)
    assert abs(eval_uP(hm, np.array([8.0]))[0] - UP_SCALE * (aip - ai * ai)) < 1e-6


def test_left_tail_residual():
    # the three-term tail solves the equation up to O(|y|^-8.5)
    y = np.array([-20.0, -40.0])
    h = 1e-3
    u = lambda s: left_tail(s)[0]
    upp = (u(y + h) - 2 * u(y) + u(y - h)) / h**2
    r = np.abs(upp - y * u(y) - 2 * u(y) ** 3)
    assert np.all(r < 1e-7)


def test_refinement_is_small(hm):
    assert hm.refinement_change < 1e-8
    coarse = solve_hastings_mcleod(12.0, 1201)
    y = np.linspace(-6, 6, 25)
    assert np.max(np.abs(coarse.eval(y)[0] - hm.eval(y)[0])) < 1e-8


def test_monotone_and_positive(hm):
    y = np.linspace(-10, 10, 401)
    u = hm.eval(y)[0]
    assert np.all(u > 0) and np.all(np.diff(u) < 0)


def test_tails_used_outside_grid(hm):
    assert hm.eval(np.array([-30.0]))[0][0] == pytest.approx(left_tail(-30.0)[0], abs=0)


def test_bad_arguments():
    with pytest.raises(ValueError):
        solve_hastings_mcleod(y_max=3)
    with pytest.raises(ValueError):
        solve_hastings_mcleod(n=50)
