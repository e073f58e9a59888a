"""Tests for the series and integral routes to the two-cut constant.

Reference values marked "frozen" were computed once with 30-digit
arithmetic (mpmath: the defining integrals via mp.quad, the endpoint via
bisection on E(beta) = 1 + 1/tau) and pasted here as literals, so the
suite never trusts the code under test to generate its own expectations.
"""

import math

import numpy as np
import pytest

from logeq.errors import ConsistencyError, DomainError
from logeq.equilibrium import solve_beta_repulsive
from logeq.series import (
    CoeffTable,
    SeriesResult,
    c_closed_form,
    c_init,
    c_quadrature,
    c_recurrence,
    check_initial_coeff,
    omega_integral,
    omega_series,
)
from logeq.specfun import complete_E

BETA2 = 0.41729943021563737  # frozen: endpoint for tau = 2
OMEGA2 = 2.0728047758011234  # frozen: equilibrium constant at tau = 2

# Frozen moment coefficients c_k at beta = BETA2.
CK_REFS = {
    0: 1.5,  # c_0 = E(beta) = 1 + 1/tau exactly, by the endpoint equation
    1: 0.9397647937284975,
    2: 0.732091961408728,
    5: 0.49185413376663456,
    10: 0.3543492572928768,
    60: 0.14667781469602315,
}


def _tau_for(beta: float) -> float:
    """The tau whose two-cut endpoint is the given beta."""
    return 1.0 / (complete_E(beta) - 1.0)


# ---------------------------------------------------------------------------
# Coefficient routes
# ---------------------------------------------------------------------------

def test_frozen_coefficient_anchors():
    assert abs(solve_beta_repulsive(2.0) - BETA2) <= 1e-13
    for k, ref in CK_REFS.items():
        assert abs(c_closed_form(BETA2, k) - ref) <= 5e-13 * abs(ref)


def test_three_routes_agree():
    # recurrence vs hypergeometric closed form vs direct quadrature,
    # every k up to 60 at the tau = 2 endpoint
    table = c_recurrence(BETA2, 2.0, 60)
    for k in range(61):
        closed = c_closed_form(BETA2, k)
        quad = c_quadrature(BETA2, k)
        rec = table.values[k]
        assert abs(rec - closed) <= 1e-8 * abs(closed)
        assert abs(quad - closed) <= 1e-8 * abs(closed)


def test_quadrature_large_k():
    # both quadrature orders (128 for k <= 200, 256 above)
    for k in (200, 250):
        closed = c_closed_form(BETA2, k)
        assert abs(c_quadrature(BETA2, k) - closed) <= 1e-10 * abs(closed)


def test_initial_coeff_gate_accepts_correct_c1():
    b2 = BETA2 * BETA2
    correct = 0.5 + (1.0 - b2) / (2.0 * BETA2) * math.atanh(BETA2)
    assert check_initial_coeff(BETA2, 1, correct) == correct


def test_initial_coeff_gate_rejects_doubled_log_coefficient():
    # The tempting wrong form carries (1 - beta^2)/(2 beta) in front of the
    # full log((1+b)/(1-b)) = 2 atanh(b), i.e. twice the correct slope; at
    # this beta it is off by ~29 percent and the quadrature gate must say so.
    b2 = BETA2 * BETA2
    wrong = 0.5 + (1.0 - b2) / BETA2 * math.atanh(BETA2)
    correct = 0.5 + (1.0 - b2) / (2.0 * BETA2) * math.atanh(BETA2)
    assert abs(wrong - correct) / correct > 0.25
    with pytest.raises(ConsistencyError):
        check_initial_coeff(BETA2, 1, wrong)


def test_c_init_values_and_validation():
    c0, c1, c2 = c_init(BETA2, 2.0)
    assert c0 == complete_E(BETA2)
    assert abs(c0 - 1.5) <= 1e-9  # endpoint equation E(beta) = 1 + 1/tau
    assert abs(c1 - CK_REFS[1]) <= 1e-12
    assert abs(c2 - CK_REFS[2]) <= 1e-12
    with pytest.raises(DomainError):
        c_init(1.2, 2.0)
    with pytest.raises(DomainError):
        c_init(0.3, 2.0)  # E(0.3) != 1.5: pair describes no equilibrium


def test_c2_stable_at_tiny_beta():
    # The E/K form of c_2 would lose ~12 digits here; the closed-form
    # switch has to keep full accuracy.  Limit value is c_2(0) = pi/4.
    beta = 1e-6
    _, _, c2 = c_init(beta, _tau_for(beta))
    assert abs(c2 - 0.25 * math.pi) <= 1e-10


def test_recurrence_fallback_table_is_correct():
    # At beta = 0.05 the forward recurrence amplifies roundoff by ~400x per
    # step, so the k = 10 checkpoint must trip and the table must be filled
    # from the closed form; either way every entry has to come out right.
    beta = 0.05
    table = c_recurrence(beta, _tau_for(beta), 40)
    for k in range(41):
        closed = c_closed_form(beta, k)
        assert abs(table.values[k] - closed) <= 1e-8 * abs(closed)


def test_coeff_table_validation():
    good = c_recurrence(BETA2, 2.0, 12)
    assert good.K == 12 and len(good.values) == 13
    v = good.values.copy()
    with pytest.raises(ConsistencyError):
        CoeffTable(beta=BETA2, values=v[:-1], K=12)
    bad0 = v.copy()
    bad0[0] += 1e-6
    with pytest.raises(ConsistencyError):
        CoeffTable(beta=BETA2, values=bad0, K=12)
    neg = v.copy()
    neg[5] = -neg[5]
    with pytest.raises(ConsistencyError):
        CoeffTable(beta=BETA2, values=neg, K=12)
    swapped = v.copy()
    swapped[7] = swapped[5] + 1.0  # breaks c_{k+2} < c_k
    with pytest.raises(ConsistencyError):
        CoeffTable(beta=BETA2, values=swapped, K=12)


def test_quadrature_domain_errors():
    with pytest.raises(DomainError):
        c_quadrature(1.0, 3)
    with pytest.raises(DomainError):
        c_quadrature(-0.1, 3)
    with pytest.raises(DomainError):
        c_quadrature(0.5, -1)
    with pytest.raises(DomainError):
        c_recurrence(BETA2, 2.0, 2)
    with pytest.raises(DomainError):
        c_recurrence(1e-6, _tau_for(1e-6), 40)


# ---------------------------------------------------------------------------
# The constant itself
# ---------------------------------------------------------------------------

def test_omega_series_frozen_value():
    res = omega_series(2.0, 1e-12)
    assert isinstance(res, SeriesResult)
    assert abs(res.value - OMEGA2) <= 1e-9
    assert res.terms_used >= 1
    assert res.last_term < 1e-12


@pytest.mark.parametrize("tau", [2.0, 3.0, 5.0, 10.0])
def test_series_and_integral_routes_agree(tau):
    assert abs(omega_series(tau, 1e-12).value - omega_integral(tau)) <= 1e-8


def test_truncation_tolerance_controls_tail():
    coarse = omega_series(2.0, 1e-6).value
    fine = omega_series(2.0, 1e-12).value
    # positive terms, ratio <= beta^2: tail below last_term b^2/(1-b^2)
    assert abs(coarse - fine) <= 1e-6
    assert coarse != fine  # the tolerance is actually doing something


def test_omega_domain_errors():
    with pytest.raises(DomainError):
        omega_series(1.0, 1e-10)
    with pytest.raises(DomainError):
        omega_series(2.0, 1e-15)
    with pytest.raises(DomainError):
        omega_integral(0.5)
