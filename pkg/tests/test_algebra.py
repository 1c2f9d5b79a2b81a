"""Tests of the algebraic layer: branches, turning points, u-chart, residues."""

import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from p3wkb.algebra import (
    BranchPoint,
    D6Chart,
    D7Chart,
    DegenerateParametersError,
    NearDegenerateWarning,
    Parameters,
    classify_branch_asymptotic,
    delta,
    lambda0_branches,
    mu0,
    residues,
    turning_points,
    u_chart,
)
from p3wkb.numerics import Jet

P_GEN = Parameters(2 + 1j, 3)
P_ALT = Parameters(2, 2 - 1j)


def _complexes(lo=-3.0, hi=3.0):
    floats = st.floats(lo, hi, allow_nan=False, allow_infinity=False)
    return st.builds(complex, floats, floats)


def _generic_params(c_inf, c_0):
    s = max(abs(c_inf), abs(c_0))
    return (s > 0.1
            and abs(c_inf) > 1e-2 * s
            and abs(c_0) > 1e-2 * s
            and abs(c_inf ** 2 - c_0 ** 2) > 1e-2 * s * s
            and abs(c_inf ** 2 + c_0 ** 2) > 1e-2 * s * s)


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------

def test_parameter_combinations():
    p = Parameters(2 + 1j, 3)
    assert p.c_p == pytest.approx((5 + 1j) / 2)
    assert p.c_m == pytest.approx((-1 + 1j) / 2)


@pytest.mark.parametrize("c_inf,c_0", [
    (0, 3), (2, 0), (2, 2), (2, -2), (1j, 1), (1j, -1),
])
def test_degenerate_parameters_rejected(c_inf, c_0):
    with pytest.raises(DegenerateParametersError):
        Parameters(c_inf, c_0)


def test_near_degenerate_parameters_warn():
    with pytest.warns(NearDegenerateWarning):
        Parameters(2, 2 + 1e-8)


# ---------------------------------------------------------------------------
# Branches of lambda0
# ---------------------------------------------------------------------------

@given(_complexes(), _complexes(), _complexes(0.2, 2.0))
@settings(deadline=None, max_examples=60)
def test_branches_satisfy_vieta(c_inf, c_0, t):
    if not _generic_params(c_inf, c_0) or abs(t) < 0.3:
        return
    p = Parameters(c_inf, c_0)
    roots = [b.lambda0 for b in lambda0_branches(t, p)]
    scale = max(1.0, max(abs(r) for r in roots)) ** 4
    assert abs(sum(roots) - c_inf) < 1e-9 * scale
    e2 = sum(roots[i] * roots[j] for i in range(4) for j in range(i + 1, 4))
    assert abs(e2) < 1e-9 * scale
    e3 = sum(roots[i] * roots[j] * roots[k]
             for i in range(4) for j in range(i + 1, 4) for k in range(j + 1, 4))
    assert abs(e3 + c_0 * t) < 1e-9 * scale
    prod = roots[0] * roots[1] * roots[2] * roots[3]
    assert abs(prod + t * t) < 1e-9 * scale


def test_branches_reject_t_zero():
    from p3wkb.algebra import AlgebraError
    with pytest.raises(AlgebraError):
        lambda0_branches(0, P_GEN)


def test_large_t_branch_clustering():
    t = 1e6 + 0.3j
    tags = sorted(classify_branch_asymptotic(b, P_GEN)
                  for b in lambda0_branches(t, P_GEN))
    assert tags == ["inf1", "inf2", "inf3", "inf4"]


def test_small_t_branch_realization():
    t = 1e-6 * (1 + 0.2j)
    tags = sorted(classify_branch_asymptotic(b, P_GEN)
                  for b in lambda0_branches(t, P_GEN))
    assert tags == ["simple_pole", "simple_pole", "zero_c0", "zero_cinf"]


# ---------------------------------------------------------------------------
# Turning points
# ---------------------------------------------------------------------------

def test_turning_points_annihilate_delta():
    tps = turning_points(P_GEN)
    assert len(tps.taus) == 3
    assert tps.tau_sp == 0
    for tau, lam in tps.taus:
        b = BranchPoint(tau, lam)
        # Double root of the quartic: both the quartic and Delta vanish.
        assert b.residual(P_GEN) < 1e-6 * max(1.0, abs(tau) ** 2)
        assert abs(delta(b, P_GEN)) < 1e-6


def test_turning_points_cubic_roots():
    ci, c0 = P_ALT.c_inf, P_ALT.c_0
    for tau in turning_points(P_ALT).t_values():
        val = (-256 * tau ** 3 + 192 * ci * c0 * tau ** 2
               + (6 * ci ** 2 * c0 ** 2 - 27 * ci ** 4 - 27 * c0 ** 4) * tau
               + 4 * ci ** 3 * c0 ** 3)
        assert abs(val) < 1e-8 * max(1.0, abs(tau)) ** 3


# ---------------------------------------------------------------------------
# u-chart
# ---------------------------------------------------------------------------

def test_u_chart_roundtrip_all_branches():
    chart = u_chart(P_GEN)
    t = 0.7 - 0.4j
    for b in lambda0_branches(t, P_GEN):
        u = chart.u_of_branch(b)
        assert abs(chart.t_of_u(u) - t) < 1e-9 * max(1.0, abs(t))
        assert abs(chart.lambda0_of_u(u) - b.lambda0) < 1e-9 * max(1.0, abs(b.lambda0))
        assert abs(chart.mu0_of_u(u) - mu0(b, P_GEN)) < 1e-10


@given(_complexes(), _complexes(), _complexes(0.3, 1.5))
@settings(deadline=None, max_examples=60)
def test_q_matches_delta(c_inf, c_0, u):
    if not _generic_params(c_inf, c_0):
        return
    p = Parameters(c_inf, c_0)
    chart = u_chart(p)
    if min(abs(u - s) for s in chart.singular_points()) < 0.2 or abs(u) < 0.2:
        return
    t = chart.t_of_u(u)
    if abs(t) < 1e-3:
        return
    b = chart.branch_point_at_u(u)
    dtdu = chart.dt_du(u)
    lhs = chart.q(u) / dtdu ** 2
    rhs = delta(b, p)
    assert abs(lhs - rhs) < 1e-8 * max(1.0, abs(rhs))


def test_q_zero_and_pole_orders():
    chart = u_chart(P_GEN)
    p = P_GEN
    # Order-3 zeros at the three turning points.
    for utp in chart.turning_points_u:
        jet = chart.q(Jet.variable(utp, 4))
        scale = abs(jet.coeffs[3])
        assert scale > 1e-10
        assert abs(jet.coeffs[0]) < 1e-9 * scale
        assert abs(jet.coeffs[1]) < 1e-9 * scale
        assert abs(jet.coeffs[2]) < 1e-9 * scale
    # Simple pole at u = -1 with leading coefficient -4 c_inf c_0.
    eps = 1e-7
    lead = (chart.q(-1 + eps) * eps)
    assert abs(lead - (-4 * p.c_inf * p.c_0)) < 1e-4
    # Double poles at +/- c_m/c_p with (u - u0)^2 q -> c_inf^2, c_0^2.
    for label, expect in [("zero_cinf", p.c_inf ** 2), ("zero_c0", p.c_0 ** 2)]:
        u0 = chart.double_poles_u[label]
        val = chart.q(u0 + eps) * eps ** 2
        assert abs(val - expect) < 1e-4
    # Order-4 pole at u = 0: u^4 q -> 4 c_m^2; constant 4 c_p^2 at infinity.
    assert abs(chart.q(eps) * eps ** 4 - 4 * p.c_m ** 2) < 1e-4
    assert abs(chart.q(1e6) - 4 * p.c_p ** 2) < 1e-3


def test_q_invariant_under_parameter_swap():
    chart1 = u_chart(P_GEN)
    chart2 = u_chart(P_GEN.swapped())
    for u in (0.4 + 0.2j, -0.6 + 1.1j, 2.3 - 0.7j):
        assert abs(chart1.q(u) - chart2.q(u)) < 1e-12 * abs(chart1.q(u))


def test_residue_closed_forms_confirmed_by_contours():
    res = residues(P_GEN)
    assert res["inf"] == pytest.approx(P_GEN.c_p)
    assert res["zero"] == pytest.approx(P_GEN.c_m)
    assert res["double_cinf"] == pytest.approx(P_GEN.c_inf)
    assert res["double_c0"] == pytest.approx(P_GEN.c_0)
    residues(P_ALT)  # second chamber, same oracle


# ---------------------------------------------------------------------------
# Homogeneity under (t, c_inf, c_0) -> (r^-2 t, r^-1 c_inf, r^-1 c_0)
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("r", [2.0, 1 / 3])
def test_homogeneity_of_branch_data(r):
    p = P_GEN
    ps = Parameters(p.c_inf / r, p.c_0 / r)
    t = 0.9 + 0.5j
    lams = sorted((b.lambda0 for b in lambda0_branches(t, p)),
                  key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    lams_s = sorted((b.lambda0 for b in lambda0_branches(t / r ** 2, ps)),
                    key=lambda z: (round((z * r).real, 6), round((z * r).imag, 6)))
    for lam, lam_s in zip(lams, lams_s):
        assert abs(lam_s - lam / r) < 1e-10 * max(1.0, abs(lam))
        b = BranchPoint(t, lam)
        bs = BranchPoint(t / r ** 2, lam_s)
        assert abs(delta(bs, ps) - r ** 2 * delta(b, p)) < 1e-8 * abs(delta(b, p))
        assert abs(mu0(bs, ps) - mu0(b, p)) < 1e-10
    taus = sorted(turning_points(p).t_values(), key=lambda z: cmath.phase(z))
    taus_s = sorted(turning_points(ps).t_values(), key=lambda z: cmath.phase(z * r ** 2))
    for tau, tau_s in zip(taus, taus_s):
        assert abs(tau_s - tau / r ** 2) < 1e-10 * max(1.0, abs(tau))


# ---------------------------------------------------------------------------
# Degenerate-family chart
# ---------------------------------------------------------------------------

def test_d7_chart_consistency():
    c = 2 + 1j
    chart = D7Chart(c)
    for u in (0.5 + 0.3j, -1.2 + 0.8j, 3.1 - 0.4j):
        lam, t = chart.lambda0_of_u(u), chart.t_of_u(u)
        assert abs(2 * lam ** 3 - c * t * lam + t * t) < 1e-10 * max(1.0, abs(t)) ** 2
        assert abs(chart.mu0_of_u(u) - (c * lam - t) / (2 * lam ** 2)) < 1e-12
        dtdu = chart.dt_du(u)
        rhs = -4 * lam / t ** 2 + 1 / lam ** 2
        assert abs(chart.q(u) / dtdu ** 2 - rhs) < 1e-9 * max(1.0, abs(rhs))


def test_d7_distinguished_points():
    c = 2 + 1j
    chart = D7Chart(c)
    (utp,) = chart.turning_points_u
    assert utp == pytest.approx(2 * c / 3)
    assert chart.t_of_u(utp) == pytest.approx(2 * c ** 3 / 27)
    jet = chart.q(Jet.variable(utp, 4))
    assert abs(jet.coeffs[0]) < 1e-12
    assert abs(jet.coeffs[1]) < 1e-12
    assert abs(jet.coeffs[2]) < 1e-12
    assert abs(jet.coeffs[3]) > 1e-6
    eps = 1e-6
    assert abs(chart.q(eps) * eps - (-8 * c)) < 1e-4        # simple pole at u = 0
    assert abs(chart.q(c + eps) * eps ** 2 - c ** 2) < 1e-4  # double pole at u = c
    assert abs(chart.q(1e8) - 27) < 1e-5                     # regular at infinity
    assert abs(chart.t_of_u(0)) == 0                         # both over t = 0


def test_d7_rejects_zero_parameter():
    with pytest.raises(DegenerateParametersError):
        D7Chart(0)
