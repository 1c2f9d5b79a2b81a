"""Tests of the eta-series layer: formal solutions, Riccati hierarchy,
Hamiltonians, and parameter-shift transformations."""

import cmath

import pytest

from p3wkb.algebra import (
    Parameters,
    d7_lambda0_branches,
    lambda0_branches,
    mu0,
    turning_points,
)
from p3wkb.numerics import Jet
from p3wkb.series import (
    ConditioningError,
    D7Model,
    EtaSeries,
    OrderBudgetError,
    backlund_apply,
    backlund_model,
    hamilton_residual,
    hamiltonian,
    instanton1_prefactor,
    riccati_solution,
    x_factor,
    zero_param_solution,
)

P = Parameters(2 + 1j, 3)
T0 = 0.8 + 0.6j


@pytest.fixture(scope="module")
def zp():
    return zero_param_solution(T0, lambda0_branches(T0, P)[0], P, N=6)


@pytest.fixture(scope="module")
def ric(zp):
    return riccati_solution(zp, +1)


def _eta_minus(template):
    ref = template.terms[0]
    one = Jet.constant(1.0 + 0j, ref.base_point, ref.order)
    return EtaSeries.from_slots({-1: one}, ref.base_point, ref.order, exact=True)


# ---------------------------------------------------------------------------
# Zero-parameter solution
# ---------------------------------------------------------------------------

def test_main_equation_residual_vanishes(zp):
    res = zp.residual()
    for power, val in res.slot_values().items():
        assert abs(val) < 1e-9, f"residual at eta^{power}: {abs(val)}"


def test_odd_slots_exactly_zero(zp):
    for m in (1, 3, 5):
        jet = zp.lam.slot(-m)
        assert all(c == 0 for c in jet.coeffs)


def test_mu_leading_matches_branch(zp):
    b = zp.branch
    assert abs(zp.mu.slot_value(0) - mu0(b, P)) < 1e-12


def test_lambda2_printed_formula(zp):
    lam0 = zp.lam.slot(0)
    t = zp.t_jet
    direct = (lam0.derive().derive() - lam0.derive() * lam0.derive() / lam0
              + lam0.derive() / t) / zp.delta0
    assert abs(direct.value() - zp.lam.slot_value(-2)) < 1e-10


def test_lambda4_printed_formula(zp):
    lam0, lam2 = zp.lam.slot(0), zp.lam.slot(-2)
    t = zp.t_jet
    ci = P.c_inf
    direct = (lam2.derive().derive()
              - 2 * lam0.derive() * lam2.derive() / lam0
              + lam2 * lam0.derive() * lam0.derive() / (lam0 * lam0)
              + lam2.derive() / t
              - 3 * lam0 * lam2 * lam2 / (t * t)
              + ci * lam2 * lam2 / (t * t)
              + lam2 * lam2 / (lam0 * lam0 * lam0)) / zp.delta0
    assert abs(direct.value() - zp.lam.slot_value(-4)) < 1e-10


def test_conditioning_error_for_tiny_delta():
    # Rescaling (t, c) -> (r^-2 t, r^-1 c) scales Delta by r^2; r = 1e-5
    # drives |Delta| below the 1e-8 conditioning gate.
    r = 1e-5
    ps = Parameters(P.c_inf / r, P.c_0 / r)
    ts = T0 / r ** 2
    b = lambda0_branches(ts, ps)[0]
    with pytest.raises(ConditioningError):
        zero_param_solution(ts, b, ps, N=4)


def test_order_budget_gate():
    b = lambda0_branches(T0, P)[0]
    with pytest.raises(OrderBudgetError):
        zero_param_solution(T0, b, P, N=6, K=7)


def test_base_point_independence(zp):
    delta_t = 0.004
    t1 = T0 + delta_t
    b1 = min(lambda0_branches(t1, P), key=lambda bb: abs(bb.lambda0 - zp.branch.lambda0))
    fresh = zero_param_solution(t1, b1, P, N=6)
    moved = zp.lam.rebase(t1)
    for power in range(0, -7, -2):
        a, b_ = moved.slot_value(power), fresh.lam.slot_value(power)
        assert abs(a - b_) < 1e-8 * max(1.0, abs(b_))


# ---------------------------------------------------------------------------
# Riccati hierarchy
# ---------------------------------------------------------------------------

def test_riccati_residual_vanishes(ric):
    res = ric.residual()
    for power, val in res.slot_values().items():
        assert abs(val) < 1e-9, f"residual at eta^{power}: {abs(val)}"


def test_riccati_leading_is_sqrt_delta(zp, ric):
    assert abs(ric.R.slot_value(1) ** 2 - zp.delta0.value()) < 1e-12


def test_r0_printed_formula(zp, ric):
    lam0, t = zp.lam.slot(0), zp.t_jet
    rm1 = ric.R.slot(1)
    direct = -rm1.derive() / (2 * rm1) + lam0.derive() / lam0 \
        - Jet.constant(0.5 + 0j, zp.t0, t.order) / t
    assert abs(direct.value() - ric.R.slot_value(0)) < 1e-10


def test_r1_printed_formula(zp, ric):
    lam0, lam2, t = zp.lam.slot(0), zp.lam.slot(-2), zp.t_jet
    rm1, r0 = ric.R.slot(1), ric.R.slot(0)
    half = Jet.constant(0.5 + 0j, zp.t0, t.order)
    second = 6 * lam0 / (t * t) - 2 * P.c_inf / (t * t) - 2 / (lam0 * lam0 * lam0)
    direct = (half / rm1) * (-r0 * r0 - r0.derive()
                             + (2 * lam0.derive() / lam0 - 1 / t) * r0
                             + second * lam2
                             - (lam0.derive() / lam0) ** 2)
    assert abs(direct.value() - ric.R.slot_value(-1)) < 1e-10


def test_sign_flip_equals_parity_flip(zp, ric):
    other = riccati_solution(zp, -1)
    for power in ric.R.powers():
        assert abs(other.R.slot_value(power) - ric.flipped().R.slot_value(power)) < 1e-12


def test_even_part_determined_by_odd_part(zp, ric):
    t = zp.t_jet
    half_over_t = Jet.constant(0.5 + 0j, zp.t0, t.order) / t
    dual = (ric.r_odd.derive() / ric.r_odd) * (-0.5) + zp.lam.derive() / zp.lam \
        - EtaSeries.lift(half_over_t, zp.lam)
    for power in (0, -2, -4):
        assert abs(dual.slot_value(power) - ric.r_even.slot_value(power)) < 1e-10


# ---------------------------------------------------------------------------
# One-instanton factors
# ---------------------------------------------------------------------------

def test_prefactor_leading(zp, ric):
    q = instanton1_prefactor(ric)
    expected = zp.branch.lambda0 / cmath.sqrt(zp.t0 * ric.R.slot_value(1))
    assert abs(q.slot_value(0) - expected) < 1e-12


def test_x_factor_leading(zp, ric):
    lam0, t = zp.lambda0_jet, zp.t_jet
    rm1 = ric.R.slot(1)
    direct = rm1 * t / (2 * lam0 * lam0) - P.c_0 / (2 * lam0 * lam0) \
        + t / (lam0 * lam0 * lam0)
    x = x_factor(ric)
    assert abs(x.slot_value(0) - direct.value()) < 1e-12


# ---------------------------------------------------------------------------
# Hamiltonian structure
# ---------------------------------------------------------------------------

def test_hamilton_equations_hold(zp):
    res = hamilton_residual(zp.model, zp.lam, zp.mu, zp.t_jet)
    for power, val in res.slot_values().items():
        assert abs(val) < 1e-9


def test_hamiltonian_series_finite(zp):
    h = hamiltonian(zp)
    assert all(abs(v) < 1e3 for v in h.slot_values().values())


# ---------------------------------------------------------------------------
# Parameter-shift transformations
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("which", [1, 2])
def test_backlund_matches_shifted_solution(zp, which):
    lam_t, mu_t = backlund_apply(zp, which)
    shifted = backlund_model(zp.model, which)
    fresh = zero_param_solution(zp.t0, zp.branch, model=shifted, N=6)
    for power in range(0, -5, -1):
        assert abs(lam_t.slot_value(power) - fresh.lam.slot_value(power)) < 1e-9
        assert abs(mu_t.slot_value(power) - fresh.mu.slot_value(power)) < 1e-9


@pytest.mark.parametrize("which", [1, 2])
def test_backlund_shifted_hamiltonian_residual(zp, which):
    lam_t, mu_t = backlund_apply(zp, which)
    shifted = backlund_model(zp.model, which)
    res = hamilton_residual(shifted, lam_t, mu_t, zp.t_jet)
    for power, val in res.slot_values().items():
        if power >= -4:
            assert abs(val) < 1e-9


def test_second_transformation_leading_identity(zp):
    b = zp.branch
    m0 = mu0(b, P)
    lhs = 2 * zp.t0 * (m0 - 1) / (2 * b.lambda0 * (m0 - 1) + (P.c_inf - P.c_0))
    assert abs(lhs - b.lambda0) < 1e-12


@pytest.mark.parametrize("sign", [+1, -1])
def test_shift_difference_identity_first(zp, sign):
    # R at shifted parameters minus R equals d/dt log(t * G1), with the same
    # square-root sign convention on both sides.
    lam, mu, t = zp.lam, zp.mu, zp.t_jet
    em = _eta_minus(lam)
    ci, c0 = zp.model.c_series(lam)
    r = riccati_solution(zp, sign)
    x = x_factor(r)
    shifted = zero_param_solution(zp.t0, zp.branch, model=backlund_model(zp.model, 1), N=6)
    r_shift = riccati_solution(shifted, sign)
    num = 4 * lam * (mu - 1) + (ci - c0 + em) + 2 * (lam * lam) * x
    den = 2 * (lam * lam) * (mu - 1) + (ci - c0 + em) * lam + 2 * t
    g1 = (lam * lam).inverse() - (ci + c0 + em) * num * (den * den).inverse()
    rhs = EtaSeries.lift(Jet.constant(1.0 + 0j, zp.t0, t.order) / t, lam) \
        + g1.derive() / g1
    diff = r_shift.R - r.R
    for power in range(1, -4, -1):
        assert abs(diff.slot_value(power) - rhs.slot_value(power)) < 1e-9


@pytest.mark.parametrize("sign", [+1, -1])
def test_shift_difference_identity_second(zp, sign):
    lam, mu, t = zp.lam, zp.mu, zp.t_jet
    em = _eta_minus(lam)
    ci, c0 = zp.model.c_series(lam)
    r = riccati_solution(zp, sign)
    x = x_factor(r)
    shifted = zero_param_solution(zp.t0, zp.branch, model=backlund_model(zp.model, 2), N=6)
    r_shift = riccati_solution(shifted, sign)
    g2 = -2 * (mu - 1) * (mu - 1) + (ci - c0 + em) * x
    g3 = 2 * lam * (mu - 1) + (ci - c0 + em)
    rhs = EtaSeries.lift(Jet.constant(1.0 + 0j, zp.t0, t.order) / t, lam) \
        + g2.derive() / g2 - 2 * (g3.derive() / g3)
    diff = r_shift.R - r.R
    for power in range(1, -4, -1):
        assert abs(diff.slot_value(power) - rhs.slot_value(power)) < 1e-9


# ---------------------------------------------------------------------------
# Homogeneity: (t, c_inf, c_0, eta) -> (r^-2 t, r^-1 c_inf, r^-1 c_0, r eta)
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("r", [2.0, 1 / 3])
def test_series_homogeneity(zp, r):
    ps = Parameters(P.c_inf / r, P.c_0 / r)
    ts = T0 / r ** 2
    bs = min(lambda0_branches(ts, ps),
             key=lambda bb: abs(bb.lambda0 - zp.branch.lambda0 / r))
    zps = zero_param_solution(ts, bs, ps, N=6)
    for m in range(0, 7):
        ref = zp.lam.slot_value(-m)
        scl = zps.lam.slot_value(-m)
        assert abs(scl - r ** (m - 1) * ref) < 1e-10 * max(1.0, abs(ref))
        ref_mu = zp.mu.slot_value(-m)
        scl_mu = zps.mu.slot_value(-m)
        assert abs(scl_mu - r ** m * ref_mu) < 1e-10 * max(1.0, abs(ref_mu))
    ric = riccati_solution(zp, +1)
    rs = riccati_solution(zps, +1)
    # Align the square-root sign through the leading slot.
    flip = -1 if abs(rs.R.slot_value(1) - r ** 1 * ric.R.slot_value(1)) > 1e-6 else 1
    for k in range(-1, 6):
        ref = ric.R.slot_value(-k)
        scl = rs.R.slot_value(-k) * (flip if k % 2 else 1)
        assert abs(scl - r ** (k + 2) * ref) < 1e-9 * max(1.0, abs(ref))


# ---------------------------------------------------------------------------
# Degenerate family
# ---------------------------------------------------------------------------

C7 = 2 + 1j


@pytest.fixture(scope="module")
def zp7():
    b = d7_lambda0_branches(T0, C7)[0]
    return zero_param_solution(T0, b, model=D7Model(C7), N=6)


def test_d7_residuals(zp7):
    for val in zp7.residual().slot_values().values():
        assert abs(val) < 1e-9
    ric = riccati_solution(zp7, +1)
    for val in ric.residual().slot_values().values():
        assert abs(val) < 1e-9
    hres = hamilton_residual(zp7.model, zp7.lam, zp7.mu, zp7.t_jet)
    for val in hres.slot_values().values():
        assert abs(val) < 1e-9


def test_d7_mu_leading(zp7):
    lam0, t0 = zp7.branch.lambda0, zp7.t0
    assert abs(zp7.mu.slot_value(0) - (C7 * lam0 - t0) / (2 * lam0 ** 2)) < 1e-12


def test_d7_backlund(zp7):
    lam_t, mu_t = backlund_apply(zp7, 1)
    shifted = backlund_model(zp7.model, 1)
    fresh = zero_param_solution(zp7.t0, zp7.branch, model=shifted, N=6)
    for power in range(0, -5, -1):
        assert abs(lam_t.slot_value(power) - fresh.lam.slot_value(power)) < 1e-9
        assert abs(mu_t.slot_value(power) - fresh.mu.slot_value(power)) < 1e-9
    res = hamilton_residual(shifted, lam_t, mu_t, zp7.t_jet)
    for power, val in res.slot_values().items():
        if power >= -4:
            assert abs(val) < 1e-9


def test_d7_odd_slots_vanish(zp7):
    for m in (1, 3, 5):
        assert all(c == 0 for c in zp7.lam.slot(-m).coeffs)
