import math

import numpy as np
import pytest

from hubbardll.effective_model import (
    Anomalies,
    EffectiveParams,
    K_pair,
    K_sqrt_form,
    X_table,
    anomaly_params,
    channel_velocities,
    density_correlation,
    effective_params_for_hubbard,
    eta_zeta,
    exponent_set,
    o1c_correlation,
    tune_to_hubbard,
    two_point,
)
from hubbardll.errors import (
    DomainViolation,
    OriginSingularity,
    StrongCouplingBreakdown,
)

PF3 = math.acos(0.5)  # pi/3


def test_anomaly_params_symmetric():
    a = anomaly_params(EffectiveParams(g_par=0.1, g_perp=0.1, g4=0.05, c=1.0))
    assert a.nu_rho == pytest.approx(0.2 / (8 * math.pi), rel=1e-12)
    assert a.nu_sigma == 0.0
    assert a.nu4 == pytest.approx(0.05 / (4 * math.pi), rel=1e-12)
    assert a.nu_rho == pytest.approx(0.0079577, abs=1e-7)
    assert a.nu4 == pytest.approx(0.0039789, abs=1e-7)


def test_anomaly_params_momentum_profile():
    p = EffectiveParams(g_par=0.1, g_perp=0.05, g4=0.02, c=1.0)
    base = anomaly_params(p)
    scaled = anomaly_params(p, h_hat=0.25)
    assert scaled.nu_rho == pytest.approx(0.25 * base.nu_rho, rel=1e-15)
    assert scaled.nu_sigma == pytest.approx(0.25 * base.nu_sigma, rel=1e-15)
    assert scaled.nu4 == pytest.approx(0.25 * base.nu4, rel=1e-15)


def test_anomaly_params_zero():
    a = anomaly_params(EffectiveParams(g_par=0.0, g_perp=0.0, g4=0.0, c=1.0))
    assert (a.nu_rho, a.nu_sigma, a.nu4) == (0.0, 0.0, 0.0)


def test_anomaly_params_antisymmetric():
    a = anomaly_params(EffectiveParams(g_par=0.1, g_perp=-0.1, g4=0.0, c=1.0))
    assert a.nu_rho == 0.0
    assert a.nu_sigma == pytest.approx(0.2 / (8 * math.pi), rel=1e-12)


def test_channel_velocities_free():
    v = channel_velocities(0.0, 0.0)
    assert (v.v_plus, v.v_minus, v.v) == (1.0, 1.0, 1.0)


def test_channel_velocities_values():
    v = channel_velocities(0.05, 0.02)
    assert v.v_plus == pytest.approx(0.974885, abs=1e-6)
    assert v.v_minus == pytest.approx(1.015086, abs=1e-6)
    assert v.v == pytest.approx(1.041237, abs=1e-6)


def test_channel_velocities_breakdown():
    with pytest.raises(StrongCouplingBreakdown):
        channel_velocities(0.5, 0.0)


def test_eta_zeta_free():
    assert eta_zeta(channel_velocities(0.0, 0.0), 0.0) == (0.0, 0.0)


def test_eta_zeta_values():
    vel = channel_velocities(0.05, 0.02)
    eta, zeta = eta_zeta(vel, 0.05)
    assert eta == pytest.approx(0.010110, abs=1e-6)
    assert zeta == pytest.approx(0.101052, abs=1e-6)


def test_eta_nonnegative_at_small_coupling():
    vel = channel_velocities(0.05, 0.0)
    eta, _ = eta_zeta(vel, 0.05)
    assert eta >= 0.0


def test_k_pair_free():
    assert K_pair(0.0, 0.0) == (1.0, 1.0)


def test_k_pair_values():
    K, Kt = K_pair(0.05, 0.02)
    assert K == pytest.approx(0.818116, abs=1e-6)
    assert Kt == pytest.approx(1.222323, abs=1e-6)
    assert K * Kt == pytest.approx(1.0, abs=1e-12)


def test_k_pair_nu4_zero_closed_form():
    # with nu4 = 0, K collapses to (1-2nu)/(1+2nu)
    K, _ = K_pair(0.01, 0.0)
    assert K == pytest.approx(0.98 / 1.02, rel=1e-12)
    assert K == pytest.approx(K_sqrt_form(0.01, 0.0), abs=1e-12)


def test_identity_suite_grid():
    nus = np.linspace(-0.1, 0.1, 100)
    nu4s = np.linspace(-0.1, 0.1, 100)
    worst_prod, worst_eta, worst_forms = 0.0, 0.0, 0.0
    for nu in nus:
        for nu4 in nu4s:
            K, Kt = K_pair(nu, nu4)
            vel = channel_velocities(nu, nu4)
            eta, _ = eta_zeta(vel, nu)
            worst_prod = max(worst_prod, abs(K * Kt - 1.0))
            worst_eta = max(worst_eta, abs(4 * eta - (K + Kt - 2.0)))
            worst_forms = max(worst_forms, abs(K - K_sqrt_form(nu, nu4)))
    assert worst_prod <= 1e-12
    assert worst_eta <= 1e-12
    assert worst_forms <= 1e-12


def test_x_table_free_degenerate():
    t = X_table(0.0, 0.0)
    assert all(v == 2.0 for v in t.values())


def test_x_table_values():
    t = X_table(0.0125, 0.1)
    assert t["2C"] == pytest.approx(1.825, rel=1e-12)
    assert t["2SC"] == pytest.approx(2.225, rel=1e-12)
    assert t["1SC"] == pytest.approx(2.05, rel=1e-12)


def test_x_table_scaling_relations_at_k_08():
    # nu4 = 0, K = (1-2nu)/(1+2nu) = 0.8  =>  nu = 1/18
    nu = 1.0 / 18.0
    K, Kt = K_pair(nu, 0.0)
    assert K == pytest.approx(0.8, rel=1e-12)
    vel = channel_velocities(nu, 0.0)
    eta, zeta = eta_zeta(vel, nu)
    t = X_table(eta, zeta)
    assert t["2C"] == pytest.approx(K + 1.0, abs=1e-12)
    assert t["2SC"] == pytest.approx(1.0 / K + 1.0, abs=1e-12)
    assert t["1SC"] == pytest.approx(K + 1.0 / K, abs=1e-12)


def test_scaling_relations_hubbard_grid():
    for lam in np.linspace(0.001, 0.05, 8):
        es = exponent_set(tune_to_hubbard(lam, 1.0, 1.0, PF3))
        assert es.two_X["2C"] == pytest.approx(es.K + 1.0, abs=1e-12)
        assert es.two_X["2SC"] == pytest.approx(1.0 / es.K + 1.0, abs=1e-12)
        assert es.two_X["1SC"] == pytest.approx(es.K + 1.0 / es.K, abs=1e-12)


def test_first_order_k_slope():
    lams = np.linspace(1e-4, 1e-3, 10)
    Ks = [K_pair(*_nu_pair(l))[0] for l in lams]
    slope = np.polyfit(lams, Ks, 1)[0]
    expected = -2.0 * (1.0 - 0.5) / (math.pi * math.sin(PF3))
    assert slope == pytest.approx(expected, rel=1e-3)


def _nu_pair(lam):
    a = tune_to_hubbard(lam, 1.0, 1.0, PF3)
    return a.nu_rho, a.nu4


FREE = EffectiveParams(g_par=0.0, g_perp=0.0, g4=0.0, c=1.0)
FREE_ANOM = Anomalies(0.0, 0.0, 0.0)


def test_two_point_free_value():
    assert two_point((1.0, 0.0), FREE, FREE_ANOM, 1) == pytest.approx(
        1.0 / (2 * math.pi), rel=1e-14
    )


def test_two_point_free_general_point():
    x = (0.7, -1.3)
    got = two_point(x, FREE, FREE_ANOM, 1)
    assert got == pytest.approx(1.0 / (2 * math.pi * (x[0] + 1j * x[1])), rel=1e-12)


def test_two_point_origin_raises():
    with pytest.raises(OriginSingularity):
        two_point((0.0, 0.0), FREE, FREE_ANOM, 1)


def test_two_point_g4_zero_collapse():
    # nu4 = 0: both channel velocities are 1 for any admissible nu
    anom = Anomalies(nu_rho=0.07, nu_sigma=0.01, nu4=0.0)
    assert channel_velocities(anom.nu_rho, 0.0).v == pytest.approx(1.0, abs=1e-15)
    assert channel_velocities(anom.nu_sigma, 0.0).v == pytest.approx(1.0, abs=1e-15)
    # and with matched channel anomalies the two exponents coincide
    sym = Anomalies(nu_rho=0.07, nu_sigma=0.07, nu4=0.0)
    es = exponent_set(sym)
    assert es.eta_rho == pytest.approx(es.eta_sigma, abs=1e-12)
    params = EffectiveParams(g_par=1.0, g_perp=0.0, g4=0.0, c=1.0)
    x = (0.9, 2.0)
    a = anomaly_params(params)
    got = two_point(x, params, a, 1)
    eta = eta_zeta(channel_velocities(a.nu_rho, 0.0), a.nu_rho)[0] + \
        eta_zeta(channel_velocities(a.nu_sigma, 0.0), a.nu_sigma)[0]
    want = (x[0] ** 2 + x[1] ** 2) ** (-eta / 2) / (2 * math.pi * (x[0] + 1j * x[1]))
    assert got == pytest.approx(want, rel=1e-12)


def test_two_point_continuity_across_equal_time():
    params = effective_params_for_hubbard(0.02, 1.0, 1.0, PF3)
    anom = anomaly_params(params)
    for x1 in (1.0, -2.5):
        up = two_point((1e-9, x1), params, anom, 1)
        dn = two_point((-1e-9, x1), params, anom, 1)
        assert abs(up - dn) <= 1e-8 * abs(up)


def test_two_point_conjugation_symmetry():
    # flipping either the spatial sign or omega conjugates the value
    params = effective_params_for_hubbard(0.02, 1.0, 1.0, PF3)
    anom = anomaly_params(params)
    x = (0.8, 1.7)
    s = two_point(x, params, anom, 1)
    assert two_point((x[0], -x[1]), params, anom, 1) == pytest.approx(
        s.conjugate(), rel=1e-12
    )
    assert two_point(x, params, anom, -1) == pytest.approx(s.conjugate(), rel=1e-12)


def test_density_correlation_free_wick():
    # against the Wick value -g(x) g(-x) built from the free propagator
    x = (0.6, 1.1)
    c, Z = 1.0, 1.0
    for w in (1, -1):
        got = density_correlation(x, FREE, FREE_ANOM, "rho", (w, w))
        g = lambda x0, x1: 1.0 / (2 * math.pi * Z * (c * x0 + 1j * w * x1))
        want = -g(x[0], x[1]) * g(-x[0], -x[1])
        assert got == pytest.approx(want, rel=1e-12)
        assert density_correlation(x, FREE, FREE_ANOM, "rho", (-w, w)) == 0.0


def test_density_correlation_interacting_finite():
    params = effective_params_for_hubbard(0.05, 1.0, 1.0, PF3)
    anom = anomaly_params(params)
    val = density_correlation((1.0, 0.0), params, anom, "rho", (1, 1))
    assert np.isfinite(val.real) and np.isfinite(val.imag)


def test_o1c_positive_on_time_axis():
    params = effective_params_for_hubbard(0.05, 1.0, 1.0, PF3)
    anom = Anomalies(nu_rho=0.05, nu_sigma=0.0, nu4=0.0)
    assert o1c_correlation((1.0, 0.0), params, anom) > 0.0


def test_o1c_free_closed_form():
    # 2/(2 pi^2 Z^2 c^2) * (x0^2 - x1^2/c^2)/(x0^2 + x1^2/c^2)^2 at nu -> 0
    for x in ((1.0, 0.3), (0.2, 1.9)):
        got = o1c_correlation(x, FREE, FREE_ANOM)
        x0, x1 = x
        want = (2 / (2 * math.pi**2)) * (x0**2 - x1**2) / (x0**2 + x1**2) ** 2
        assert got == pytest.approx(want, rel=1e-12)


def test_sigma_channel_free_when_decoupled():
    # g_sigma = 0 and g4 = 0: the spin channel is exactly free
    params = EffectiveParams(g_par=0.08, g_perp=0.08, g4=0.0, c=1.0)
    anom = anomaly_params(params)
    assert anom.nu_sigma == 0.0
    x = (0.5, 1.4)
    got = density_correlation(x, params, anom, "sigma", (1, 1))
    want = density_correlation(x, FREE, FREE_ANOM, "rho", (1, 1))
    assert got == pytest.approx(want, rel=1e-12)


def test_tune_to_hubbard_values():
    a = tune_to_hubbard(0.01, 1.0, 1.0, PF3)
    assert a.nu_rho == pytest.approx(0.00091888, abs=2e-8)
    assert a.nu4 == pytest.approx(0.0018378, abs=2e-7)
    assert a.nu_sigma == 0.0

    assert tune_to_hubbard(0.0, 1.0, 1.0, PF3) == Anomalies(0.0, 0.0, 0.0)

    a = tune_to_hubbard(0.001, 1.0, 0.5, PF3)
    assert a.nu_rho == pytest.approx(1.3783e-4, abs=2e-8)


def test_tune_to_hubbard_domain():
    with pytest.raises(DomainViolation):
        tune_to_hubbard(0.01, 1.0, -1.0, PF3)
    with pytest.raises(DomainViolation):
        tune_to_hubbard(0.01, 1.0, 1.0, math.pi / 2)


def test_effective_params_consistency():
    # the bare-coupling route and the direct anomaly route agree
    lam = 0.004
    via_params = anomaly_params(effective_params_for_hubbard(lam, 1.0, 1.0, PF3))
    direct = tune_to_hubbard(lam, 1.0, 1.0, PF3)
    assert via_params.nu_rho == pytest.approx(direct.nu_rho, rel=1e-14)
    assert via_params.nu4 == pytest.approx(direct.nu4, rel=1e-14)
    assert via_params.nu_sigma == direct.nu_sigma == 0.0
