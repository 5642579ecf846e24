"""Closed-form solution of the solvable effective model (no back-scattering).

Continuum fermions with linear dispersion and a non-local interaction are
exactly solvable when the transverse back-scattering vanishes.  Everything
observable is controlled by three anomaly parameters, evaluated here at zero
momentum transfer (h_hat(0) = 1):

    nu_rho   = (g_par + g_perp) / (8 pi c)
    nu_sigma = (g_par - g_perp) / (8 pi c)
    nu_4     =  g_4 / (4 pi c)

Each channel gamma in {rho, sigma} carries two velocities

    v_{gamma,±}^2 = (1 ∓ nu_{4,gamma})^2 - 4 nu_gamma^2,

with nu_{4,rho} = -nu_{4,sigma} = nu_4, from which follow the anomalous
exponents, the Luttinger parameter pair K, K_tilde = 1/K, the table of
correlation-decay exponents, and the fermion two-point function.  The
identities K*K_tilde = 1 and 4 eta_rho = K + K_tilde - 2 are exact
consequences of the algebra and are asserted at every evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from .errors import (
    ComputationError,
    DomainViolation,
    OriginSingularity,
    StrongCouplingBreakdown,
)

# universal log-correction exponents of the response functions
ZETA_BAR: Dict[str, float] = {"z": 0.0, "C": -1.5, "S": 0.5, "SC": -1.5, "TC": 0.5}

_IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class EffectiveParams:
    """Bare couplings of the solvable model; c is the bare velocity v_F(1+delta)."""

    g_par: float
    g_perp: float
    g4: float
    c: float
    Z: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise DomainViolation(f"bare velocity must be positive, got {self.c}")
        if not self.Z > 0:
            raise DomainViolation(f"field strength must be positive, got {self.Z}")


@dataclass(frozen=True)
class Anomalies:
    """Ward-identity anomaly coefficients at zero momentum transfer."""

    nu_rho: float
    nu_sigma: float
    nu4: float


@dataclass(frozen=True)
class ChannelVelocities:
    v_plus: float
    v_minus: float

    @property
    def v(self) -> float:
        return self.v_minus / self.v_plus


@dataclass(frozen=True)
class ExponentSet:
    """All critical exponents of the model, plus the universal zeta table."""

    eta_rho: float
    eta_sigma: float
    zeta_rho: float
    zeta_sigma: float
    vel_rho: ChannelVelocities
    vel_sigma: ChannelVelocities
    K: float
    K_tilde: float
    two_X: Dict[str, float]
    zeta_bar: Dict[str, float] = field(default_factory=lambda: dict(ZETA_BAR))


def anomaly_params(params: EffectiveParams, h_hat: float = 1.0) -> Anomalies:
    """Anomaly coefficients from the bare couplings.

    ``h_hat`` is the interaction profile at the evaluation momentum; every
    exponent and observable in scope only needs its zero-momentum value 1,
    but momentum-resolved studies may pass the profile value directly.
    """
    c = params.c
    return Anomalies(
        nu_rho=h_hat * (params.g_par + params.g_perp) / (8.0 * math.pi * c),
        nu_sigma=h_hat * (params.g_par - params.g_perp) / (8.0 * math.pi * c),
        nu4=h_hat * params.g4 / (4.0 * math.pi * c),
    )


def channel_velocities(nu_gamma: float, nu4_gamma: float) -> ChannelVelocities:
    """The two propagation velocities of one channel.

    v_±^2 = (1 ∓ nu4_gamma)^2 - 4 nu_gamma^2; the charge channel uses
    nu4_gamma = +nu4 and the spin channel -nu4.  Raises
    StrongCouplingBreakdown when either square is <= 0.
    """
    vp2 = (1.0 - nu4_gamma) ** 2 - 4.0 * nu_gamma**2
    vm2 = (1.0 + nu4_gamma) ** 2 - 4.0 * nu_gamma**2
    if vp2 <= 0.0 or vm2 <= 0.0:
        raise StrongCouplingBreakdown(
            f"velocity squares ({vp2:.3g}, {vm2:.3g}) not both positive for "
            f"nu={nu_gamma}, nu4={nu4_gamma}"
        )
    return ChannelVelocities(v_plus=math.sqrt(vp2), v_minus=math.sqrt(vm2))


def eta_zeta(vel: ChannelVelocities, nu_gamma: float) -> Tuple[float, float]:
    """Anomalous exponent and log-coefficient of one channel.

    eta = -1/2 + (4 - v_+^2 - v_-^2) / (4 v_+ v_-),  zeta = 2 nu / (v_+ v_-).
    """
    vp, vm = vel.v_plus, vel.v_minus
    eta = -0.5 + (4.0 - vp * vp - vm * vm) / (4.0 * vp * vm)
    zeta = 2.0 * nu_gamma / (vp * vm)
    return eta, zeta


def K_pair(nu_rho: float, nu4: float) -> Tuple[float, float]:
    """Luttinger parameter K and its inverse partner K_tilde.

    Both the rational form ((1∓2nu)^2 - nu4^2)/(v_+ v_-) and the product of
    square roots evaluate to the same number; the pair satisfies
    K*K_tilde = 1 and 4 eta_rho = K + K_tilde - 2 exactly, and both
    identities are checked to 1e-12 here.
    """
    vel = channel_velocities(nu_rho, nu4)
    vpvm = vel.v_plus * vel.v_minus
    K = ((1.0 - 2.0 * nu_rho) ** 2 - nu4**2) / vpvm
    K_tilde = ((1.0 + 2.0 * nu_rho) ** 2 - nu4**2) / vpvm
    if abs(K * K_tilde - 1.0) > _IDENTITY_TOL:
        raise ComputationError(f"K * K_tilde - 1 = {K * K_tilde - 1.0:.3e}")
    eta, _ = eta_zeta(vel, nu_rho)
    if abs(4.0 * eta - (K + K_tilde - 2.0)) > _IDENTITY_TOL:
        raise ComputationError(
            f"4 eta - (K + 1/K - 2) = {4.0 * eta - (K + K_tilde - 2.0):.3e}"
        )
    return K, K_tilde


def K_sqrt_form(nu_rho: float, nu4: float) -> float:
    """K as a product of two square-root factors (alternative factorization)."""
    num1 = (1.0 - nu4) - 2.0 * nu_rho
    den1 = (1.0 - nu4) + 2.0 * nu_rho
    num2 = (1.0 + nu4) - 2.0 * nu_rho
    den2 = (1.0 + nu4) + 2.0 * nu_rho
    if min(num1, den1, num2, den2) <= 0.0:
        raise StrongCouplingBreakdown(
            f"square-root factorization leaves its domain at nu={nu_rho}, nu4={nu4}"
        )
    return math.sqrt(num1 / den1) * math.sqrt(num2 / den2)


def X_table(eta_rho: float, zeta_rho: float) -> Dict[str, float]:
    """Decay exponents 2*X_t of the density correlations (spin sector free).

    Keys follow the channel tags of renorm_flow; values are the full decay
    exponent 2X of |x|^(-2X).
    """
    return {
        "2C": 2.0 + 2.0 * eta_rho - 2.0 * zeta_rho,
        "2S": 2.0 + 2.0 * eta_rho - 2.0 * zeta_rho,
        "2SC": 2.0 + 2.0 * eta_rho + 2.0 * zeta_rho,
        "2TC": 2.0 + 2.0 * eta_rho + 2.0 * zeta_rho,
        "1SC": 2.0 + 4.0 * eta_rho,
        "1C": 2.0,
        "1S": 2.0,
    }


def exponent_set(anom: Anomalies) -> ExponentSet:
    """Assemble the full exponent set from the anomaly coefficients."""
    vel_rho = channel_velocities(anom.nu_rho, anom.nu4)
    vel_sigma = channel_velocities(anom.nu_sigma, -anom.nu4)
    eta_r, zeta_r = eta_zeta(vel_rho, anom.nu_rho)
    eta_s, zeta_s = eta_zeta(vel_sigma, anom.nu_sigma)
    K, K_tilde = K_pair(anom.nu_rho, anom.nu4)
    return ExponentSet(
        eta_rho=eta_r,
        eta_sigma=eta_s,
        zeta_rho=zeta_r,
        zeta_sigma=zeta_s,
        vel_rho=vel_rho,
        vel_sigma=vel_sigma,
        K=K,
        K_tilde=K_tilde,
        two_X=X_table(eta_r, zeta_r),
    )


def _sqrt_principal(z: complex) -> complex:
    # |z|^{1/2} e^{i Arg(z)/2} with Arg in (-pi, pi]: numpy/cmath principal sqrt
    return complex(np.sqrt(complex(z)))


def two_point(x, params: EffectiveParams, anomalies: Anomalies, omega: int) -> complex:
    """Leading large-distance form of the fermion two-point function.

    ``x = (x0, x1)`` with x0 imaginary time.  Returns

        (1/2piZ) (c^2 v_rho^2 x0^2 + x1^2)^(-eta_rho/2)
                 (c^2 v_sig^2 x0^2 + x1^2)^(-eta_sig/2)
          / [ (c v_rho x0 + i w x1)^(1/2) (c v_sig x0 + i w x1)^(1/2) ]

    with principal square roots; the undetermined overall constant e^C is
    set to 1, so only ratios and exponents of this quantity are meaningful.
    """
    x0, x1 = float(x[0]), float(x[1])
    if x0 == 0.0 and x1 == 0.0:
        raise OriginSingularity("two-point function evaluated at the origin")
    if omega not in (1, -1):
        raise DomainViolation(f"omega must be +1 or -1, got {omega}")
    c, Z = params.c, params.Z
    vel_r = channel_velocities(anomalies.nu_rho, anomalies.nu4)
    vel_s = channel_velocities(anomalies.nu_sigma, -anomalies.nu4)
    eta_r, _ = eta_zeta(vel_r, anomalies.nu_rho)
    eta_s, _ = eta_zeta(vel_s, anomalies.nu_sigma)
    vr, vs = vel_r.v, vel_s.v
    amp_r = (c * c * vr * vr * x0 * x0 + x1 * x1) ** (-0.5 * eta_r)
    amp_s = (c * c * vs * vs * x0 * x0 + x1 * x1) ** (-0.5 * eta_s)
    den = _sqrt_principal(c * vr * x0 + 1j * omega * x1) * _sqrt_principal(
        c * vs * x0 + 1j * omega * x1
    )
    return amp_r * amp_s / (2.0 * math.pi * Z * den)


def density_correlation(x, params: EffectiveParams, anomalies: Anomalies,
                        channel: str, omega_pair: Tuple[int, int]) -> complex:
    """Leading 1/x^2 form of the density correlation G^gamma_{w', w}(x).

    ``channel`` is "rho" or "sigma"; ``omega_pair`` = (w', w) selects the
    branch pair.  The raw coefficients u_±/(v_+ - v_-) are singular in the
    free limit; this evaluation uses the equivalent continuous rewriting
    with (1 - v^2)/(v_+ ∓ v_-) = (v_+ ± v_-)/v_+^2, so the free limit is
    finite and equals the Wick-theorem value.
    """
    x0, x1 = float(x[0]), float(x[1])
    if x0 == 0.0 and x1 == 0.0:
        raise OriginSingularity("density correlation evaluated at the origin")
    wp, w = omega_pair
    if wp not in (1, -1) or w not in (1, -1):
        raise DomainViolation(f"omega_pair must be (+-1, +-1), got {omega_pair}")
    if channel == "rho":
        nu_g, nu4_g = anomalies.nu_rho, anomalies.nu4
    elif channel == "sigma":
        nu_g, nu4_g = anomalies.nu_sigma, -anomalies.nu4
    else:
        raise DomainViolation(f"channel must be 'rho' or 'sigma', got {channel!r}")
    c, Z = params.c, params.Z
    vel = channel_velocities(nu_g, nu4_g)
    vp, vm = vel.v_plus, vel.v_minus
    vg = vel.v
    u_plus = 0.5 * ((1.0 - nu4_g) / vp + (1.0 + nu4_g) / vm)
    u_minus = 0.5 * ((1.0 - nu4_g) / vp - (1.0 + nu4_g) / vm)
    w_plus = nu_g * (1.0 / vp - 1.0 / vm)
    w_minus = nu_g * (1.0 / vp + 1.0 / vm)
    # (1 - v^2)/(v_+ - v_-) = (v_+ + v_-)/v_+^2 and
    # (1 - v^2)/(v_+ + v_-) = (v_+ - v_-)/v_+^2 (continuous at v = 1)
    c_same = (vp + vm) / (vp * vp)
    c_cross = (vp - vm) / (vp * vp)
    za = vg * x0 + 1j * w * x1 / c
    zb = vg * x0 - 1j * w * x1 / c
    pref = 1.0 / (8.0 * math.pi**2 * c * c * Z * Z)
    if wp == w:
        return pref * (c_same * u_plus / (za * za) - c_cross * u_minus / (zb * zb))
    return pref * (c_same * w_plus / (za * za) - c_cross * w_minus / (zb * zb))


def o1c_correlation(x, params: EffectiveParams, anomalies: Anomalies) -> float:
    """Charge-density correlation <O^(1C) O^(1C)> assembled from the channel forms.

    Equals 2 * sum_{w'} [G^rho_{w',+}] by spin tracing; real by symmetry.
    """
    total = 0.0 + 0.0j
    for wp in (1, -1):
        for w in (1, -1):
            total += density_correlation(x, params, anomalies, "rho", (wp, w))
    return float((2.0 * total).real)


def tune_to_hubbard(lam: float, v0: float, v2pf: float, pf_bar: float) -> Anomalies:
    """Anomalies matching the lattice model at leading order.

    nu_rho = lam (v0 - v2pf/2) / (2 pi sin pf), nu4 = lam v0 / (2 pi sin pf),
    nu_sigma = 0, with the bare velocity c = sin(pf_bar).
    """
    if not v2pf > 0:
        raise DomainViolation(f"repulsive condition requires v2pf > 0, got {v2pf}")
    s = math.sin(pf_bar)
    if not s > 1e-9:
        raise DomainViolation(f"Fermi momentum {pf_bar} has no positive velocity")
    if abs(pf_bar - math.pi / 2) < 1e-9:
        raise DomainViolation("half filling (pf = pi/2) is excluded")
    return Anomalies(
        nu_rho=lam * (v0 - 0.5 * v2pf) / (2.0 * math.pi * s),
        nu_sigma=0.0,
        nu4=lam * v0 / (2.0 * math.pi * s),
    )


def effective_params_for_hubbard(lam: float, v0: float, v2pf: float,
                                 pf_bar: float, Z: float = 1.0) -> EffectiveParams:
    """Bare effective-model couplings matched to the lattice model.

    g_par = g_perp = 2 lam (v0 - v2pf/2), g4 = 2 lam v0, c = sin(pf_bar);
    anomaly_params of this returns exactly tune_to_hubbard's values.
    """
    g2_eff = 2.0 * lam * (v0 - 0.5 * v2pf)
    return EffectiveParams(
        g_par=g2_eff, g_perp=g2_eff, g4=2.0 * lam * v0, c=math.sin(pf_bar), Z=Z
    )
