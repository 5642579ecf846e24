"""Susceptibility, Drude weight and the universal relation v^2 = D/kappa.

Keeping the back-scattering coupling in the effective description (rather
than tuning it away) gives a second, "barred" parameter set whose Ward
identities fix the small-momentum charge and current responses:

    kappa = K_bar / (pi c_bar v_rho_bar),   D = K_bar c_bar v_rho_bar / pi,

so the charge velocity v = c_bar * v_rho_bar obeys v^2 = D/kappa identically.
K_bar is built from the barred anomalies by the same algebra as the
Luttinger parameter K; the two agree at first order in the coupling but are
not proven equal beyond it, so both are always reported separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from .errors import DomainViolation, ZeroMomentum
from .effective_model import K_pair, K_sqrt_form, channel_velocities

_IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class BarredParams:
    """Effective couplings with back-scattering kept; c_bar = v_F (1 + delta_bar)."""

    g1_bar: float
    g2_bar: float
    g4_bar: float
    delta_bar: float
    c_bar: float

    def __post_init__(self):
        if not self.c_bar > 0:
            raise DomainViolation(f"velocity must be positive, got {self.c_bar}")


@dataclass(frozen=True)
class ObservableSet:
    K_bar: float
    v_rho_bar: float
    kappa: float
    drude: float
    v: float


def barred_couplings(lam: float, v0: float, v2pf: float, v_f: float,
                     delta_bar: float = 0.0) -> BarredParams:
    """Leading-order barred couplings from the microscopic potential.

    g1_bar = 2 lam v(2p_F), g2_bar = g4_bar = 2 lam v(0); delta_bar is zero
    at leading order but accepted as an input for sensitivity studies.
    """
    if not v2pf > 0:
        raise DomainViolation(f"repulsive condition requires v2pf > 0, got {v2pf}")
    if not v_f > 0:
        raise DomainViolation(f"Fermi velocity must be positive, got {v_f}")
    return BarredParams(
        g1_bar=2.0 * lam * v2pf,
        g2_bar=2.0 * lam * v0,
        g4_bar=2.0 * lam * v0,
        delta_bar=delta_bar,
        c_bar=v_f * (1.0 + delta_bar),
    )


def barred_anomalies(params: BarredParams) -> Tuple[float, float]:
    """(nu_rho_bar, nu4_bar) = ((g2 - g1/2)/(4 pi c), g4/(4 pi c))."""
    c = params.c_bar
    return (
        (params.g2_bar - 0.5 * params.g1_bar) / (4.0 * math.pi * c),
        params.g4_bar / (4.0 * math.pi * c),
    )


def K_bar(nu_rho_bar: float, nu4_bar: float) -> float:
    """Renormalized response amplitude, same algebra as the Luttinger K."""
    return K_pair(nu_rho_bar, nu4_bar)[0]


def K_bar_sqrt_form(nu_rho_bar: float, nu4_bar: float) -> float:
    return K_sqrt_form(nu_rho_bar, nu4_bar)


def susceptibility_drude(K_bar_val: float, c_bar: float, v_rho_bar: float) -> ObservableSet:
    """kappa, D and the charge velocity; asserts v^2 = D/kappa exactly.

    kappa = K_bar/(pi c v_rho), D = K_bar c v_rho / pi, v = c v_rho.  The
    identities kappa*D = (K_bar/pi)^2 and v^2 = D/kappa hold by construction
    and are verified to 1e-12 before returning.
    """
    if not (K_bar_val > 0 and c_bar > 0 and v_rho_bar > 0):
        raise DomainViolation("K_bar, c_bar and v_rho_bar must all be positive")
    v = c_bar * v_rho_bar
    kappa = K_bar_val / (math.pi * v)
    drude = K_bar_val * v / math.pi
    if abs(kappa * drude - (K_bar_val / math.pi) ** 2) > _IDENTITY_TOL:
        raise DomainViolation("kappa * D != (K_bar/pi)^2 beyond tolerance")
    if abs(v * v - drude / kappa) > _IDENTITY_TOL * max(1.0, v * v):
        raise DomainViolation("v^2 != D/kappa beyond tolerance")
    return ObservableSet(K_bar=K_bar_val, v_rho_bar=v_rho_bar, kappa=kappa,
                         drude=drude, v=v)


def observables_for_hubbard(lam: float, v0: float, v2pf: float, mu: float,
                            delta_bar: float = 0.0) -> ObservableSet:
    """Full pipeline from microscopic parameters to the observable set."""
    pf = math.acos(mu)
    v_f = math.sin(pf)
    p = barred_couplings(lam, v0, v2pf, v_f, delta_bar)
    nr, n4 = barred_anomalies(p)
    kb = K_bar(nr, n4)
    vel = channel_velocities(nr, n4)
    return susceptibility_drude(kb, p.c_bar, vel.v)


def omega_c_hat(p, obs: ObservableSet) -> float:
    """Leading small-momentum charge response (K_bar/pi v) v^2 p1^2/(p0^2 + v^2 p1^2).

    ``p = (p1, p0)`` with p1 the space and p0 the frequency component; the
    remainder A(p) of the full response is dropped.  At (p1, 0) this is the
    susceptibility; at (0, p0) it vanishes.
    """
    p1, p0 = float(p[0]), float(p[1])
    if p1 == 0.0 and p0 == 0.0:
        raise ZeroMomentum("small-momentum response undefined at p = 0")
    v = obs.v
    return (obs.K_bar / (math.pi * v)) * (v * v * p1 * p1) / (p0 * p0 + v * v * p1 * p1)


def drude_hat(p, obs: ObservableSet) -> float:
    """Leading small-momentum current response (v K_bar/pi) p0^2/(p0^2 + v^2 p1^2)."""
    p1, p0 = float(p[0]), float(p[1])
    if p1 == 0.0 and p0 == 0.0:
        raise ZeroMomentum("small-momentum response undefined at p = 0")
    v = obs.v
    return (v * obs.K_bar / math.pi) * (p0 * p0) / (p0 * p0 + v * v * p1 * p1)
