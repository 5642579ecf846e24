"""Large-distance asymptotics of the response functions and the two-point function.

All forms are leading asymptotics with the (bounded, non-universal)
remainder functions set to zero, so tests built on them compare ratios,
exponents or zero-coupling limits, never absolute values at moderate |x|.

Conventions:

* x = (x0, x1) with x0 imaginary time; the rescaled point is
  x_tilde = (x1, v_F x0) and |x_tilde|^2 = x1^2 + v_F^2 x0^2.
* The oscillation wavenumber is 2 p_F with p_F taken at leading order
  (the O(lambda) Fermi-momentum shift has no explicit coefficient).
* The multiplicative logarithm is L(x) = 1 + b lam v(2p_F) log|x| with
  b = 2/(pi sin p_F); its channel powers are the universal constants
  zeta_bar = (0, -3/2, 1/2, -3/2, 1/2) for (z, C, S, SC, TC).
* The two-point envelope S0(x) = (v_F x0 cos(p_F x1) - x1 sin(p_F x1)) /
  |x_tilde| carries the Fermi-point oscillation, and the returned value is
  normalized with 1/pi so the zero-coupling limit equals the exact free
  asymptote  sum_w e^{-i w p_F x1} / (2 pi (v_F x0 + i w x1)).

Every exponent used here is taken verbatim from the effective-model
solution for the same inputs (single source of truth); build_context wires
that through.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .effective_model import ZETA_BAR, exponent_set, tune_to_hubbard
from .errors import DomainViolation, OriginSingularity, TooClose
from .hubbard_rg import ModelInputs

_SQRT = np.lib.scimath.sqrt


@dataclass(frozen=True)
class AsymptoticContext:
    """Everything the asymptotic forms need, derived once per model point."""

    lam: float
    pf: float
    vf: float
    b: float
    v2pf: float
    K: float
    eta: float
    v_rho: float
    v_sigma: float
    two_x: Dict[str, float]
    zeta_bar: Dict[str, float] = field(default_factory=lambda: dict(ZETA_BAR))
    zeta_tilde_sc: float = 0.0


def build_context(inputs: ModelInputs, zeta_tilde_sc: float = 0.0) -> AsymptoticContext:
    """Derive the asymptotic context from model inputs via the effective model."""
    lam = complex(inputs.lam)
    if lam.imag != 0.0:
        raise DomainViolation("asymptotic forms are stated for real coupling")
    anom = tune_to_hubbard(lam.real, inputs.v0, inputs.v2pf, inputs.p_f_bar)
    es = exponent_set(anom)
    return AsymptoticContext(
        lam=lam.real,
        pf=inputs.p_f_bar,
        vf=inputs.v_f,
        b=2.0 / (math.pi * math.sin(inputs.p_f_bar)),
        v2pf=inputs.v2pf,
        K=es.K,
        eta=es.eta_rho,
        v_rho=es.vel_rho.v,
        v_sigma=es.vel_sigma.v,
        two_x={
            "C": es.two_X["2C"],
            "S": es.two_X["2S"],
            "SC": es.two_X["2SC"],
            "TC": es.two_X["2TC"],
            "SC_tilde": es.two_X["1SC"],
        },
        zeta_tilde_sc=zeta_tilde_sc,
    )


def _norms(x, ctx):
    x0, x1 = float(x[0]), float(x[1])
    r = math.hypot(x0, x1)
    rt = math.hypot(ctx.vf * x0, x1)
    return x0, x1, r, rt


def log_factor(x, ctx: AsymptoticContext) -> float:
    """Multiplicative log L(x) = 1 + b lam v(2p_F) log|x|; needs |x| >= 1."""
    _, _, r, _ = _norms(x, ctx)
    if r < 1.0:
        raise TooClose(f"|x| = {r:.3g} < 1: asymptotic log factor invalid")
    return 1.0 + ctx.b * ctx.lam * ctx.v2pf * math.log(r)


def omega_asymptotic(alpha: str, x, ctx: AsymptoticContext) -> float:
    """Leading large-|x| response function for channel alpha in {C, S, SC, TC}.

    Charge and spin keep a non-oscillating part with the free exponent 2 and
    no log factor, plus a cos(2 p_F x1) part with exponent 2X_alpha and log
    power zeta_bar_alpha.  Singlet Cooper has the mirrored structure;
    triplet Cooper is a single non-oscillating term.
    """
    if alpha not in ("C", "S", "SC", "TC"):
        raise DomainViolation(f"channel must be one of C, S, SC, TC, got {alpha!r}")
    x0, x1, r, rt = _norms(x, ctx)
    if r < 1.0:
        raise TooClose(f"|x| = {r:.3g} < 1: asymptotic form invalid")
    L = log_factor(x, ctx)
    omega0 = ((ctx.vf * x0) ** 2 - x1 * x1) / ((ctx.vf * x0) ** 2 + x1 * x1)
    osc = math.cos(2.0 * ctx.pf * x1)
    pi2 = math.pi**2
    if alpha in ("C", "S"):
        return (
            omega0 / (pi2 * rt * rt)
            + osc * L ** ctx.zeta_bar[alpha] / (pi2 * rt ** ctx.two_x[alpha])
        )
    if alpha == "SC":
        return (
            -omega0 * osc * L**ctx.zeta_tilde_sc / (pi2 * rt ** ctx.two_x["SC_tilde"])
            - L ** ctx.zeta_bar["SC"] / (pi2 * rt ** ctx.two_x["SC"])
        )
    return -(ctx.vf**2) * L ** ctx.zeta_bar["TC"] / (pi2 * rt ** ctx.two_x["TC"])


def s2_asymptotic(x, ctx: AsymptoticContext) -> float:
    """Leading two-point asymptote S0(x) L^0 / (pi |x_tilde|^{1+eta}).

    The z-channel log power is exactly zero, so the log factor drops out;
    eta = (K + 1/K - 2)/4 is the anomalous dimension.
    """
    x0, x1, r, rt = _norms(x, ctx)
    if r < 1.0:
        raise TooClose(f"|x| = {r:.3g} < 1: asymptotic form invalid")
    L = log_factor(x, ctx)
    s0 = (ctx.vf * x0 * math.cos(ctx.pf * x1) - x1 * math.sin(ctx.pf * x1)) / rt
    return s0 * L ** ctx.zeta_bar["z"] / (math.pi * rt ** (1.0 + ctx.eta))


def spin_charge_two_point(x, ctx: AsymptoticContext, omega: int) -> complex:
    """Spin-charge separated two-point form with velocities v_rho != v_sigma.

    (1/2 pi v_F) [v_rho^2 x0^2 + (x1/v_F)^2]^{-eta/2}
      / sqrt(v_rho x0 + i w x1/v_F) / sqrt(v_sigma x0 + i w x1/v_F),

    principal square roots; the undetermined constant e^C is set to 1.
    """
    x0, x1 = float(x[0]), float(x[1])
    if x0 == 0.0 and x1 == 0.0:
        raise OriginSingularity("two-point form evaluated at the origin")
    if omega not in (1, -1):
        raise DomainViolation(f"omega must be +1 or -1, got {omega}")
    y = x1 / ctx.vf
    amp = (ctx.v_rho**2 * x0 * x0 + y * y) ** (-0.5 * ctx.eta)
    den = _SQRT(ctx.v_rho * x0 + 1j * omega * y) * _SQRT(ctx.v_sigma * x0 + 1j * omega * y)
    return amp / (2.0 * math.pi * ctx.vf * complex(den))
