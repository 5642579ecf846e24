"""Flow of the renormalization constants and their log-correction exponents.

Each density channel carries a constant Zhat_h with Zhat_0 = 1 and a
per-scale multiplier built from the running couplings:

    2C:   1 - a g1 + (a/2)(g2 - g2_inf)
    2S:   1 + (a/2)(g2 - g2_inf)
    2SC:  1 - (a/2) g1 - (a/2)(g2 - g2_inf)
    2TC:  1 + (a/2) g1 - (a/2)(g2 - g2_inf)
    z, 1C, 1S, 1SC: 1   (their corrections are second order and dropped)

Because g1 decays like 1/(a|h|), log Zhat_h grows like a multiple of
log(1 + a g1_0 |h|); the coefficient

    q_h = log Zhat_h / log(1 + a g1_0 |h|)

approaches the universal values -3/4, +1/4, -3/4, +1/4 for the four
nontrivial channels.  The remaining power-law part of each constant is the
anomalous exponent eta_t, linear in the deep g2 limit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .errors import ComputationError, DomainViolation, InvalidVelocity, UndefinedAtScale
from .hubbard_rg import CouplingVector, HubbardFlowTrace

CHANNELS = ("z", "1C", "1S", "1SC", "2C", "2S", "2SC", "2TC")

_CANON = {c.lower(): c for c in CHANNELS}
_CANON.update({f"({c[0]},{c[1:].lower()})": c for c in CHANNELS if c != "z"})


def canonical_channel(tag: str) -> str:
    """Normalize a channel tag; '(2,C)' and '2c' both map to '2C'."""
    key = str(tag).replace(" ", "").lower()
    if key in _CANON:
        return _CANON[key]
    raise DomainViolation(
        f"unknown renormalization channel {tag!r}; valid: {', '.join(CHANNELS)} "
        "(the 1TC channel does not exist: the local triplet-Cooper operator "
        "vanishes by anticommutation)"
    )


def _factor(channel: str, g1, dg2, a):
    if channel == "2C":
        return 1.0 - a * g1 + 0.5 * a * dg2
    if channel == "2S":
        return 1.0 + 0.5 * a * dg2
    if channel == "2SC":
        return 1.0 - 0.5 * a * g1 - 0.5 * a * dg2
    if channel == "2TC":
        return 1.0 + 0.5 * a * g1 - 0.5 * a * dg2
    return 1.0 if np.isscalar(g1) else np.ones_like(g1)


def step_renorm(channel: str, zhat: float, couplings: CouplingVector,
                g2_inf: complex, a: float) -> float:
    """One scale step of a channel's renormalization constant."""
    tag = canonical_channel(channel)
    g1 = couplings.g1
    dg2 = couplings.g2 - g2_inf
    return zhat * _factor(tag, g1, dg2, a)


@dataclass(frozen=True)
class RenormTrace:
    """Per-scale Zhat for every channel, alongside the data needed for q."""

    zhat: Dict[str, np.ndarray]
    a: float
    g1_0: complex
    g2_inf: complex

    def __post_init__(self):
        for arr in self.zhat.values():
            arr.setflags(write=False)

    @property
    def depth(self) -> int:
        return len(next(iter(self.zhat.values()))) - 1


def run_renorm(trace: HubbardFlowTrace, g2_inf: Optional[complex] = None) -> RenormTrace:
    """Accumulate Zhat_h for all channels along a coupling trace.

    ``g2_inf`` defaults to the trace's tail-corrected deep limit.  The
    accumulation is done as a cumulative sum of log factors, which is stable
    over millions of scales.
    """
    if g2_inf is None:
        g2_inf = trace.g2_deep_limit()
    g1 = trace.g1[:-1]
    dg2 = trace.g2[:-1] - g2_inf
    a = trace.a
    out = {}
    for tag in CHANNELS:
        if tag in ("z", "1C", "1S", "1SC"):
            out[tag] = np.ones(len(trace.g1), dtype=trace.g1.dtype)
            continue
        fac = _factor(tag, g1, dg2, a)
        if np.isrealobj(fac) and np.any(fac <= 0.0):
            raise ComputationError(
                f"nonpositive renormalization factor in channel {tag}; "
                "couplings outside the perturbative regime"
            )
        logs = np.log(fac)
        z = np.empty(len(trace.g1), dtype=logs.dtype)
        z[0] = 0.0
        np.cumsum(logs, out=z[1:])
        z = np.exp(z)
        out[tag] = z
    return RenormTrace(zhat=out, a=a, g1_0=complex(trace.g1[0]), g2_inf=complex(g2_inf))


def q_coefficient(channel: str, rtrace: RenormTrace, h: int,
                  g1_0: Optional[complex] = None, a: Optional[float] = None) -> complex:
    """Log-correction coefficient q_h = log Zhat_h / log(1 + a g1_0 |h|).

    ``g1_0`` and ``a`` default to the values stored in the trace.  Raises
    UndefinedAtScale where the denominator vanishes (h = 0, or g1_0 = 0).
    """
    tag = canonical_channel(channel)
    if not (-rtrace.depth <= h <= 0):
        raise DomainViolation(f"scale {h} outside renorm trace depth {-rtrace.depth}")
    if g1_0 is None:
        g1_0 = rtrace.g1_0
    if a is None:
        a = rtrace.a
    den = cmath.log(1.0 + a * g1_0 * abs(h))
    if abs(den) < 1e-300:
        raise UndefinedAtScale(f"log(1 + a g1_0 |h|) vanishes at h = {h}")
    num = cmath.log(complex(rtrace.zhat[tag][-h]))
    val = num / den
    return val.real if abs(val.imag) == 0.0 else val


def anomalous_exponent(channel: str, g2_inf: complex, v_f: float) -> complex:
    """Leading-order anomalous exponent of a channel's renormalization constant.

    +g2_inf/(2 pi v_F) for 2C and 2S, the opposite sign for 2SC and 2TC, and
    0 (second order) for z and the small-momentum-transfer channels.
    """
    if not v_f > 0:
        raise InvalidVelocity(f"Fermi velocity must be positive, got {v_f}")
    tag = canonical_channel(channel)
    base = g2_inf / (2.0 * math.pi * v_f)
    if tag in ("2C", "2S"):
        return base
    if tag in ("2SC", "2TC"):
        return -base
    return 0.0 * base
