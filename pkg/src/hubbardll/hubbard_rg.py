"""Truncated RG flow of the Hubbard running couplings (g1, g2, g4, delta, nu).

Scale index h runs 0, -1, -2, ... (gamma^h is the momentum scale).  The
truncated flow keeps exactly the leading quadratic terms,

    g1_{j-1} = g1_j - a_j g1_j^2
    g2_{j-1} = g2_j - (a/2) g1_j^2
    g4, delta constant
    nu_{j-1} = gamma nu_j + beta_nu(j)

with a = log(gamma)/(pi v_F) and a_j = a + sigma_j from a FlowSchedule.
Higher-order remainders are deliberately dropped; tests inject admissible
perturbations through the schedule and the beta_nu callback instead.

A useful exact identity of the truncated flow: summing the g1 recursion
telescopes, a_j-weighted, to  a * sum_j g1_j^2 = g1_0 - g1_{-inf}  for the
constant schedule, so the g2 limit is g2_0 - g1_0/2 exactly and the deep
tail of g2 below the last computed scale is g1/2 at that scale.  fixed_point
and g2_log_sum use this to correct for finite depth.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .errors import (
    Divergence,
    DomainViolation,
    InvalidGamma,
    InvalidVelocity,
    NoRoot,
    NotConverged,
    RangeError,
)
from .scale_flow import FlowSchedule, SectorDomain, in_sector

NU_ESCAPE_DEFAULT = 1e50


@dataclass(frozen=True)
class CouplingVector:
    """Running couplings at one scale."""

    g1: complex
    g2: complex
    g4: complex
    delta: complex
    nu: complex

    def __post_init__(self):
        for name in ("g1", "g2", "g4", "delta", "nu"):
            if not cmath.isfinite(complex(getattr(self, name))):
                raise DomainViolation(f"non-finite coupling component {name}")

    def is_real(self) -> bool:
        return all(
            complex(getattr(self, n)).imag == 0.0
            for n in ("g1", "g2", "g4", "delta", "nu")
        )


@dataclass(frozen=True)
class ModelInputs:
    """Model parameters: coupling strength, potential values, filling, scaler.

    ``v0`` and ``v2pf`` are the potential Fourier transform at momentum 0 and
    at twice the Fermi momentum; the repulsive regime requires v2pf > 0.
    ``mu`` fixes the free Fermi point via cos(p_F) = mu, excluding the empty,
    filled and half-filled band (p_F in {0, pi, pi/2}).
    """

    lam: complex
    v0: float
    v2pf: float
    mu: float
    gamma: float = 2.0

    def __post_init__(self):
        if not self.v2pf > 0:
            raise DomainViolation(f"repulsive condition requires v2pf > 0, got {self.v2pf}")
        if not abs(self.mu) < 1:
            raise DomainViolation(f"|mu| must be < 1, got {self.mu}")
        if abs(self.mu) < 1e-9:
            raise DomainViolation("mu = 0 is the excluded half-filled band")
        if not self.gamma > 1:
            raise InvalidGamma(f"scaling parameter must exceed 1, got {self.gamma}")

    @property
    def p_f_bar(self) -> float:
        return math.acos(self.mu)

    @property
    def v_f(self) -> float:
        return math.sin(self.p_f_bar)

    @property
    def a(self) -> float:
        return leading_coefficient(self.v_f, self.gamma)


@dataclass(frozen=True)
class HubbardFlowTrace:
    """Per-scale couplings for h = 0, -1, ..., h_min (index = -h)."""

    g1: np.ndarray
    g2: np.ndarray
    g4: np.ndarray
    delta: np.ndarray
    nu: np.ndarray
    a: float
    j0: int = 0

    def __post_init__(self):
        for arr in (self.g1, self.g2, self.g4, self.delta, self.nu):
            arr.setflags(write=False)

    @property
    def h_min(self) -> int:
        return -(len(self.g1) - 1)

    def coupling_at(self, h: int) -> CouplingVector:
        i = self.index_of(h)
        return CouplingVector(
            g1=complex(self.g1[i]), g2=complex(self.g2[i]), g4=complex(self.g4[i]),
            delta=complex(self.delta[i]), nu=complex(self.nu[i]),
        )

    def index_of(self, h: int) -> int:
        if not (self.h_min <= h <= 0):
            raise RangeError(f"scale {h} outside trace range [{self.h_min}, 0]")
        return -h

    def g2_deep_limit(self) -> complex:
        """Deep-scale g2 limit, tail-corrected by g1/2 at the last scale."""
        return complex(self.g2[-1]) - 0.5 * complex(self.g1[-1])


def leading_coefficient(v_f: float, gamma: float) -> float:
    """Quadratic-flow coefficient a = log(gamma) / (pi * v_F)."""
    if not v_f > 0:
        raise InvalidVelocity(f"Fermi velocity must be positive, got {v_f}")
    if not gamma > 1:
        raise InvalidGamma(f"scaling parameter must exceed 1, got {gamma}")
    return math.log(gamma) / (math.pi * v_f)


def init_couplings(inputs: ModelInputs) -> CouplingVector:
    """Leading-order scale-0 couplings from the microscopic potential.

    g1 = 2*lam*v(2p_F), g2 = g4 = 2*lam*v(0), delta = nu = 0.  Corrections of
    order lam^2 are dropped throughout the truncated flow.
    """
    lam = complex(inputs.lam)
    return CouplingVector(
        g1=2.0 * lam * inputs.v2pf,
        g2=2.0 * lam * inputs.v0,
        g4=2.0 * lam * inputs.v0,
        delta=0.0,
        nu=0.0,
    )


def _nu_sequence(nu0, gamma, depth, beta_nu, nu_escape, dtype):
    if beta_nu is None:
        if nu0 == 0:
            return np.zeros(depth + 1, dtype=dtype)
        # geometric growth nu_h = nu0 * gamma^{|h|}
        d_escape = (math.log(nu_escape) - math.log(abs(nu0))) / math.log(gamma)
        if depth > d_escape:
            raise Divergence(
                f"|nu_h| crosses the escape threshold {nu_escape:.1e} at scale "
                f"h = {-int(d_escape) - 1} (nu0 not tuned)"
            )
        return nu0 * gamma ** np.arange(depth + 1, dtype=float)
    nu = complex(nu0) if dtype == complex else float(np.real(nu0))
    out = np.empty(depth + 1, dtype=dtype)
    out[0] = nu
    for d in range(depth):
        nu = gamma * nu + beta_nu(-d)
        if abs(nu) > nu_escape:
            raise Divergence(
                f"|nu_h| = {abs(nu):.3e} exceeded {nu_escape:.1e} at scale h = {-d - 1}"
            )
        out[d + 1] = nu
    return out


def run_flow(
    v0: CouplingVector,
    inputs: ModelInputs,
    h_min: int,
    schedule: Optional[FlowSchedule] = None,
    beta_nu: Optional[Callable[[int], complex]] = None,
    domain: Optional[SectorDomain] = None,
    nu_escape: float = NU_ESCAPE_DEFAULT,
) -> HubbardFlowTrace:
    """Run the truncated flow from scale 0 down to ``h_min`` (inclusive).

    ``schedule`` perturbs the g1 line only (the g2 line keeps the constant
    coefficient a/2); it defaults to the constant schedule with a derived
    from ``inputs``.  When a ``domain`` is given, g1 must start inside it and
    the whole g1 trajectory is required to stay in the enlarged sector.
    """
    if h_min >= 0:
        raise DomainViolation(f"h_min must be negative, got {h_min}")
    if schedule is None:
        schedule = FlowSchedule(a=inputs.a)
    if domain is not None and not in_sector(complex(v0.g1), domain):
        raise DomainViolation(
            f"g1(0) = {complex(v0.g1):.6g} outside the sector domain "
            f"(epsilon={domain.epsilon:.3g}, delta={domain.delta:.3g})"
        )
    depth = -h_min
    a_seq = schedule.coefficients(depth, complex(v0.g1))
    real_path = v0.is_real() and np.all(a_seq.imag == 0.0)
    dtype = float if real_path else complex

    g1 = np.empty(depth + 1, dtype=dtype)
    g2 = np.empty(depth + 1, dtype=dtype)
    escape = 10.0 * domain.enlarged().epsilon if domain is not None else 0.0
    half_a = 0.5 * schedule.a
    if real_path:
        status = _kernels.hubbard_flow(
            float(v0.g1.real), float(v0.g2.real), a_seq.real.copy(), half_a,
            escape, g1, g2,
        )
    else:
        status = _kernels.hubbard_flow(
            complex(v0.g1), complex(v0.g2), a_seq, complex(half_a), escape, g1, g2,
        )
    if status >= 0:
        raise Divergence(f"g1 left the enlarged sector radius at scale h = {-status}")
    if domain is not None:
        enl = domain.enlarged()
        bad = np.abs(g1) >= enl.epsilon
        nz = g1 != 0
        bad |= nz & (np.abs(np.angle(g1)) >= math.pi - enl.delta)
        if bad.any():
            raise Divergence(
                f"g1 left the enlarged sector first at scale h = {-int(np.argmax(bad))}"
            )

    nu = _nu_sequence(v0.nu if dtype == complex else np.real(v0.nu),
                      inputs.gamma, depth, beta_nu, nu_escape, dtype)
    g4 = np.full(depth + 1, v0.g4 if dtype == complex else np.real(v0.g4), dtype=dtype)
    dl = np.full(depth + 1, v0.delta if dtype == complex else np.real(v0.delta), dtype=dtype)
    return HubbardFlowTrace(g1=g1, g2=g2, g4=g4, delta=dl, nu=nu, a=schedule.a, j0=0)


@dataclass(frozen=True)
class FixedPointResult:
    """Deep-scale limit of a flow plus the closed-form comparison values."""

    limit: CouplingVector
    g2_raw: complex          # g2 at the last computed scale, no tail correction
    g2_predicted: complex    # g2_0 - g1_0/2
    g4_predicted: complex    # g4_0


def fixed_point(
    trace: HubbardFlowTrace,
    inputs: ModelInputs,
    rel_tol: float = 0.01,
) -> FixedPointResult:
    """Read off the deep-scale limit vector from a sufficiently deep trace.

    Requires |g1(h_min)| < rel_tol * |g1(0)|; otherwise NotConverged.  The g2
    component of the limit uses the telescoped tail correction g1(h_min)/2,
    which is exact for the truncated flow with a constant schedule.
    """
    g1_0 = complex(trace.g1[0])
    g1_end = complex(trace.g1[-1])
    if abs(g1_0) > 0 and not abs(g1_end) < rel_tol * abs(g1_0):
        raise NotConverged(
            f"|g1(h_min)| / |g1(0)| = {abs(g1_end) / abs(g1_0):.3g} "
            f">= {rel_tol}; deepen the trace"
        )
    limit = CouplingVector(
        g1=g1_end,
        g2=trace.g2_deep_limit(),
        g4=complex(trace.g4[-1]),
        delta=complex(trace.delta[-1]),
        nu=complex(trace.nu[-1]),
    )
    return FixedPointResult(
        limit=limit,
        g2_raw=complex(trace.g2[-1]),
        g2_predicted=complex(trace.g2[0]) - 0.5 * g1_0,
        g4_predicted=complex(trace.g4[0]),
    )


def tune_nu(
    v0: CouplingVector,
    inputs: ModelInputs,
    beta_nu: Optional[Callable[[int], float]],
    h_min: int,
    theta: float = 0.5,
    k_bound: float = 10.0,
    max_expand: int = 60,
    max_bisect: int = 400,
) -> float:
    """Tune the chemical-potential counterterm nu_0 so the nu flow decays.

    The recursion nu_{j-1} = gamma*nu_j + beta_nu(j) has one expanding
    direction; bisection on nu(h_min) as a function of nu_0 finds the start
    value whose trajectory comes back to zero.  Success additionally requires
    the decay criterion |nu_h| <= k_bound * |lam| * gamma^{theta*h}; a forcing
    that does not decay has no such solution and raises NoRoot.

    The expanding direction amplifies double-precision rounding by
    gamma^{|h|}, so the decay bound is only enforced where it exceeds that
    noise floor; below the floor the trajectory is numerically
    indistinguishable from the exact decaying solution.

    With ``beta_nu`` None the fixed point is exact: returns 0.0.
    """
    if beta_nu is None:
        return 0.0
    if h_min >= 0:
        raise DomainViolation(f"h_min must be negative, got {h_min}")
    gamma = inputs.gamma
    depth = -h_min

    def trajectory(nu0):
        nu = nu0
        out = [nu]
        for d in range(depth):
            nu = gamma * nu + float(beta_nu(-d))
            if not math.isfinite(nu):
                break
            out.append(nu)
        return out

    def endpoint(nu0):
        t = trajectory(nu0)
        return t[-1] if len(t) == depth + 1 else math.copysign(math.inf, t[-1])

    scale = max(abs(complex(inputs.lam)), 1e-300)
    b = k_bound * scale
    lo = hi = None
    for _ in range(max_expand):
        if endpoint(-b) < 0.0 < endpoint(b):
            lo, hi = -b, b
            break
        b *= 2.0
    if lo is None:
        raise NoRoot("no sign change of nu(h_min) in the expanded bracket")
    for _ in range(max_bisect):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if endpoint(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    nu0 = 0.5 * (lo + hi)

    traj = np.abs(trajectory(nu0))
    depths = np.arange(len(traj))
    bound = k_bound * scale * gamma ** (-theta * depths)
    ref = max(abs(nu0), scale)
    noise_floor = 16.0 * np.finfo(float).eps * ref * gamma**depths
    checkable = bound > noise_floor
    if not np.all(traj[checkable] <= bound[checkable]):
        raise NoRoot(
            "tuned trajectory violates the decay criterion "
            f"|nu_h| <= {k_bound} * |lam| * gamma^({theta} h); "
            "the forcing has no decaying solution"
        )
    return float(nu0)


def _sum_range(trace: HubbardFlowTrace, h: int, j0: int):
    if not (h <= j0 <= 0):
        raise RangeError(f"need h <= j0 <= 0, got h={h}, j0={j0}")
    if h < trace.h_min:
        raise RangeError(f"scale {h} below trace depth {trace.h_min}")
    return trace.index_of(j0), trace.index_of(h)


def g1_log_sum(trace: HubbardFlowTrace, h: int, j0: int = 0):
    """Sum of g1 over scales [h, j0] and its log-resummation prediction.

    Returns ``(sum, prediction)`` with prediction
    ``log(1 + a g1(j0) (j0-h)) / a``.  The marginally irrelevant decay
    g1 ~ 1/(a|h|) makes the sum logarithmic in the depth.
    """
    i0, i1 = _sum_range(trace, h, j0)
    s = complex(trace.g1[i0:i1 + 1].sum())
    a = trace.a
    pred = cmath.log(1.0 + a * complex(trace.g1[i0]) * (j0 - h)) / a
    return s, pred


def g2_log_sum(trace: HubbardFlowTrace, h: int, j0: int = 0, g2_inf=None):
    """Sum of (g2 - g2_inf) over [h, j0] against the half-weight log form.

    ``g2_inf`` defaults to the tail-corrected deep limit of the trace; pass
    an explicit value to probe other conventions.
    """
    i0, i1 = _sum_range(trace, h, j0)
    if g2_inf is None:
        g2_inf = trace.g2_deep_limit()
    s = complex((trace.g2[i0:i1 + 1] - g2_inf).sum())
    a = trace.a
    pred = cmath.log(1.0 + a * complex(trace.g1[i0]) * (j0 - h)) / (2.0 * a)
    return s, pred
