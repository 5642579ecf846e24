"""Complex quadratic flow map g -> g - a_n g^2 and its closed-form approximant.

The map is the universal model for a marginally irrelevant coupling: with
slowly varying coefficients ``a_n = a + sigma_n`` the iterates track

    g_tilde_n = g0 / (1 + g0 * n * A_n),    A_n = (1/n) sum_{k<n} a_k

with an error bounded by ``|g_tilde_n|^{3/2}``, and stay inside an enlarged
sector of the complex plane whenever the start value lies in a sector
``|z| < eps``, ``|Arg z| < pi - delta``.  This module provides the map, the
approximant, sector-membership predicates, a trace runner that records both
sequences, and an ensemble runner that tracks the bound margins for a batch
of flows (used by the property suite).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import (
    DegenerateDenominator,
    Divergence,
    DomainViolation,
    EmptyInput,
    PerturbationBoundViolated,
)

DENOM_TOL = 1e-12

SigmaLike = Union[None, Sequence[complex], np.ndarray, Callable[[int], complex]]


@dataclass(frozen=True)
class SectorDomain:
    """Sector ``{z: |z| < epsilon, |Arg z| < pi - delta}`` of the complex plane.

    ``Arg`` is the principal argument in (-pi, pi], with Arg(0) taken as 0 so
    the origin belongs to every sector.
    """

    epsilon: float
    delta: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise DomainViolation(f"sector radius must be positive, got {self.epsilon}")
        if not 0 < self.delta < math.pi / 2:
            raise DomainViolation(f"sector margin must lie in (0, pi/2), got {self.delta}")

    def enlarged_tilde(self) -> "SectorDomain":
        """Containment sector for the approximant: radius 2*eps/sin(delta), margin delta/2."""
        return SectorDomain(2 * self.epsilon / math.sin(self.delta), self.delta / 2)

    def enlarged(self) -> "SectorDomain":
        """Containment sector for the iterates: radius 3*eps/sin(delta), margin delta/4."""
        return SectorDomain(3 * self.epsilon / math.sin(self.delta), self.delta / 4)


@dataclass(frozen=True)
class FlowSchedule:
    """Coefficient schedule ``a_n = a + sigma_n`` with ``|sigma_n| <= c0*|g0|``.

    ``sigma`` may be None (constant schedule), a sequence, or a callable
    ``n -> sigma_n``.  The admissibility bound is checked against the ``g0``
    the schedule is eventually used with.
    """

    a: float
    sigma: SigmaLike = None
    c0: float = 0.0

    def __post_init__(self):
        if not self.a > 0:
            raise DomainViolation(f"leading coefficient must be positive, got {self.a}")
        if self.c0 < 0:
            raise DomainViolation(f"perturbation bound constant must be >= 0, got {self.c0}")

    def coefficients(self, n_steps: int, g0: complex) -> np.ndarray:
        """Materialize ``a_0 .. a_{n_steps-1}``, enforcing the sigma bound."""
        if self.sigma is None:
            return np.full(n_steps, self.a, dtype=complex)
        if callable(self.sigma):
            sig = np.array([self.sigma(n) for n in range(n_steps)], dtype=complex)
        else:
            sig = np.asarray(self.sigma, dtype=complex)
            if len(sig) < n_steps:
                raise DomainViolation(
                    f"schedule supplies {len(sig)} perturbations, {n_steps} needed"
                )
            sig = sig[:n_steps]
        bound = self.c0 * abs(g0)
        worst = np.abs(sig).max(initial=0.0)
        if worst > bound + 1e-15 * max(1.0, bound):
            raise PerturbationBoundViolated(
                f"max |sigma_n| = {worst:.3e} exceeds c0*|g0| = {bound:.3e}"
            )
        return self.a + sig


@dataclass(frozen=True)
class G1Trace:
    """Iterates ``g_n``, approximants ``g_tilde_n`` and averages ``A_n``."""

    g: np.ndarray
    g_tilde: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        for arr in (self.g, self.g_tilde, self.A):
            arr.setflags(write=False)
        if not (len(self.g) == len(self.g_tilde) == len(self.A)):
            raise DomainViolation("trace arrays must have equal length")

    def __len__(self):
        return len(self.g)


def step_g1(g: complex, a_n: complex) -> complex:
    """One step of the quadratic map: returns ``g - a_n * g**2``."""
    return g - a_n * g * g


def tilde_g(g0: complex, A_n: complex, n: int, tol: float = DENOM_TOL) -> complex:
    """Closed-form approximant ``g0 / (1 + g0 * n * A_n)``.

    Raises DegenerateDenominator when ``|1 + g0*n*A_n| <= tol``, which signals
    that the approximant left its validity regime.
    """
    if n < 0:
        raise DomainViolation(f"step index must be >= 0, got {n}")
    denom = 1.0 + g0 * n * A_n
    if abs(denom) <= tol:
        raise DegenerateDenominator(
            f"|1 + g0*n*A_n| = {abs(denom):.3e} <= {tol:.1e} at n = {n}"
        )
    return g0 / denom


def in_sector(z: complex, domain: SectorDomain) -> bool:
    """True iff ``|z| < epsilon`` and ``|Arg z| < pi - delta`` (Arg(0) := 0)."""
    if abs(z) >= domain.epsilon:
        return False
    if z == 0:
        return True
    return abs(cmath.phase(z)) < math.pi - domain.delta


def average_coefficients(a_seq: Sequence[complex]) -> np.ndarray:
    """Running means ``A_n = (1/n) sum_{k<n} a_k`` for n = 1 .. len(a_seq)."""
    a = np.asarray(a_seq, dtype=complex)
    if a.size == 0:
        raise EmptyInput("average_coefficients needs at least one coefficient")
    return np.cumsum(a) / np.arange(1, a.size + 1)


def run_g1_flow(
    g0: complex,
    schedule: FlowSchedule,
    n_steps: int,
    domain: Optional[SectorDomain] = None,
    escape_radius: Optional[float] = None,
) -> G1Trace:
    """Run the quadratic map for ``n_steps`` steps, recording g, g_tilde, A.

    When a ``domain`` is given the escape radius defaults to ten times the
    enlarged-sector radius (the iterates are guaranteed to stay inside the
    enlarged sector when the start value is admissible, so crossing that
    radius means the preconditions failed).  Raises Divergence on escape and
    DegenerateDenominator if the approximant denominator collapses.
    """
    if n_steps < 1:
        raise DomainViolation(f"n_steps must be >= 1, got {n_steps}")
    if escape_radius is None:
        escape_radius = 10.0 * domain.enlarged().epsilon if domain is not None else 0.0

    a_seq = schedule.coefficients(n_steps, g0)
    g = np.empty(n_steps + 1, dtype=complex)
    gt = np.empty(n_steps + 1, dtype=complex)
    A = np.empty(n_steps + 1, dtype=complex)
    status, min_denom = _kernels.g1_flow(complex(g0), a_seq, float(escape_radius), g, gt, A)
    if status >= 0:
        raise Divergence(
            f"|g_n| exceeded escape radius {escape_radius:.3e} at step {status}"
        )
    if min_denom <= DENOM_TOL:
        raise DegenerateDenominator(
            f"approximant denominator reached |1+g0*sum a| = {min_denom:.3e}"
        )
    return G1Trace(g=g, g_tilde=gt, A=A)


@dataclass(frozen=True)
class EnsembleBounds:
    """Per-sample running maxima from an ensemble of quadratic-map flows.

    ``deviation_margin`` is ``max_n (|g_n - g_tilde_n| - |g_tilde_n|^{3/2})``;
    it must be <= 0 for the approximant bound to hold.  The remaining arrays
    are maxima of ``|g|``, ``|Arg g|``, ``|g_tilde|``, ``|Arg g_tilde|``,
    to be compared against the enlarged sectors of ``domain``.
    """

    domain: SectorDomain
    deviation_margin: np.ndarray
    max_abs_g: np.ndarray
    max_arg_g: np.ndarray
    max_abs_gt: np.ndarray
    max_arg_gt: np.ndarray

    def bound_holds(self) -> bool:
        return bool(np.all(self.deviation_margin <= 0.0))

    def iterates_contained(self) -> bool:
        enl = self.domain.enlarged()
        return bool(
            np.all(self.max_abs_g < enl.epsilon)
            and np.all(self.max_arg_g < math.pi - enl.delta)
        )

    def approximants_contained(self) -> bool:
        enl = self.domain.enlarged_tilde()
        return bool(
            np.all(self.max_abs_gt < enl.epsilon)
            and np.all(self.max_arg_gt < math.pi - enl.delta)
        )


def sample_sector(domain: SectorDomain, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` points uniformly (by area) from the sector domain."""
    r = domain.epsilon * np.sqrt(rng.uniform(0.0, 1.0, n))
    th = rng.uniform(-(math.pi - domain.delta), math.pi - domain.delta, n)
    return r * np.exp(1j * th)


def run_g1_ensemble(
    g0s: np.ndarray,
    a: float,
    c0: float,
    n_steps: int,
    domain: SectorDomain,
    rng: np.random.Generator,
    chunk: int = 2048,
) -> EnsembleBounds:
    """Run a batch of flows with random admissible perturbation schedules.

    Each sample gets an independent sigma sequence drawn uniformly from the
    disk of radius ``c0*|g0|``.  Sigma blocks are generated chunk by chunk
    from ``rng`` so the stream is identical across kernel backends.
    """
    g0s = np.asarray(g0s, dtype=complex)
    bad = [z for z in g0s if not in_sector(z, domain)]
    if bad:
        raise DomainViolation(f"{len(bad)} start values outside the sector domain")
    B = g0s.size
    g = g0s.copy()
    suma = np.zeros(B, dtype=complex)
    margins = np.zeros((5, B), dtype=float)
    margins[0].fill(-np.inf)
    radius = c0 * np.abs(g0s)
    done = 0
    while done < n_steps:
        m = min(chunk, n_steps - done)
        mod = radius * np.sqrt(rng.uniform(0.0, 1.0, (m, B)))
        ph = rng.uniform(0.0, 2.0 * math.pi, (m, B))
        sigma = mod * np.exp(1j * ph)
        _kernels.ensemble_chunk(g, suma, g0s, sigma, float(a), margins)
        done += m
    return EnsembleBounds(
        domain=domain,
        deviation_margin=margins[0].copy(),
        max_abs_g=margins[1].copy(),
        max_arg_g=margins[2].copy(),
        max_abs_gt=margins[3].copy(),
        max_arg_gt=margins[4].copy(),
    )
