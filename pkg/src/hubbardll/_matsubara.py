"""Exact truncated Matsubara sums via digamma functions.

Fermionic frequencies are k0 = w (n + 1/2), w = 2 pi / beta.  All sums over
the sharp symmetric window |k0| <= Lambda (N frequencies per side) reduce to
differences of digamma values, which costs O(1) per energy regardless of the
cutoff, so frequency cutoffs up to gamma^M with M in the hundreds are exact
to double precision.  Degenerate denominators (equal energies at zero
transfer) switch to polygamma via mpmath.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import digamma

DEG_TOL = 1e-12
_N_CAP = 1e18  # beyond this the window edges are below double precision


def frequency_spacing(beta: float) -> float:
    return 2.0 * math.pi / beta


def window_half_count(M: int, beta: float, gamma: float):
    """Number of positive Matsubara frequencies with k0 <= gamma^M.

    Returns an int when it fits; a float (capped at 1e18) for very large M,
    where the fractional part is irrelevant.
    """
    w = frequency_spacing(beta)
    log_lam = M * math.log(gamma)
    if log_lam > 700.0:
        return _N_CAP
    n = math.floor(gamma**M / w + 0.5)
    if n < 1:
        raise ValueError(f"cutoff gamma^{M} leaves no Matsubara frequency at beta={beta}")
    return min(n, _N_CAP)


def single_window_sum(eps, shift_m: int, N, w: float):
    """sum over the window of 1/(-i(k0 + w*shift_m) + eps); eps array-like."""
    z = 1j * np.asarray(eps, dtype=complex) / w
    pos = (1j / w) * (digamma(0.5 + z + shift_m + N) - digamma(0.5 + z + shift_m))
    neg = (-1j / w) * (digamma(0.5 - z - shift_m + N) - digamma(0.5 - z - shift_m))
    return pos + neg


def _pair_degenerate(e1_vals, N, w):
    import mpmath

    out = np.empty(len(e1_vals), dtype=complex)
    for i, e1 in enumerate(e1_vals):
        z = 1j * complex(e1) / w
        t = lambda x: complex(mpmath.psi(1, x))
        pos = -(1.0 / w**2) * (t(0.5 + z) - t(0.5 + z + N))
        neg = -(1.0 / w**2) * (t(0.5 - z) - t(0.5 - z + N))
        out[i] = pos + neg
    return out


def pair_window_sum(e1, e2, m_transfer: int, N, w: float):
    """sum over the window of 1/[(-i k0 + e1)(-i (k0 + w*m_transfer) + e2)].

    Partial fractions with the exact digamma window sums; the degenerate
    case (zero transfer and equal energies) uses trigamma.
    """
    e1 = np.atleast_1d(np.asarray(e1, dtype=float))
    e2 = np.atleast_1d(np.asarray(e2, dtype=float))
    delta = -1j * w * m_transfer + (e2 - e1)
    out = np.empty(np.broadcast(e1, e2).shape, dtype=complex)
    deg = np.abs(delta) < DEG_TOL
    nd = ~deg
    if nd.any():
        out[nd] = (
            single_window_sum(e1[nd], 0, N, w)
            - single_window_sum(e2[nd], m_transfer, N, w)
        ) / delta[nd]
    if deg.any():
        out[deg] = _pair_degenerate(e1[deg], N, w)
    return out


def fermi_function(eps, beta: float):
    """1/(1 + exp(beta*eps)), overflow-safe."""
    x = beta * np.asarray(eps, dtype=float)
    return np.exp(-np.logaddexp(0.0, x))


def pair_sum_infinite(e1, e2, m_transfer: int, beta: float):
    """Full (untruncated) pair sum divided by nothing: sum over all k0.

    Equals beta * (f(e1) - f(e2)) / (i p0 + e1 - e2) with the degenerate
    limit -beta^2 f'(e1) handled explicitly.
    """
    e1 = np.atleast_1d(np.asarray(e1, dtype=float))
    e2 = np.atleast_1d(np.asarray(e2, dtype=float))
    w = 0.0 + 1j * frequency_spacing(beta) * m_transfer
    delta = w + (e1 - e2)
    out = np.empty(np.broadcast(e1, e2).shape, dtype=complex)
    deg = np.abs(delta) < DEG_TOL
    nd = ~deg
    f1, f2 = fermi_function(e1, beta), fermi_function(e2, beta)
    out[nd] = beta * (f1[nd] - f2[nd]) / delta[nd]
    if deg.any():
        # -beta * f'(e) = beta^2 f (1 - f), with the sign of d/de folded in
        f = f1[deg]
        out[deg] = -(beta**2) * f * (1.0 - f)
    return out


def fermi_time_kernel(eps, t, beta: float):
    """(1/beta) sum over all k0 of e^{-i k0 t} / (-i k0 + eps).

    Piecewise in t: e^{-eps t}(1 - n_F) on (0, beta), -e^{-eps t} n_F on
    (-beta, 0), the branch average at t = 0.  Overflow-safe for any sign of
    eps; |values| <= 1 throughout.
    """
    eps = np.asarray(eps, dtype=float)
    t = float(t)
    if t >= beta or t <= -beta:
        raise ValueError(f"time {t} outside the principal interval (-beta, beta)")
    x = beta * eps
    softplus = np.logaddexp(0.0, x)          # log(1 + e^{beta eps})
    softplus_m = np.logaddexp(0.0, -x)       # log(1 + e^{-beta eps})
    if t > 0.0:
        return np.exp(-eps * t - softplus_m)
    if t < 0.0:
        return -np.exp(-eps * t - softplus)
    return 0.5 - np.exp(-softplus)
