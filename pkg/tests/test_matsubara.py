"""Brute-force validation of the digamma window sums."""

import math

import numpy as np
import pytest

from hubbardll import _matsubara as mats

BETA = 37.0
W = 2 * math.pi / BETA
N = 400


def brute_k0():
    n = np.arange(-N, N)
    return W * (n + 0.5)


def test_single_window_sum_against_brute():
    k0 = brute_k0()
    rng = np.random.default_rng(0)
    for _ in range(6):
        eps = rng.uniform(-1.5, 1.5)
        mb = int(rng.integers(-3, 4))
        brute = np.sum(1.0 / (-1j * (k0 + W * mb) + eps))
        got = mats.single_window_sum(eps, mb, N, W)
        assert abs(got - brute) < 1e-12


def test_pair_window_sum_against_brute():
    k0 = brute_k0()
    rng = np.random.default_rng(1)
    for _ in range(6):
        e1, e2 = rng.uniform(-1.5, 1.5, 2)
        mb = int(rng.integers(-3, 4))
        brute = np.sum(1.0 / ((-1j * k0 + e1) * (-1j * (k0 + W * mb) + e2)))
        got = mats.pair_window_sum(e1, e2, mb, N, W)[0]
        assert abs(got - brute) < 1e-12


def test_pair_window_sum_degenerate():
    k0 = brute_k0()
    e = 0.7
    brute = np.sum(1.0 / (-1j * k0 + e) ** 2)
    got = mats.pair_window_sum(e, e, 0, N, W)[0]
    assert abs(got - brute) < 1e-12


def test_pair_window_sum_vectorized_matches_scalar():
    e1 = np.array([0.3, -0.2, 0.9])
    e2 = np.array([0.3, 0.5, -0.1])  # first entry degenerate
    got = mats.pair_window_sum(e1, e2, 0, N, W)
    for i in range(3):
        assert got[i] == pytest.approx(
            complex(mats.pair_window_sum(e1[i], e2[i], 0, N, W)[0]), rel=1e-12
        )


def test_pair_sum_infinite_limit():
    # the N -> infinity window sum approaches beta (f(e1)-f(e2))/(ip0+e1-e2)
    e1, e2, mb = 0.3, -0.8, 2
    big = mats.pair_window_sum(e1, e2, mb, 10**14, W)[0]
    closed = mats.pair_sum_infinite(e1, e2, mb, BETA)[0]
    assert abs(big - closed) < 1e-10


def test_pair_sum_infinite_degenerate():
    e = 0.4
    closed = mats.pair_sum_infinite(e, e, 0, BETA)[0]
    f = 1.0 / (1.0 + math.exp(BETA * e))
    assert closed == pytest.approx(-(BETA**2) * f * (1 - f), rel=1e-12)


def test_fermi_function_stable():
    assert mats.fermi_function(1000.0, 10.0) == 0.0
    assert mats.fermi_function(-1000.0, 10.0) == 1.0
    assert mats.fermi_function(0.0, 10.0) == 0.5


def test_fermi_time_kernel_against_brute():
    n = np.arange(-200_000, 200_000)
    k0 = 2 * math.pi / BETA * (n + 0.5)
    for eps, t in [(0.7, 5.0), (-0.9, 3.0), (0.3, -4.0), (1.4, 20.0)]:
        brute = np.sum(np.exp(-1j * k0 * t) / (-1j * k0 + eps)) / BETA
        got = mats.fermi_time_kernel(eps, t, BETA)
        # brute truncation error ~ 1/(k0_max sin(pi t/beta))
        assert abs(brute - got) < 2e-4


def test_fermi_time_kernel_branches():
    beta, eps = 8.0, 0.3
    nf = 1.0 / (1.0 + math.exp(beta * eps))
    assert mats.fermi_time_kernel(eps, 1.0, beta) == pytest.approx(
        math.exp(-eps) * (1 - nf), rel=1e-12
    )
    assert mats.fermi_time_kernel(eps, -1.0, beta) == pytest.approx(
        -math.exp(eps) * nf, rel=1e-12
    )
    assert mats.fermi_time_kernel(eps, 0.0, beta) == pytest.approx(0.5 - nf, rel=1e-12)
    with pytest.raises(ValueError):
        mats.fermi_time_kernel(eps, beta, beta)


def test_fermi_time_kernel_bounded_extreme_energies():
    beta = 512.0
    for eps in (-50.0, -2.0, 2.0, 50.0):
        for t in (-500.0, -0.1, 0.1, 500.0):
            v = mats.fermi_time_kernel(eps, t, beta)
            assert np.isfinite(v) and abs(v) <= 1.0


def test_window_half_count():
    assert mats.window_half_count(6, BETA, 2.0) == math.floor(64 / W + 0.5)
    assert mats.window_half_count(5000, BETA, 2.0) == mats._N_CAP
    with pytest.raises(ValueError):
        mats.window_half_count(1, 0.001, 2.0)  # no frequency below the cutoff
