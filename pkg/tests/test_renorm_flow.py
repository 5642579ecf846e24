import numpy as np
import pytest

from hubbardll.errors import DomainViolation, UndefinedAtScale
from hubbardll.hubbard_rg import CouplingVector, ModelInputs, init_couplings, run_flow
from hubbardll.renorm_flow import (
    CHANNELS,
    anomalous_exponent,
    canonical_channel,
    q_coefficient,
    run_renorm,
    step_renorm,
)

DEEP = -(2 * 10**6)


@pytest.fixture(scope="module")
def deep_run():
    inputs = ModelInputs(lam=1e-3, v0=1.0, v2pf=1.0, mu=0.5)
    trace = run_flow(init_couplings(inputs), inputs, DEEP)
    return inputs, trace, run_renorm(trace)


def _vec(g1, g2):
    return CouplingVector(g1=g1, g2=g2, g4=0.0, delta=0.0, nu=0.0)


def test_step_renorm_2s():
    out = step_renorm("2S", 1.0, _vec(0.02, 0.01), g2_inf=0.0, a=0.22064)
    assert out == pytest.approx(1.0011032, abs=1e-7)


def test_step_renorm_z_unchanged():
    out = step_renorm("z", 1.37, _vec(0.02, 0.01), g2_inf=0.0, a=0.22064)
    assert out == 1.37


def test_step_renorm_2c_fixed_point():
    out = step_renorm("2C", 0.8, _vec(0.0, 0.005), g2_inf=0.005, a=0.22064)
    assert out == 0.8


def test_channel_normalization():
    assert canonical_channel("(2,C)") == "2C"
    assert canonical_channel("1sc") == "1SC"
    with pytest.raises(DomainViolation):
        canonical_channel("1TC")
    with pytest.raises(DomainViolation):
        canonical_channel("bogus")


def test_q_deep_limits(deep_run):
    _, _, rt = deep_run
    lam, h = 1e-3, -(10**6)
    targets = {"2C": -0.75, "2S": 0.25, "2SC": -0.75, "2TC": 0.25}
    for tag, target in targets.items():
        q = q_coefficient(tag, rt, h)
        assert abs(complex(q).real - target) <= 5 * lam, tag


def test_q_z_channel_zero(deep_run):
    _, _, rt = deep_run
    assert q_coefficient("z", rt, -(10**6)) == 0.0


def test_q_undefined_at_scale_zero(deep_run):
    _, _, rt = deep_run
    with pytest.raises(UndefinedAtScale):
        q_coefficient("2C", rt, 0)


def test_su2_constraint(deep_run):
    _, _, rt = deep_run
    np.testing.assert_array_equal(rt.zhat["1C"], rt.zhat["1S"])


def test_small_transfer_ratio_to_z(deep_run):
    # |Zhat_{1,alpha}/Zhat_z - 1| stays bounded by C lam^2 (identically 0 here)
    _, _, rt = deep_run
    for tag in ("1C", "1S", "1SC"):
        assert np.max(np.abs(rt.zhat[tag] / rt.zhat["z"] - 1.0)) == 0.0


def test_zhat_monotonicity_signs(deep_run):
    # suppressed channels shrink, enhanced channels grow
    _, _, rt = deep_run
    assert rt.zhat["2C"][-1] < 1.0 < rt.zhat["2S"][-1]
    assert rt.zhat["2SC"][-1] < 1.0 < rt.zhat["2TC"][-1]


def test_anomalous_exponent_values():
    val = anomalous_exponent("2C", 0.01, 0.866025)
    assert val == pytest.approx(0.0018378, abs=2e-7)
    assert anomalous_exponent("2SC", 0.01, 0.866025) == pytest.approx(-val)
    assert anomalous_exponent("z", 0.01, 0.866025) == 0
    for tag in ("1C", "1S", "1SC"):
        assert anomalous_exponent(tag, 0.01, 0.866025) == 0


def test_step_renorm_consistent_with_run(deep_run):
    # scalar stepper reproduces the vectorized accumulation
    _, trace, rt = deep_run
    g2_inf = rt.g2_inf
    z = 1.0
    for i in range(200):
        z = step_renorm("2C", z, trace.coupling_at(-i), g2_inf, trace.a)
    assert z == pytest.approx(rt.zhat["2C"][200], rel=1e-12)


def test_all_channels_present(deep_run):
    _, _, rt = deep_run
    assert set(rt.zhat) == set(CHANNELS)
    for tag in CHANNELS:
        assert rt.zhat[tag][0] == 1.0
