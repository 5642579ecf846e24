"""Command-line driver: flow, exponents, correlations, baseline, sweep.

Every command reads a flat dotted-key config, writes CSV/JSON outputs into
--out, and finishes by writing manifest.json with a checksum per file; a run
that fails leaves no manifest.  Exit codes: 0 success, 1 computation error,
2 config or domain error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .correlations import build_context, omega_asymptotic, s2_asymptotic, spin_charge_two_point
from .effective_model import exponent_set, tune_to_hubbard
from .errors import ComputationError, HubbardllError, ValidationError
from .free_baseline import (
    free_asymptote,
    propagator_profile,
    response_c_profile,
    susceptibility_report,
    ward_report,
)
from .hubbard_rg import init_couplings, run_flow
from .observables import observables_for_hubbard
from .output import write_csv, write_json, write_manifest
from .renorm_flow import CHANNELS, run_renorm
from .scale_flow import FlowSchedule, in_sector


def _point_record(lam: float, cfg: RunConfig) -> dict:
    inputs = cfg.model_inputs(lam=lam)
    anom = tune_to_hubbard(lam, inputs.v0, inputs.v2pf, inputs.p_f_bar)
    es = exponent_set(anom)
    obs = observables_for_hubbard(lam, inputs.v0, inputs.v2pf, inputs.mu)
    return {
        "lambda": lam,
        "K": es.K,
        "K_tilde": es.K_tilde,
        "eta_rho": es.eta_rho,
        "eta_sigma": es.eta_sigma,
        "zeta_rho": es.zeta_rho,
        "zeta_sigma": es.zeta_sigma,
        "v_rho": es.vel_rho.v,
        "v_sigma": es.vel_sigma.v,
        "v_rho_plus": es.vel_rho.v_plus,
        "v_rho_minus": es.vel_rho.v_minus,
        "v_sigma_plus": es.vel_sigma.v_plus,
        "v_sigma_minus": es.vel_sigma.v_minus,
        "two_X": dict(es.two_X),
        "zeta_bar": dict(es.zeta_bar),
        "K_bar": obs.K_bar,
        "kappa": obs.kappa,
        "drude": obs.drude,
        "v": obs.v,
        "residuals": {
            "K_times_K_tilde_minus_1": es.K * es.K_tilde - 1.0,
            "four_eta_minus_K_relation": 4.0 * es.eta_rho - (es.K + es.K_tilde - 2.0),
            "v2_minus_drude_over_kappa": obs.v * obs.v - obs.drude / obs.kappa,
        },
    }


def cmd_flow(cfg: RunConfig, out: Path, threads: int, seed: int) -> list:
    inputs = cfg.model_inputs()
    h_min = cfg.get_int("flow.h_min", -10000)
    sector = cfg.sector()
    v0 = init_couplings(inputs)
    if sector is not None and not in_sector(complex(v0.g1), sector):
        raise ValidationError(
            f"g1(0) = {complex(v0.g1):.6g} outside the sector domain "
            f"epsilon={sector.epsilon}, delta={sector.delta}"
        )
    c0 = cfg.get_float("flow.sigma_c0", 0.0)
    schedule = None
    if c0 > 0.0:
        rng = np.random.default_rng(seed)
        depth = -h_min
        radius = c0 * abs(complex(v0.g1))
        sig = radius * np.sqrt(rng.uniform(0, 1, depth)) * np.exp(
            1j * rng.uniform(0, 2 * math.pi, depth)
        )
        schedule = FlowSchedule(a=inputs.a, sigma=sig, c0=c0)
    trace = run_flow(v0, inputs, h_min, schedule=schedule, domain=sector)
    rtrace = run_renorm(trace)

    hs = -np.arange(len(trace.g1))
    denom = np.log1p(trace.a * complex(trace.g1[0]) * np.abs(hs).astype(float))
    header = ["h"]
    cols = [hs]
    for name, arr in (("g1", trace.g1), ("g2", trace.g2), ("g4", trace.g4),
                      ("delta", trace.delta), ("nu", trace.nu)):
        header += [f"re_{name}", f"im_{name}"]
        cols += [np.real(arr), np.imag(arr)]
    for tag in CHANNELS:
        z = rtrace.zhat[tag]
        header += [f"re_zhat_{tag}", f"im_zhat_{tag}"]
        cols += [np.real(z), np.imag(z)]
    with np.errstate(divide="ignore", invalid="ignore"):
        for tag in CHANNELS:
            q = np.log(rtrace.zhat[tag].astype(complex)) / denom
            header += [f"re_q_{tag}", f"im_q_{tag}"]
            cols += [np.real(q), np.imag(q)]
    rows = zip(*cols)
    return [write_csv(out / "flow.csv", header, rows)]


def cmd_exponents(cfg: RunConfig, out: Path, threads: int, seed: int) -> list:
    records = [_point_record(lam, cfg) for lam in cfg.lambda_grid()]
    return [write_json(out / "exponents.json", records)]


def cmd_correlations(cfg: RunConfig, out: Path, threads: int, seed: int) -> list:
    inputs = cfg.model_inputs()
    ctx = build_context(inputs)
    x_max = cfg.get_int("correlations.x_max", 100)
    x0 = cfg.get_float("correlations.x0", 0.0)
    rows = []
    for x1 in range(1, x_max + 1):
        x = (x0, float(x1))
        for ch in ("C", "S", "SC", "TC"):
            rows.append((ch, x0, x1, omega_asymptotic(ch, x, ctx)))
        rows.append(("S2", x0, x1, s2_asymptotic(x, ctx)))
    f1 = write_csv(out / "correlations.csv", ["channel", "x0", "x1", "value"], rows)
    sm_rows = []
    for x1 in range(1, x_max + 1):
        val = spin_charge_two_point((x0, float(x1)), ctx, omega=1)
        sm_rows.append((x0, x1, val.real, val.imag))
    f2 = write_csv(out / "spin_charge.csv", ["x0", "x1", "re", "im"], sm_rows)
    return [f1, f2]


def cmd_baseline(cfg: RunConfig, out: Path, threads: int, seed: int) -> list:
    spec = cfg.lattice()
    x_max = cfg.get_int("baseline.x_max", min(60, spec.L // 2 - 1))
    xs = np.arange(1, x_max + 1)
    # equal-time profiles need the time shift beta/sqrt(M) to be small, i.e.
    # M far beyond the ward-study range; the analytic kernel makes that free
    pspec = spec.replace(M=cfg.get_int("baseline.propagator_M", 4_000_000))
    g = propagator_profile(xs, 0.0, pspec)
    asym = free_asymptote(xs, 0.0, pspec)
    f1 = write_csv(
        out / "propagator.csv",
        ["x", "re_g", "im_g", "re_asym", "im_asym"],
        zip(xs, g.real, g.imag, asym.real, asym.imag),
    )
    om = response_c_profile(xs, 0.0, pspec)
    f2 = write_csv(out / "response.csv", ["x", "omega_c"], zip(xs, om))
    m_space = cfg.get_int("baseline.ward_mspace", 3)
    m_time = cfg.get_int("baseline.ward_mtime", 2)
    m_list = cfg.get_floats("baseline.ward_m_levels", None) or [
        max(4, spec.M - 8), max(6, spec.M - 4), spec.M
    ]
    ward_rows = []
    for M in m_list:
        rep = ward_report(spec.replace(M=int(M)), m_space, m_time)
        ward_rows.append((
            int(M), m_space, m_time, rep.p1, rep.p0,
            rep.omega_c.real, rep.omega_c.imag,
            rep.omega_jrho.real, rep.omega_jrho.imag,
            rep.residual, rep.relative,
        ))
    f3 = write_csv(
        out / "ward.csv",
        ["M", "m_space", "m_time", "p1", "p0", "re_omega_c", "im_omega_c",
         "re_omega_jrho", "im_omega_jrho", "residual", "relative"],
        ward_rows,
    )
    sus = susceptibility_report(spec)
    f4 = write_csv(
        out / "susceptibility.csv",
        ["value_pmin", "p_ratio", "extrapolated", "continuum_ratio"],
        [(sus.value_pmin, sus.p_ratio, sus.extrapolated, sus.continuum_ratio)],
    )
    return [f1, f2, f3, f4]


def cmd_sweep(cfg: RunConfig, out: Path, threads: int, seed: int) -> list:
    grid = cfg.lambda_grid()
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        records = list(pool.map(lambda lam: _point_record(lam, cfg), grid))
    header = ["idx", "lambda", "K", "K_tilde", "eta_rho", "zeta_rho", "v_rho",
              "v_sigma", "K_bar", "kappa", "drude", "v",
              "res_kk", "res_eta", "res_v2"]
    rows = []
    for idx, rec in enumerate(records):  # grid order == deterministic merge order
        rows.append((
            idx, rec["lambda"], rec["K"], rec["K_tilde"], rec["eta_rho"],
            rec["zeta_rho"], rec["v_rho"], rec["v_sigma"], rec["K_bar"],
            rec["kappa"], rec["drude"], rec["v"],
            rec["residuals"]["K_times_K_tilde_minus_1"],
            rec["residuals"]["four_eta_minus_K_relation"],
            rec["residuals"]["v2_minus_drude_over_kappa"],
        ))
    return [write_csv(out / "sweep.csv", header, rows)]


_COMMANDS = {
    "flow": cmd_flow,
    "exponents": cmd_exponents,
    "correlations": cmd_correlations,
    "baseline": cmd_baseline,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hll",
        description="RG flows and Luttinger-liquid observables for the 1D "
                    "extended Hubbard model",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--config", required=True, help="path to the run config")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized schedules/sampling")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        started = time.time()
        files = _COMMANDS[args.command](cfg, out, args.threads, args.seed)
        write_manifest(out, cfg.raw, __version__, started, files,
                       seed=args.seed, command=args.command)
        return 0
    except ValidationError as exc:
        print(f"hll: config/domain error: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(f"hll: computation error: {exc}", file=sys.stderr)
        return 1
    except HubbardllError as exc:
        print(f"hll: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
