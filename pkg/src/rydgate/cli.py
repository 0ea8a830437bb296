"""Command-line front end.

Each subcommand maps a reproducible computation to CSV/JSON files:

* search     -- scan the controlled-phase condition functions
* gate       -- simulate one pulse and report the extracted gate
* noise      -- Monte Carlo error budget for one parameter set
* sweep      -- fidelity against blockade energy or a noise magnitude
* shaped     -- re-optimize (xi, T_G) for an erf-edge pulse
* reference  -- re-simulate the bundled reference solution set

Frequencies on the command line are cyclic units (MHz, kHz, GHz) and
convert to rad/s with the 2*pi factor; see README section "Units" for
the one caveat about reproducing the bundled reference noise column.
Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import reference as ref
from .gates import TargetGate, align_global_phase, fidelity_report
from .hamiltonians import PulseParams
from .noise import NoiseConfig, blockade_sweep, monte_carlo, noise_sweep
from .propagation import ConvergenceError
from .reporting import write_csv, write_json
from .search import gate_time, optimize_shaped, scan
from .simulate import population_trace, simulate_gate
from .hamiltonians import drive_envelope
from .units import ghz, khz, mhz, rad_per_s_to_mhz, ns, us, s_to_us

__all__ = ["main", "RunConfig"]


@dataclass
class RunConfig:
    """Resolved run parameters (native CLI units)."""

    omega_mhz: float = 5.0
    xi: float | None = None
    delta_mhz: float | None = None
    delta_rr_ghz: float = 8.0
    m: int = 4
    phi: float | None = None
    pulse_shape: str = "square"
    delta_t_ns: float | None = None
    sigma_delta_khz: float = 0.0
    sigma_omega_khz: float = 0.0
    sigma_doppler_khz: float = 0.0
    trials: int = 2000
    seed: int = 0
    out_dir: str = "out"
    formats: tuple[str, ...] = ("csv", "json")

    def resolve(self) -> "RunConfig":
        """Derive the missing member of the (xi, delta) pair."""
        if (self.xi is None) == (self.delta_mhz is None):
            raise ValueError("exactly one of xi or delta_mhz must be given")
        if self.xi is None:
            self.xi = abs(self.omega_mhz) / abs(self.delta_mhz)
        else:
            self.delta_mhz = round(abs(self.omega_mhz) / self.xi, 10)
        return self

    def pulse(self) -> PulseParams:
        phi = self.phi or 0.0
        delta = mhz(self.delta_mhz)
        return PulseParams(
            omega=mhz(self.omega_mhz),
            delta=delta,
            delta_rr=ghz(self.delta_rr_ghz),
            duration=gate_time(self.m, phi, delta),
            shape=self.pulse_shape,
            delta_t=None if self.delta_t_ns is None else ns(self.delta_t_ns),
        )

    def target(self) -> TargetGate:
        if self.phi is not None:
            return TargetGate.cphase(self.phi)
        from .search import _cz_convention

        return TargetGate(np.pi, _cz_convention(self.m, self.xi))

    def noise(self) -> NoiseConfig:
        return NoiseConfig(
            sigma_delta=khz(self.sigma_delta_khz),
            sigma_omega=khz(self.sigma_omega_khz),
            sigma_doppler=khz(self.sigma_doppler_khz),
            trials=self.trials,
            seed=self.seed,
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["formats"] = list(self.formats)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        cfg = cls()
        flat = dict(d)
        for block in ("noise", "output"):
            if isinstance(flat.get(block), dict):
                sub = flat.pop(block)
                flat.update(sub)
        aliases = {"directory": "out_dir"}
        for key, value in flat.items():
            key = aliases.get(key, key)
            if key == "formats":
                value = tuple(value)
            if not hasattr(cfg, key):
                raise ValueError(f"unknown config key {key!r}")
            setattr(cfg, key, value)
        return cfg


def _load_config(path: str | None) -> RunConfig:
    if not path:
        return RunConfig()
    with open(path) as fh:
        return RunConfig.from_dict(json.load(fh))


def _apply_flags(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    mapping = {
        "omega_mhz": "omega_mhz",
        "xi": "xi",
        "delta_mhz": "delta_mhz",
        "delta_rr_ghz": "delta_rr_ghz",
        "m": "m",
        "phi": "phi",
        "shape": "pulse_shape",
        "delta_t_ns": "delta_t_ns",
        "sigma_delta_khz": "sigma_delta_khz",
        "sigma_omega_khz": "sigma_omega_khz",
        "sigma_doppler_khz": "sigma_doppler_khz",
        "trials": "trials",
        "seed": "seed",
        "out": "out_dir",
    }
    for flag, attr in mapping.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, attr, value)
    fmt = getattr(args, "format", None)
    if fmt and fmt != "both":
        cfg.formats = (fmt,)
    return cfg


def _want(cfg: RunConfig, kind: str) -> bool:
    return kind in cfg.formats


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", choices=["csv", "json", "both"], default="both")


def _add_physical(p: argparse.ArgumentParser) -> None:
    p.add_argument("--omega-mhz", dest="omega_mhz", type=float)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--xi", type=float)
    group.add_argument("--delta-mhz", dest="delta_mhz", type=float)
    p.add_argument("--delta-rr-ghz", dest="delta_rr_ghz", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--phi", type=float, help="target phase in radians (Cphase mode)")
    p.add_argument("--shape", choices=["square", "erf"])
    p.add_argument("--delta-t-ns", dest="delta_t_ns", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydgate",
        description="Single-pulse Rydberg-blockade controlled-phase gate toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="scan condition functions for solutions")
    _add_common(p)
    p.add_argument("--m-min", type=int, default=2)
    p.add_argument("--m-max", type=int, default=7)
    p.add_argument("--xi-max", type=float, default=4.0)
    p.add_argument("--phi", type=float, default=None)
    p.add_argument("--grid-step", type=float, default=1e-4)
    p.add_argument("--keep", type=int, default=None)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("gate", help="simulate one pulse and extract the gate")
    _add_common(p)
    _add_physical(p)
    p.add_argument("--trace", type=int, default=0, metavar="N",
                   help="also write an N-point population time series")
    p.add_argument("--states", type=int, default=2000,
                   help="random states for the average fidelity")
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("noise", help="Monte Carlo error budget")
    _add_common(p)
    _add_physical(p)
    p.add_argument("--sigma-delta-khz", dest="sigma_delta_khz", type=float)
    p.add_argument("--sigma-omega-khz", dest="sigma_omega_khz", type=float)
    p.add_argument("--sigma-doppler-khz", dest="sigma_doppler_khz", type=float)
    p.add_argument("--trials", type=int)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("sweep", help="fidelity against one swept parameter")
    _add_common(p)
    _add_physical(p)
    p.add_argument("--axis", required=True,
                   choices=["delta_rr", "sigma_doppler", "sigma_delta", "sigma_omega"])
    p.add_argument("--values", required=True,
                   help="comma-separated axis values (GHz for delta_rr, kHz for sigmas)")
    p.add_argument("--trials", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("shaped", help="re-optimize an erf-edge pulse")
    _add_common(p)
    _add_physical(p)
    p.add_argument("--xi0", type=float, help="starting drive ratio (default --xi)")
    p.add_argument("--t0-us", dest="t0_us", type=float,
                   help="starting duration in us (default square-pulse value)")
    p.add_argument("--envelope-samples", type=int, default=200)
    p.set_defaults(func=cmd_shaped)

    p = sub.add_parser("reference", help="re-simulate the bundled reference set")
    _add_common(p)
    p.add_argument("--trials", type=int, default=2000)
    p.set_defaults(func=cmd_reference)

    return parser


def _out_dir(cfg: RunConfig) -> Path:
    d = Path(cfg.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def cmd_search(args: argparse.Namespace) -> int:
    cfg = _apply_flags(_load_config(args.config), args)
    m_range = (min(args.m_min, args.m_max), args.m_max)
    candidates = scan(m_range, args.xi_max, args.phi, args.grid_step, args.keep)
    out = _out_dir(cfg)
    rows = [
        (c.m, c.xi, c.phi, c.condition_value,
         c.tau1_ratio, c.tau2_ratio, c.predicted_fmin)
        for c in candidates
    ]
    path = write_csv(
        out / "candidates.csv",
        ["m", "xi", "phi", "condition_value",
         "tg_over_tau1", "tg_over_tau2", "predicted_fmin"],
        rows,
    )
    if not candidates:
        print("warning: no candidates reached the condition target", file=sys.stderr)
    print(f"wrote {path} ({len(candidates)} candidates)")
    return 0


def _gate_payload(cfg: RunConfig, n_states: int) -> dict:
    pulse = cfg.pulse()
    target = cfg.target()
    gate = simulate_gate(pulse)
    report = fidelity_report(gate, target, n_samples=n_states, seed=cfg.seed)
    diag, theta = align_global_phase(gate, target)
    return {
        "config": cfg.to_dict(),
        "target": {"phi": target.phi, "convention": target.convention},
        "gate_diagonal": list(diag),
        "matrix": [list(row) for row in gate.matrix],
        "leakage": list(gate.leakage),
        "phase_used": theta,
        "f_min": report.f_min,
        "f_avg": report.f_avg,
        "t_gate_us": s_to_us(pulse.duration),
        "n_states": n_states,
    }


def cmd_gate(args: argparse.Namespace) -> int:
    cfg = _apply_flags(_load_config(args.config), args).resolve()
    payload = _gate_payload(cfg, args.states)
    out = _out_dir(cfg)
    if _want(cfg, "json"):
        print(f"wrote {write_json(out / 'gate.json', payload)}")
    if args.trace > 0 and _want(cfg, "csv"):
        trace = population_trace(cfg.pulse(), args.trace)
        path = write_csv(out / "populations.csv", ["t", "pop_1", "pop_11"],
                         [(r["t"], r["pop_1"], r["pop_11"]) for r in trace])
        print(f"wrote {path}")
    print(f"f_min={payload['f_min']:.6f} f_avg={payload['f_avg']:.6f}")
    return 0


def cmd_noise(args: argparse.Namespace) -> int:
    cfg = _apply_flags(_load_config(args.config), args).resolve()
    report = monte_carlo(cfg.pulse(), cfg.noise(), cfg.target())
    out = _out_dir(cfg)
    summary = {
        "config": cfg.to_dict(),
        "mean_min_fidelity": report.mean_min_fidelity,
        "mean_avg_fidelity": report.mean_avg_fidelity,
        "trials": report.trials,
        "seed": report.seed,
    }
    if _want(cfg, "json"):
        print(f"wrote {write_json(out / 'noise.json', summary)}")
    if _want(cfg, "csv"):
        path = write_csv(out / "noise_hist.csv",
                         ["bin_lower", "bin_upper", "count"],
                         report.histogram.rows())
        print(f"wrote {path}")
    print(f"mean_min={report.mean_min_fidelity:.6f} "
          f"mean_avg={report.mean_avg_fidelity:.6f}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _apply_flags(_load_config(args.config), args).resolve()
    values = [float(v) for v in args.values.split(",") if v.strip()]
    if not values:
        raise ValueError("--values must list at least one number")
    pulse = cfg.pulse()
    target = cfg.target()
    out = _out_dir(cfg)
    if args.axis == "delta_rr":
        result = blockade_sweep(pulse, [ghz(v) for v in values], target,
                                seed=cfg.seed)
        rows = [(v, fmin, favg)
                for v, (_, fmin, favg) in zip(sorted(values), result.rows)]
        header = ["delta_rr_ghz", "f_min", "f_avg"]
    else:
        rows_rad = noise_sweep(pulse, args.axis, [khz(v) for v in values],
                               cfg.trials, cfg.seed, target)
        rows = [(v, mean_min, mean_avg)
                for v, (_, mean_min, mean_avg) in zip(sorted(values), rows_rad)]
        header = [f"{args.axis}_khz", "mean_min", "mean_avg"]
    path = write_csv(out / "sweep.csv", header, rows)
    print(f"wrote {path}")
    return 0


def cmd_shaped(args: argparse.Namespace) -> int:
    cfg = _apply_flags(_load_config(args.config), args).resolve()
    cfg.pulse_shape = "erf"
    if cfg.delta_t_ns is None:
        cfg.delta_t_ns = 10.0
    pulse = cfg.pulse()
    target = cfg.target()
    xi0 = args.xi0 if args.xi0 is not None else cfg.xi
    t0 = us(args.t0_us) if args.t0_us is not None else gate_time(
        cfg.m, cfg.phi or 0.0, mhz(cfg.delta_mhz))
    optimum = optimize_shaped(pulse, cfg.m, xi0, t0, target)
    out = _out_dir(cfg)
    payload = {
        "config": cfg.to_dict(),
        "start": {"xi": xi0, "t_gate_us": s_to_us(t0), "fmin": optimum.start_fmin},
        "optimum": {"xi": optimum.xi, "t_gate_us": s_to_us(optimum.t_gate),
                    "fmin": optimum.fmin},
        "improved": optimum.improved,
        "unimproved": not optimum.improved,
        "n_evaluations": optimum.n_evaluations,
    }
    if _want(cfg, "json"):
        print(f"wrote {write_json(out / 'shaped.json', payload)}")
    if _want(cfg, "csv"):
        best = PulseParams(pulse.omega, abs(pulse.omega) / optimum.xi,
                           pulse.delta_rr, optimum.t_gate, "erf", pulse.delta_t)
        ts = np.linspace(0.0, best.duration, args.envelope_samples)
        env = np.abs(np.asarray(drive_envelope(ts, best))) / abs(best.omega)
        path = write_csv(out / "envelope.csv", ["t", "omega_over_peak"],
                         zip(ts, env))
        print(f"wrote {path}")
    print(f"xi*={optimum.xi:.4f} T_G*={s_to_us(optimum.t_gate):.4f}us "
          f"fmin*={optimum.fmin:.4f} improved={optimum.improved}")
    return 0


def cmd_reference(args: argparse.Namespace) -> int:
    cfg = _apply_flags(_load_config(args.config), args)
    trials = args.trials
    out = _out_dir(cfg)
    candidates = scan((2, 7), 4.0)
    rows = []
    for row in ref.REFERENCE_ROWS:
        cand = min(
            (c for c in candidates if c.m == row.m),
            key=lambda c: abs(c.xi - row.xi),
        )
        pulse = cand.pulse(ref.REFERENCE_OMEGA, ref.REFERENCE_DELTA_RR)
        target = cand.target_gate()
        gate = simulate_gate(pulse)
        rep = fidelity_report(gate, target, seed=cfg.seed)
        mc = monte_carlo(
            pulse,
            NoiseConfig(sigma_doppler=ref.REFERENCE_DOPPLER_SIGMA,
                        trials=trials, seed=cfg.seed),
            target,
        )
        rows.append((
            row.m, cand.xi,
            cand.condition_value, row.f, cand.condition_value - row.f,
            cand.tau1_ratio, row.tau1_ratio, cand.tau1_ratio - row.tau1_ratio,
            cand.tau2_ratio, row.tau2_ratio, cand.tau2_ratio - row.tau2_ratio,
            cand.predicted_fmin, row.fmin_ideal,
            cand.predicted_fmin - row.fmin_ideal,
            rep.f_min, row.fmin_blockade, rep.f_min - row.fmin_blockade,
            mc.mean_min_fidelity, row.fmin_doppler,
            mc.mean_min_fidelity - row.fmin_doppler,
        ))
    header = ["m", "xi",
              "f", "f_ref", "f_delta",
              "tau1", "tau1_ref", "tau1_delta",
              "tau2", "tau2_ref", "tau2_delta",
              "fmin_ideal", "fmin_ideal_ref", "fmin_ideal_delta",
              "fmin_blockade", "fmin_blockade_ref", "fmin_blockade_delta",
              "fmin_doppler", "fmin_doppler_ref", "fmin_doppler_delta"]
    path = write_csv(out / "reference_table.csv", header, rows)
    print(f"wrote {path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
