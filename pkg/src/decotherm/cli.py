"""Command-line front end: JSON scenario configs in, deterministic CSV/JSON out.

Config layout (one scenario per file, unknown keys are a hard error):

    {
      "scenario": "two-level-decoherence",
      "params": {"gamma": 1.0, "e_level": 1.0, "x": 0.5, "z": 0.0},
      "integrator": {"dt": 0.001, "t_max": 3.0},
      "output": {"format": "csv", "path": "out.csv"},
      "onsager_c": 1.0,
      "seed": 0
    }

Scenarios: two-level-decoherence (instant heat rate; with an "integrator"
block it emits the dephasing trajectory instead), device-steady,
device-trajectory, gamma-sweep. Exit codes: 0 ok, 1 I/O error, 2 config
error, 3 numerical failure (degenerate kernel / no convergence).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Any

import numpy as np

from .dynamics import EvolutionSpec, Trajectory, propagate
from .errors import ConfigError, DecothermError, DegenerateKernel, NoConvergence
from .scenarios import (
    DeviceParams,
    TwoLevelDecoherenceParams,
    bloch_coordinates,
    build_device,
    device_report,
    gamma_sweep,
    two_level_decoherence_heat,
    two_level_dephasing_assembly,
)
from .thermo import ThermoSample, sample_thermodynamics

SCENARIOS = ("two-level-decoherence", "device-steady", "device-trajectory", "gamma-sweep")
FORMATS = ("csv", "json")

_DEVICE_KEYS = ("e_l", "e_r", "v", "n_l", "n_r")


def _fmt(x: float) -> str:
    """17 significant digits; lossless for 64-bit floats."""
    return f"{x:.17g}"


def _require_keys(table: dict, allowed: dict[str, bool], where: str) -> None:
    """allowed maps key -> required?"""
    for key in table:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' in {where}")
    for key, required in allowed.items():
        if required and key not in table:
            raise ConfigError(f"missing required key '{key}' in {where}")


def _number(table: dict, key: str, where: str) -> float:
    v = table[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"key '{key}' in {where} must be a number, got {v!r}")
    return float(v)


@dataclass(frozen=True, eq=False)
class RunConfig:
    scenario: str
    params: dict[str, Any]
    output_format: str
    output_path: str
    integrator: dict[str, float] | None = None
    onsager_c: float = 1.0
    seed: int = 0


def load_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    _require_keys(
        raw,
        {"scenario": True, "params": True, "output": True,
         "integrator": False, "onsager_c": False, "seed": False},
        "config",
    )
    scenario = raw["scenario"]
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario '{scenario}'; expected one of {SCENARIOS}")
    params = raw["params"]
    if not isinstance(params, dict):
        raise ConfigError("'params' must be an object")
    _validate_params(scenario, params)
    out = raw["output"]
    if not isinstance(out, dict):
        raise ConfigError("'output' must be an object")
    _require_keys(out, {"format": True, "path": True}, "output")
    if out["format"] not in FORMATS:
        raise ConfigError(f"unknown output format '{out['format']}'; expected one of {FORMATS}")
    integrator = raw.get("integrator")
    if integrator is not None:
        if not isinstance(integrator, dict):
            raise ConfigError("'integrator' must be an object")
        _require_keys(integrator, {"dt": False, "t_max": True}, "integrator")
        integrator = {k: _number(integrator, k, "integrator") for k in integrator}
    onsager_c = _number(raw, "onsager_c", "config") if "onsager_c" in raw else 1.0
    if onsager_c <= 0:
        raise ConfigError(f"onsager_c must be > 0, got {onsager_c}")
    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")
    return RunConfig(
        scenario=scenario,
        params=dict(params),
        output_format=out["format"],
        output_path=out["path"],
        integrator=integrator,
        onsager_c=onsager_c,
        seed=seed,
    )


def _validate_params(scenario: str, params: dict) -> None:
    where = f"params ({scenario})"
    if scenario == "two-level-decoherence":
        _require_keys(params, {"gamma": True, "e_level": True, "x": True, "z": False}, where)
        for k in params:
            _number(params, k, where)
    elif scenario in ("device-steady", "device-trajectory"):
        allowed = {k: True for k in _DEVICE_KEYS}
        allowed["gamma"] = True
        if scenario == "device-trajectory":
            allowed["initial_state"] = False
        _require_keys(params, allowed, where)
        for k in params:
            if k == "initial_state":
                if params[k] not in ("maximally-mixed", "ground"):
                    raise ConfigError(
                        f"initial_state must be 'maximally-mixed' or 'ground', got {params[k]!r}"
                    )
                continue
            _number(params, k, where)
    elif scenario == "gamma-sweep":
        allowed = {k: True for k in _DEVICE_KEYS}
        allowed["gammas"] = True
        _require_keys(params, allowed, where)
        for k in params:
            if k == "gammas":
                if not isinstance(params[k], list) or not params[k]:
                    raise ConfigError("'gammas' must be a non-empty list of numbers")
                for g in params[k]:
                    if isinstance(g, bool) or not isinstance(g, (int, float)):
                        raise ConfigError(f"'gammas' entries must be numbers, got {g!r}")
                continue
            _number(params, k, where)


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------

def _write_table(columns: list[str], rows: list[list[float]], path: str, fmt: str) -> None:
    if fmt == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        text = "\n".join(lines) + "\n"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        payload = {"columns": columns, "rows": [[float(v) for v in row] for row in rows]}
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")


def trajectory_table(
    traj: Trajectory, samples: list[ThermoSample], bath_names: list[str]
) -> tuple[list[str], list[list[float]]]:
    """Column order contract: t, energy, work_rate, heat_<bath>..., entropy,
    flux_<bath>..., entropy_production, rel_entropy_<bath>..., and Bloch
    coordinates for two-level systems."""
    if len(samples) != len(traj):
        raise ValueError("trajectory and samples lengths differ")
    d = traj.states.shape[1]
    columns = ["t", "energy", "work_rate"]
    columns += [f"heat_{n}" for n in bath_names]
    columns += ["entropy"]
    columns += [f"flux_{n}" for n in bath_names]
    columns += ["entropy_production"]
    columns += [f"rel_entropy_{n}" for n in bath_names]
    if d == 2:
        columns += ["bloch_x", "bloch_y", "bloch_z"]
    rows = []
    for k, s in enumerate(samples):
        row = [s.t, s.energy, s.work_rate]
        row += [s.heat_rates[n] for n in bath_names]
        row += [s.entropy]
        row += [s.entropy_flux[n] for n in bath_names]
        row += [s.entropy_production]
        row += [s.relative_entropies[n] for n in bath_names]
        if d == 2:
            row += list(bloch_coordinates(traj.states[k]))
        rows.append(row)
    return columns, rows


def emit_trajectory(
    traj: Trajectory, samples: list[ThermoSample], bath_names: list[str], path: str, fmt: str
) -> None:
    columns, rows = trajectory_table(traj, samples, bath_names)
    _write_table(columns, rows, path, fmt)


_REPORT_COLUMNS = [
    "nu_00", "nu_LL", "nu_RR", "coherence_re", "coherence_im",
    "heat_l", "heat_r", "heat_d", "x_l", "x_d", "m_ld", "m_dl", "entropy_production",
]


def _report_row(report) -> list[float]:
    return [
        float(report.nu[0, 0].real), float(report.nu[1, 1].real), float(report.nu[2, 2].real),
        report.coherence.real, report.coherence.imag,
        report.heat_l, report.heat_r, report.heat_d,
        report.x_l, report.x_d, report.m_ld, report.m_dl, report.entropy_production,
    ]


# ---------------------------------------------------------------------------
# scenario runners
# ---------------------------------------------------------------------------

def _run_two_level(cfg: RunConfig) -> str:
    p = TwoLevelDecoherenceParams(
        gamma=float(cfg.params["gamma"]),
        e_level=float(cfg.params["e_level"]),
        x=float(cfg.params["x"]),
        z=float(cfg.params.get("z", 0.0)),
    )
    if cfg.integrator is not None:
        h, bath, rho0 = two_level_dephasing_assembly(p)
        spec = EvolutionSpec(
            h, (bath,), t_max=cfg.integrator["t_max"], dt=cfg.integrator.get("dt")
        )
        traj = propagate(rho0, spec)
        samples = sample_thermodynamics(traj, spec)
        emit_trajectory(traj, samples, [bath.name], cfg.output_path, cfg.output_format)
        q0 = samples[0].heat_rates[bath.name]
        return (
            f"two-level-decoherence trajectory: {len(traj)} points, "
            f"initial heat_rate={q0:.6g}"
        )
    q = two_level_decoherence_heat(p)
    columns = ["gamma", "e_level", "x", "z", "heat_rate", "heat_rate_abs"]
    rows = [[p.gamma, p.e_level, p.x, p.z, q, abs(q)]]
    _write_table(columns, rows, cfg.output_path, cfg.output_format)
    return f"two-level-decoherence: heat_rate={q:.6g} |heat_rate|={abs(q):.6g}"


def _device_params(cfg: RunConfig, gamma: float | None = None) -> DeviceParams:
    p = cfg.params
    return DeviceParams(
        e_l=float(p["e_l"]), e_r=float(p["e_r"]), v=float(p["v"]),
        n_l=float(p["n_l"]), n_r=float(p["n_r"]),
        gamma=float(p["gamma"]) if gamma is None else gamma,
    )


def _run_device_steady(cfg: RunConfig) -> str:
    report = device_report(_device_params(cfg), cfg.onsager_c)
    _write_table(_REPORT_COLUMNS, [_report_row(report)], cfg.output_path, cfg.output_format)
    return (
        f"device-steady: heat_l={report.heat_l:.6g} heat_d={report.heat_d:.6g} "
        f"P={report.entropy_production:.6g} m_ld={report.m_ld:.6g}"
    )


def _run_device_trajectory(cfg: RunConfig) -> str:
    if cfg.integrator is None:
        raise ConfigError("device-trajectory requires an 'integrator' block")
    assembly = build_device(_device_params(cfg))
    if cfg.params.get("initial_state", "maximally-mixed") == "ground":
        rho0 = np.zeros((3, 3), dtype=complex)
        rho0[0, 0] = 1.0
    else:
        rho0 = np.eye(3, dtype=complex) / 3.0
    spec = EvolutionSpec(
        assembly.hamiltonian, assembly.baths,
        t_max=cfg.integrator["t_max"], dt=cfg.integrator.get("dt"),
    )
    traj = propagate(rho0, spec)
    samples = sample_thermodynamics(traj, spec)
    names = [b.name for b in assembly.baths]
    emit_trajectory(traj, samples, names, cfg.output_path, cfg.output_format)
    return (
        f"device-trajectory: {len(traj)} points, final entropy={samples[-1].entropy:.6g}, "
        f"final P={samples[-1].entropy_production:.6g}"
    )


def _run_gamma_sweep(cfg: RunConfig) -> str:
    gammas = [float(g) for g in cfg.params["gammas"]]
    base = _device_params(cfg, gamma=gammas[0])
    points = gamma_sweep(base, gammas, cfg.onsager_c)
    columns = ["gamma", "status"] + _REPORT_COLUMNS
    rows = []
    n_ok = 0
    for pt in points:
        if pt.report is None:
            rows.append([pt.gamma, 0.0] + [math.nan] * len(_REPORT_COLUMNS))
        else:
            n_ok += 1
            rows.append([pt.gamma, 1.0] + _report_row(pt.report))
    _write_table(columns, rows, cfg.output_path, cfg.output_format)
    return f"gamma-sweep: {n_ok}/{len(points)} points solved"


_RUNNERS = {
    "two-level-decoherence": _run_two_level,
    "device-steady": _run_device_steady,
    "device-trajectory": _run_device_trajectory,
    "gamma-sweep": _run_gamma_sweep,
}


def run(
    config_path: str,
    output: str | None = None,
    output_format: str | None = None,
    seed: int | None = None,
) -> int:
    """Execute one config; returns the process exit code."""
    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    if output is not None or output_format is not None or seed is not None:
        cfg = RunConfig(
            scenario=cfg.scenario,
            params=cfg.params,
            output_format=output_format or cfg.output_format,
            output_path=output or cfg.output_path,
            integrator=cfg.integrator,
            onsager_c=cfg.onsager_c,
            seed=seed if seed is not None else cfg.seed,
        )
    try:
        summary = _RUNNERS[cfg.scenario](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateKernel, NoConvergence) as exc:
        op = "steady_state" if isinstance(exc, DegenerateKernel) else "stationary_map/steady_state"
        print(f"numerical failure in {op}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    except DecothermError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(summary)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="decotherm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run a scenario config")
    runp.add_argument("config", help="path to a JSON run config")
    runp.add_argument("--output", help="override the output path")
    runp.add_argument("--format", choices=FORMATS, help="override the output format")
    runp.add_argument("--seed", type=int, help="override the RNG seed")
    args = parser.parse_args(argv)
    return run(args.config, output=args.output, output_format=args.format, seed=args.seed)


if __name__ == "__main__":
    sys.exit(main())
