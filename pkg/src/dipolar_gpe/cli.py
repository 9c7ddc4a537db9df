"""Command-line front end.

    dipolar-gpe {classify,ground,witness,evolve,stability} CONFIG

``CONFIG`` is a text file (``-`` for stdin) with one ``key = value`` per line
and ``#`` comments.  Exit status: 0 success, 1 bad input or I/O failure,
2 refusal in the unstable regime, 3 numerical blow-up.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import BlowUpError, DynamicsOptions, propagate, stability_experiment
from .energy import PhysicsParams
from .groundstate import SolverOptions, UnstableRegimeError, gaussian_state, minimize
from .io import format_float, write_csv, write_snapshot
from .regimes import ResolutionError, classify, witness_report
from .spectral import make_grid

__all__ = ["ConfigError", "RunConfig", "parse_config", "run", "main", "DEFAULTS",
           "EXIT_OK", "EXIT_ERROR", "EXIT_REFUSED", "EXIT_BLOWUP"]

EXIT_OK, EXIT_ERROR, EXIT_REFUSED, EXIT_BLOWUP = 0, 1, 2, 3

SUBCOMMANDS = ("classify", "ground", "witness", "evolve", "stability")

DEFAULTS = {
    "lambda1": 0.0,
    "lambda2": 0.0,
    "mass_c": 1.0,
    "dims": (64, 64, 64),
    "box": (8.0, 8.0, 8.0),
    "tol_residual": 1e-8,
    "max_iters": 5000,
    "dt": 1e-3,
    "t_final": 1.0,
    "delta": 1e-2,
    "epsilons": (0.5, 0.25, 0.125, 0.0625),
    "seed": 0,
    "output_dir": ".",
}


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class RunConfig:
    physics: PhysicsParams
    dims: tuple
    box: tuple
    solver: SolverOptions
    dynamics: DynamicsOptions
    delta: float = 1e-2
    epsilons: tuple = DEFAULTS["epsilons"]
    output_dir: Path = field(default_factory=lambda: Path("."))
    seed: int = 0

    @property
    def grid(self):
        return make_grid(self.dims, self.box)


def _floats(text):
    parts = text.replace(",", " ").split()
    if not parts:
        raise ValueError("empty list")
    return tuple(float(p) for p in parts)


def _triple(conv):
    def parse(text):
        vals = _floats(text)
        if len(vals) == 1:
            vals = vals * 3
        if len(vals) != 3:
            raise ValueError("expected 1 or 3 values")
        out = tuple(conv(v) for v in vals)
        if conv is int and any(o != v for o, v in zip(out, vals)):
            raise ValueError("expected integers")
        return out
    return parse


def _int(text):
    v = float(text)
    if v != int(v):
        raise ValueError("expected an integer")
    return int(v)


_PARSERS = {
    "lambda1": float,
    "lambda2": float,
    "mass_c": float,
    "dims": _triple(int),
    "box": _triple(float),
    "tol_residual": float,
    "max_iters": _int,
    "dt": float,
    "t_final": float,
    "delta": float,
    "epsilons": _floats,
    "seed": _int,
    "output_dir": str,
}


def _check_range(key, value):
    if key == "mass_c" and not value > 0:
        return "mass_c must be > 0"
    if key in ("tol_residual", "dt", "t_final") and not value > 0:
        return f"{key} must be > 0"
    if key == "max_iters" and value < 1:
        return "max_iters must be >= 1"
    if key == "delta" and value < 0:
        return "delta must be >= 0"
    if key == "epsilons" and any(not e > 0 for e in value):
        return "epsilons must be > 0"
    if key == "dims" and any(n < 8 or n % 2 for n in value):
        return "dims must be even and >= 8"
    if key == "box" and any(not L > 0 for L in value):
        return "box half-lengths must be > 0"
    if isinstance(value, float) and not np.isfinite(value):
        return f"{key} must be finite"
    return None


def parse_config(text):
    """Parse ``key = value`` text into a :class:`RunConfig`; missing keys take :data:`DEFAULTS`."""
    values = dict(DEFAULTS)
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        seen.add(key)
        try:
            parsed = _PARSERS[key](val)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}", lineno) from None
        problem = _check_range(key, parsed)
        if problem:
            raise ConfigError(problem, lineno)
        values[key] = parsed

    try:
        dynamics = DynamicsOptions(dt=values["dt"], t_final=values["t_final"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(
        physics=PhysicsParams(values["lambda1"], values["lambda2"], values["mass_c"]),
        dims=values["dims"],
        box=values["box"],
        solver=SolverOptions(tol_residual=values["tol_residual"],
                             max_iters=values["max_iters"], seed=values["seed"]),
        dynamics=dynamics,
        delta=values["delta"],
        epsilons=tuple(values["epsilons"]),
        output_dir=Path(values["output_dir"]),
        seed=values["seed"],
    )


def _write_summary(path, items):
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        for k, v in items:
            fh.write(f"{k}={v}\n")


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format_float(float(v))
    return str(v)


def _series_columns(report, with_orbit):
    cols = [report.times, report.mass_series, report.energy_series]
    header = ["t", "mass", "energy"]
    if with_orbit:
        cols.append(report.orbit_distance_series)
        header.append("orbit_distance")
    return header, cols


def run(subcommand, config, out=None, err=None):
    """Execute ``subcommand`` for ``config``; returns the process exit status."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    if subcommand not in SUBCOMMANDS:
        print(f"unknown subcommand {subcommand!r}", file=err)
        return EXIT_ERROR
    p = config.physics
    regime = classify(p.lambda1, p.lambda2)
    if subcommand == "classify":
        print(str(regime), file=out)
        return EXIT_OK

    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = config.grid

    if subcommand == "ground":
        try:
            res = minimize(p, grid, config.solver)
        except UnstableRegimeError as exc:
            print(f"refused: {exc}", file=err)
            return EXIT_REFUSED
        write_snapshot(outdir / "ground_state.gpe", grid, res.state)
        items = [("energy", res.energy), ("mu", res.mu), ("residual", res.residual),
                 ("iterations", res.iterations), ("converged", res.converged)]
        items = [(k, _fmt(v)) for k, v in items]
        _write_summary(outdir / "ground_summary.txt", items)
        for k, v in items:
            print(f"{k}={v}", file=out)
        return EXIT_OK

    if subcommand == "witness":
        try:
            rep = witness_report(p, grid, config.epsilons)
        except ResolutionError as exc:
            print(f"error: {exc}", file=err)
            return EXIT_ERROR
        write_csv(outdir / "witness.csv", ["epsilon", "h", "energy", "mass"],
                  [rep.epsilons, rep.h_values, rep.energies, rep.masses])
        _write_summary(outdir / "witness_summary.txt",
                       [("regime", regime.tag), ("verdict", _fmt(rep.verdict))])
        print(f"verdict={_fmt(rep.verdict)}", file=out)
        return EXIT_OK

    if subcommand == "evolve":
        psi0 = gaussian_state(grid, p.mass_c)
        try:
            rep = propagate(grid, psi0, p, config.dynamics)
        except BlowUpError as exc:
            if exc.report is not None:
                header, cols = _series_columns(exc.report, False)
                write_csv(outdir / "evolve.csv", header, cols)
            print(f"aborted: blow-up at t={format_float(exc.time)} ({exc.reason})", file=err)
            return EXIT_BLOWUP
        header, cols = _series_columns(rep, False)
        write_csv(outdir / "evolve.csv", header, cols)
        write_snapshot(outdir / "final_state.gpe", grid, rep.final_state)
        print(f"mass_drift={_fmt(rep.mass_drift)}", file=out)
        print(f"energy_drift={_fmt(rep.energy_drift)}", file=out)
        return EXIT_OK

    # stability
    if not regime.stable:
        print(f"refused: {UnstableRegimeError(regime)}", file=err)
        return EXIT_REFUSED
    ground = minimize(p, grid, config.solver)
    write_snapshot(outdir / "ground_state.gpe", grid, ground.state)
    try:
        rep = stability_experiment(p, grid, config.delta, config.dynamics,
                                   ground=ground, seed=config.seed)
    except BlowUpError as exc:
        print(f"aborted: blow-up at t={format_float(exc.time)} ({exc.reason})", file=err)
        return EXIT_BLOWUP
    header, cols = _series_columns(rep, True)
    write_csv(outdir / "stability.csv", header, cols)
    write_snapshot(outdir / "final_state.gpe", grid, rep.final_state)
    items = [("delta", _fmt(float(config.delta))),
             ("initial_sigma_distance", _fmt(rep.initial_sigma_distance)),
             ("sup_orbit_distance", _fmt(rep.sup_orbit_distance)),
             ("mass_drift", _fmt(rep.mass_drift)),
             ("energy_drift", _fmt(rep.energy_drift))]
    _write_summary(outdir / "stability_summary.txt", items)
    for k, v in items:
        print(f"{k}={v}", file=out)
    return EXIT_OK


def main(argv=None):
    parser = argparse.ArgumentParser(prog="dipolar-gpe", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("config", help="config file, or - for stdin")
    args = parser.parse_args(argv)
    try:
        if args.config == "-":
            text = sys.stdin.read()
        else:
            text = Path(args.config).read_text(encoding="utf-8")
        config = parse_config(text)
        return run(args.subcommand, config)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
