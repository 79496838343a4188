"""Command-line front end: run experiments, enumerate DOS, heat curves, errors.

Exit codes: 0 success, 1 config error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .oracle import enumerate_dos
from .runner import (ConfigError, emit_csv, load_dos_csv, parse_config,
                     run_replicates, specific_heat_curve, write_epsilon_trajectory_csv,
                     write_heat_csv)
from .thermo import AnchorMode, TemperatureGrid, epsilon_error


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flathist",
        description="Flat-histogram density-of-states experiments on 2D lattice spin models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute the experiment described by a config file")
    run_p.add_argument("config", help="path to a key = value config file")
    run_p.add_argument("--jobs", type=int, default=1, help="parallel replicate workers")
    run_p.add_argument("--seed-offset", type=int, default=0,
                       help="added to every seed in the config")

    dos_p = sub.add_parser("dos", help="exact DOS enumeration for the configured model")
    dos_p.add_argument("config")
    dos_p.add_argument("--out", help="output CSV (default: <output_dir>/dos.csv)")

    heat_p = sub.add_parser("heat", help="specific-heat curve from a DOS file")
    heat_p.add_argument("dos_file")
    heat_p.add_argument("--t-start", type=float, default=0.4)
    heat_p.add_argument("--t-stop", type=float, default=8.0)
    heat_p.add_argument("--t-step", type=float, default=0.1)
    heat_p.add_argument("--out", help="output CSV (default: print to stdout)")

    err_p = sub.add_parser("error", help="relative log-DOS error between two DOS files")
    err_p.add_argument("dos_file", help="estimate")
    err_p.add_argument("ref_file", help="reference")
    err_p.add_argument("--anchor", choices=[a.value for a in AnchorMode],
                       default=AnchorMode.SUM_TO_ONE.value)
    return parser


def _cmd_run(args) -> int:
    config = parse_config(Path(args.config).read_text())
    if args.seed_offset:
        config = replace(config, seeds=tuple(s + args.seed_offset for s in config.seeds))
    summary = run_replicates(config, jobs=args.jobs)
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for trace in summary.traces:
        emit_csv(trace, out_dir / f"trace_{trace.seed}.csv")
    emit_csv(summary, out_dir / "summary.csv")
    if summary.epsilon_trajectory:
        write_epsilon_trajectory_csv(summary, out_dir / "epsilon_mean.csv")
    print(f"{summary.n_runs} runs -> {out_dir}")
    if summary.mean_first_equilibration_sweeps is not None:
        print(f"first equilibration: mean {summary.mean_first_equilibration_sweeps:.1f} "
              f"sweeps, std {summary.std_first_equilibration_sweeps:.1f} "
              f"({summary.n_equilibrated}/{summary.n_runs} runs)")
    print(f"wall time: mean {summary.mean_wall_time_seconds:.3f} s")
    return 0


def _cmd_dos(args) -> int:
    config = parse_config(Path(args.config).read_text())
    exact = enumerate_dos(config.model)
    if args.out:
        out = Path(args.out)
    else:
        out = Path(config.output_dir) / "dos.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    emit_csv(exact, out)
    print(out)
    return 0


def _cmd_heat(args) -> int:
    energies, log_g = load_dos_csv(args.dos_file)
    grid = TemperatureGrid(args.t_start, args.t_stop, args.t_step)
    curve = specific_heat_curve(log_g, energies, grid)
    if args.out:
        write_heat_csv(curve, args.out)
        print(args.out)
    else:
        print("T,C")
        for T, C in curve:
            print(f"{T!r},{C!r}")
    return 0


def _cmd_error(args) -> int:
    energies_est, log_g_est = load_dos_csv(args.dos_file)
    energies_ref, log_g_ref = load_dos_csv(args.ref_file)
    if not (energies_est == energies_ref).all():
        raise ConfigError("the two DOS files cover different energy levels")
    eps = epsilon_error(log_g_est, log_g_ref, AnchorMode(args.anchor))
    print(repr(eps))
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "run": _cmd_run,
        "dos": _cmd_dos,
        "heat": _cmd_heat,
        "error": _cmd_error,
    }[args.command]
    try:
        return handler(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
