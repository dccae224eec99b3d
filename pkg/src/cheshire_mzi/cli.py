"""Command-line front end.

    cheshire-mzi run delayed --theta pi --phi 0 --method analytic
    cheshire-mzi run original --format csv
    cheshire-mzi sweep --theta 0:2pi:13 --phi 0:2pi:13 --output table.csv
    cheshire-mzi exec flip_a.mzi

Exit status: 0 on success, 1 on error, 2 when any result is flagged
``diverged``.  ``$CHESHIRE_MZI_OUTPUT_DIR`` sets the directory for relative
``--output`` paths and for sweeps run without ``--output``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import dsl, scenarios
from .errors import CheshireError, CircuitError
from .weak import DEFAULT_G, Method

OUTPUT_DIR_ENV = "CHESHIRE_MZI_OUTPUT_DIR"

EXIT_OK, EXIT_ERROR, EXIT_DIVERGED = 0, 1, 2


def _angle(text: str) -> float:
    try:
        return dsl.parse_angle(text)
    except CircuitError as exc:
        raise argparse.ArgumentTypeError(f"bad angle {text!r}: {exc}") from None


def _strength(text: str) -> float:
    g = _angle(text)
    if not 0 < g <= 0.1:
        raise argparse.ArgumentTypeError(f"g must lie in (0, 0.1], got {text}")
    return g


def parse_grid(spec: str) -> np.ndarray:
    """``start:stop:count`` -> ``count`` evenly spaced points, both ends included."""
    parts = spec.split(":")
    if len(parts) == 1:
        return np.array([_angle(parts[0])])
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid spec {spec!r} is not start:stop:count")
    start, stop = _angle(parts[0]), _angle(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid count {parts[2]!r} is not an integer") from None
    if count < 1:
        raise argparse.ArgumentTypeError("grid count must be at least 1")
    return np.linspace(start, stop, count)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.ANALYTIC.value)
    p.add_argument("--g", type=_strength, default=DEFAULT_G, help="coupling strength (default 1e-3)")
    p.add_argument("--shots", type=int, default=0, help="trials for --method sample (0: 100000)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cheshire-mzi", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one preset scenario")
    run.add_argument("scenario", choices=[s.value for s in scenarios.Scenario])
    run.add_argument("--theta", type=_angle, default=0.0)
    run.add_argument("--phi", type=_angle, default=0.0)
    _add_common(run)

    sw = sub.add_parser("sweep", help="tabulate the delayed-choice weak values on a grid")
    sw.add_argument("--theta", type=parse_grid, default=parse_grid("0:2pi:13"))
    sw.add_argument("--phi", type=parse_grid, default=parse_grid("0:2pi:13"))
    sw.add_argument("--output", type=Path, default=None)
    sw.add_argument("--workers", type=int, default=None)
    _add_common(sw)
    sw.set_defaults(format="csv")

    ex = sub.add_parser("exec", help="run a .mzi circuit file")
    ex.add_argument("path", type=Path)
    ex.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def _resolve_output(path: Path | None, fmt: str) -> Path | None:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if path is None:
        return Path(base) / f"sweep.{fmt}" if base else None
    if base and not path.is_absolute():
        return Path(base) / path
    return path


def cmd_run(args, out) -> int:
    if args.scenario == scenarios.Scenario.DELAYED_CHOICE.value:
        cfg = scenarios.ExperimentConfig(
            args.theta, args.phi, args.g, args.shots, args.seed, method=args.method
        )
        row = scenarios.run_delayed_choice(cfg)
        table = scenarios.SweepTable([row])
        out.write(table.to_csv() if args.format == "csv" else _dump_json(row.as_record()))
        return EXIT_DIVERGED if row.diverged else EXIT_OK
    runner = {
        scenarios.Scenario.ORIGINAL_CHESHIRE.value: scenarios.run_original_cheshire,
        scenarios.Scenario.GRIN_SNARL.value: scenarios.run_grin_snarl,
    }[args.scenario]
    rec = runner(args.method, args.g, args.shots, args.seed).as_record()
    if args.format == "csv":
        out.write(scenarios.records_to_csv([rec], list(rec)))
    else:
        out.write(_dump_json(rec))
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    table = scenarios.sweep(
        args.theta, args.phi, args.method, args.g, args.shots, args.seed, args.workers
    )
    text = table.to_csv() if args.format == "csv" else table.to_json()
    target = _resolve_output(args.output, args.format)
    summary = f"rows={len(table)} flagged={table.flagged} method={args.method}\n"
    if target is None:
        out.write(text)
        sys.stderr.write(summary)
    else:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        out.write(f"wrote {target}\n" + summary)
    return EXIT_DIVERGED if table.flagged else EXIT_OK


def cmd_exec(args, out) -> int:
    source = args.path.read_text(encoding="utf-8")
    results = dsl.run_source(source)
    records = [r.as_record() for r in results]
    if args.format == "csv":
        out.write(scenarios.records_to_csv(records, scenarios.MEASURE_COLUMNS))
    else:
        out.write(_dump_json(records))
    return EXIT_DIVERGED if any(r.diverged for r in results) else EXIT_OK


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "exec": cmd_exec}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except CircuitError as exc:
        where = f"{getattr(args, 'path', '')}:" if getattr(args, "path", None) else ""
        sys.stderr.write(f"error: {where}{exc}\n")
    except (CheshireError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
