"""Command-line entry point.

Exit codes: 0 success, 1 invalid configuration or arguments, 2 I/O failure.
Errors go to stderr as ``error[<constraint>]: <message>``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from gridtrust.config import ScenarioConfig, bundled_path, load_config
from gridtrust.errors import ConfigError
from gridtrust.oracles import run_kendall_oracle
from gridtrust.report import render_summary, write_outputs
from gridtrust.simulator import run_experiment

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gridtrust", description="Grid trust evaluation with untrustworthy-recommender purging.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check a scenario file and report every violation")
    p.add_argument("config", type=Path)

    p = sub.add_parser("run", help="run a scenario and write reports")
    p.add_argument("config", type=Path)
    p.add_argument("--seed", type=int)
    p.add_argument("--runs", type=int)
    p.add_argument("--out", type=Path, help="output directory (default: results/<name>)")
    p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE", help="override a scalar parameter")

    p = sub.add_parser("table1", help="run the bundled two-grid, fifteen-entity comparison")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=Path, help="output directory (default: results/table1)")

    p = sub.add_parser("oracle-kendall", help="check the similarity against a brute-force oracle")
    p.add_argument("--n", type=int, default=8, help="largest vector length (default 8)")
    p.add_argument("--cases", type=int, default=200, help="random cases per sampled family (default 200)")
    return parser


def _report_error(key: str, message: str) -> None:
    print(f"error[{key}]: {message}", file=sys.stderr)


def _load(path: Path, overrides: list[str]) -> ScenarioConfig:
    if not path.is_file():
        raise FileNotFoundError(2, f"no such scenario file: {path}")
    return load_config(path, overrides)


def _experiment(path: Path, overrides: list[str], out: Path | None) -> int:
    config = _load(path, overrides)
    reports, scenarios = run_experiment(config)
    out = out or Path("results") / config.name
    write_outputs(reports, scenarios, out)
    print(f"scenario {config.name}: seed={config.seed} runs={config.runs}")
    print(render_summary(reports), end="")
    print(f"wrote {out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        _report_error("usage", str(exc))
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")

    try:
        if args.command == "validate":
            config = _load(args.config, [])
            topo = config.topology
            print(f"ok: {config.name} ({len(topo)} entities, {len(topo.domains)} domains, {len(topo.grids)} grids)")
            return EXIT_OK
        if args.command == "run":
            overrides = list(args.override)
            if args.seed is not None:
                overrides.append(f"seed={args.seed}")
            if args.runs is not None:
                overrides.append(f"runs={args.runs}")
            return _experiment(args.config, overrides, args.out)
        if args.command == "table1":
            overrides = [f"seed={args.seed}"] if args.seed is not None else []
            return _experiment(bundled_path("table1"), overrides, args.out)
        if args.command == "oracle-kendall":
            if args.n < 2 or args.cases < 0:
                _report_error("usage", "--n must be at least 2 and --cases non-negative")
                return EXIT_INVALID
            result = run_kendall_oracle(args.n, args.cases)
            print(f"kendall oracle: passed={result.passed} failed={result.failed}")
            return EXIT_OK if result.failed == 0 else EXIT_INVALID
    except ConfigError as exc:
        for key, message in exc.violations:
            _report_error(key, message)
        return EXIT_INVALID
    except OSError as exc:
        _report_error("io", str(exc.strerror or exc))
        return EXIT_IO
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
