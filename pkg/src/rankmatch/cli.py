"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 input error, 3 cap/resource refusal.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .blossom import CapExceededError
from .experiments import execute, histogram_csv, replay
from .ranking import ALGORITHMS, EXHAUSTIVE_CAP

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _rational(text: str) -> str:
    try:
        return _frac_str(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 1/200 or 0.005, got {text!r}") from None


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker processes (results do not depend on it)")
    common.add_argument("--out", type=Path, help="write the report (or generated files) here")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument("--graph", type=Path, required=True, help="edge-list file")
    graph.add_argument("--opt", type=Path, help="matching sidecar used as OPT (default: blossom)")

    parser = _Parser(prog="rankmatch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", parents=[common, graph], help="one RANKING execution")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("estimate", parents=[common, graph], help="Monte Carlo approximation ratio")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="ranking")

    p = sub.add_parser("exhaustive", parents=[common, graph], help="exact statistics over all n! orders")
    p.add_argument("--k", type=_int_list, default=[], help="comma-separated k values")
    p.add_argument("--c", type=_rational, help="run the counting chain for this c")
    p.add_argument("--cap", type=int, default=EXHAUSTIVE_CAP)

    p = sub.add_parser("verify-claim", parents=[common, graph],
                       help="probability that a vertex set is a k-WIS, plus structural audit")
    p.add_argument("--set", type=_int_list, required=True, help="comma-separated vertex ids")
    p.add_argument("--samples", type=int, help="Monte Carlo instead of exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=EXHAUSTIVE_CAP)

    p = sub.add_parser("bounds", parents=[common], help="entropy threshold at c")
    p.add_argument("--c", type=_rational, required=True)
    p.add_argument("--precision", type=int, default=128, help="working precision in bits")

    p = sub.add_parser("gen", parents=[common], help="generate an instance with planted OPT")
    p.add_argument("spec", help="gadget-chain:COPIES | replicate:b=B | random-planted:n=N,p=P")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--graph", type=Path, help="source graph for replicate")
    p.add_argument("--opt", type=Path, help="source OPT for replicate")

    p = sub.add_parser("replay", parents=[common], help="re-run a saved report and compare payloads")
    p.add_argument("report", type=Path)
    return parser


_PARAM_KEYS = {
    "run": ("graph", "opt", "seed"),
    "estimate": ("graph", "opt", "seed", "samples", "algorithm"),
    "exhaustive": ("graph", "opt", "k", "c", "cap"),
    "verify-claim": ("graph", "opt", "set", "samples", "seed", "cap"),
    "bounds": ("c", "precision"),
    "gen": ("spec", "seed", "graph", "opt", "out"),
}


def _params(args: argparse.Namespace) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key in _PARAM_KEYS[args.command]:
        value = getattr(args, key)
        out[key] = str(value) if isinstance(value, Path) else value
    return out


def _summary(report: dict[str, Any]) -> str:
    res = report["result"]
    rows = [(k, v) for k, v in res.items() if not isinstance(v, (dict, list))]
    width = max((len(k) for k, _ in rows), default=0)
    lines = [f"{report['manifest']['command']}"]
    lines += [f"  {k:<{width}}  {v}" for k, v in rows]
    for name in ("size_histogram", "aug3_histogram"):
        if name in res:
            lines.append(f"  {name}:")
            lines += [f"    {key:>4}  {count}" for key, count in res[name].items()]
    return "\n".join(lines)


def _emit(report: dict[str, Any], args: argparse.Namespace, write_file: bool) -> None:
    if args.format == "csv":
        payload = histogram_csv(report["result"])
    else:
        payload = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if write_file and args.out:
        args.out.write_text(payload)
        print(_summary(report))
    else:
        sys.stdout.write(payload)


def _parse(argv: Sequence[str] | None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    if args.format == "csv" and args.command not in ("estimate", "exhaustive"):
        parser.error("--format csv is only available for estimate and exhaustive")
    if args.command == "gen" and args.spec.startswith("replicate") and not args.graph:
        parser.error("replicate needs --graph and --opt")
    return args


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _parse(argv)
    except SystemExit as exc:
        # argparse exits for --help (0) and usage errors (1); hand the code back.
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "replay":
            saved = json.loads(args.report.read_text())
            fresh, same = replay(saved, args.threads)
            _emit(fresh, args, write_file=True)
            if not same:
                print("replay: result payload differs from the saved report", file=sys.stderr)
                return EXIT_INPUT
            print("replay: result payload identical", file=sys.stderr)
            return EXIT_OK
        report = execute(args.command, _params(args), args.threads)
        # gen writes its own files at --out; the report itself goes to stdout.
        _emit(report, args, write_file=args.command != "gen")
    except CapExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

