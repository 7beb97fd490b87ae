"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 an inequality that must
always hold was violated (an internal bug).
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys
from collections.abc import Sequence

from . import _backend, families, stateio
from ._config import get_tolerances, tolerances
from .correlations import (
    check_bounds,
    correlation_report,
    mid,
    mutual_information,
    symmetric_discord,
)
from .errors import BoundViolation, HiddenCorrError, UnsupportedDimension
from .states import ClassicalStateSpec, reduce

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


def fmt(x: float) -> str:
    return f"{x + 0.0:.12g}"


def flag(b: bool) -> str:
    return "1" if b else "0"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@contextlib.contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _csv_writer(fh):
    return csv.writer(fh, lineterminator="\n")


def cmd_sample(args) -> int:
    slack = get_tolerances().bound_slack
    violations = 0
    with _output(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(["index", "I_ab", "mid_13", "degenerate_flag"])
        for s in families.sample_random_classical(args.n, args.seed, workers=args.workers):
            if s.mid_13 > s.I_ab + slack or s.mid_13 < -slack:
                violations += 1
            w.writerow([s.index, fmt(s.I_ab), fmt(s.mid_13), flag(s.degenerate)])
    if violations:
        raise BoundViolation(f"{violations} samples violate 0 <= MID(1,3) <= I(a,b)")
    return EXIT_OK


def cmd_family(args) -> int:
    make = families.FAMILIES[args.family]
    with _output(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(["param", "I_ab", "mid_13", "analytic_mid_13", "ms_13", "degenerate_flag"])
        for param in families.parameter_grid(args.family, args.steps):
            point = make(float(param))
            red = point.reduced()
            m, degenerate = mid(red)
            ms = "" if args.skip_discord else fmt(symmetric_discord(red))
            w.writerow(
                [fmt(param), fmt(mutual_information(point.state)), fmt(m),
                 fmt(point.analytic.mid_13), ms, flag(degenerate)]
            )
    return EXIT_OK


def _keep(args, layout, default_full: bool):
    if args.keep_a is not None:
        keep_a = tuple(args.keep_a)
    else:
        keep_a = layout.party_a if default_full else (0,)
    if args.keep_b is not None:
        keep_b = tuple(args.keep_b)
    else:
        keep_b = layout.party_b if default_full else (layout.cut,)
    return keep_a, keep_b


def _print_checks(checks, out=None) -> None:
    out = sys.stdout if out is None else out
    width = max(len(c.name) for c in checks)
    print(f"{'bound':<{width}}  {'lhs':>14}  {'rhs':>14}  {'margin':>14}  ok", file=out)
    for c in checks:
        print(
            f"{c.name:<{width}}  {fmt(c.lhs):>14}  {fmt(c.rhs):>14}  {fmt(c.margin):>14}  "
            f"{'pass' if c.satisfied else 'FAIL'}",
            file=out,
        )


def cmd_measure(args) -> int:
    obj = stateio.load(args.state_file)
    rho = stateio.as_density(obj)
    keep_a, keep_b = _keep(args, rho.layout, default_full=True)
    red = reduce(rho, keep_a, keep_b)
    qubits = red.layout.dim_a == 2 and red.layout.dim_b == 2
    if args.discord and not qubits:
        raise UnsupportedDimension(
            f"symmetric discord needs single-qubit parties, got dims "
            f"({red.layout.dim_a}, {red.layout.dim_b})"
        )
    want_discord = qubits and not args.skip_discord
    report = correlation_report(red, discord=want_discord)
    checks = list(report.bound_checks)
    if isinstance(obj, ClassicalStateSpec):
        checks += check_bounds(obj, keep_a, keep_b)
    ok = all(c.satisfied for c in checks)
    if args.json:
        body = report.to_dict()
        body["bound_checks"] = [dict(c.__dict__, margin=c.margin) for c in checks]
        doc = {"report": body, "keep_a": list(keep_a), "keep_b": list(keep_b),
               "backend": _backend.name()}
        if isinstance(obj, ClassicalStateSpec):
            doc["classical"] = stateio.classical_section(obj)
        else:
            doc["dense"] = stateio.dense_section(rho)
        json.dump(doc, sys.stdout, indent=1)
        print()
    else:
        print(f"keep_a                 {list(keep_a)}")
        print(f"keep_b                 {list(keep_b)}")
        print(f"mutual_info            {fmt(report.mutual_info)}")
        print(f"classical_mutual_info  {fmt(report.classical_mutual_info)}")
        print(f"mid                    {fmt(report.mid)}")
        ms = report.symmetric_discord
        print(f"symmetric_discord      {'n/a' if ms is None else fmt(ms)}")
        print(f"degenerate_marginal    {flag(report.degenerate_marginal_flag)}")
        _print_checks(checks)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_bounds(args) -> int:
    obj = stateio.load(args.state_file)
    if not isinstance(obj, ClassicalStateSpec):
        raise HiddenCorrError("bounds needs a 'classical' state file")
    keep_a, keep_b = _keep(args, obj.layout, default_full=False)
    checks = check_bounds(obj, keep_a, keep_b)
    if args.json:
        json.dump([dict(c.__dict__, margin=c.margin) for c in checks], sys.stdout, indent=1)
        print()
    else:
        _print_checks(checks)
    return EXIT_OK if all(c.satisfied for c in checks) else EXIT_VIOLATION


def cmd_envelope(args) -> int:
    samples = [(s.I_ab, s.mid_13) for s in
               families.sample_random_classical(args.n, args.seed, workers=args.workers)]
    samples += families.lambda_injection_points(args.steps, args.lambda_max)
    env = families.mid_upper_envelope(samples, args.bins)
    slack = get_tolerances().bound_slack
    bad = [b for b in env if b.max_mid > b.upper + slack]
    with _output(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(["I_bin_center", "max_mid"])
        for b in env:
            w.writerow([fmt(b.center), fmt(b.max_mid)])
    if bad:
        raise BoundViolation(f"{len(bad)} bins have max MID above their upper I edge")
    return EXIT_OK


def cmd_export_state(args) -> int:
    if args.family == "lambda" and math.isclose(args.param, 0.5):
        point = families.lambda_limit_point()
    else:
        point = families.FAMILIES[args.family](args.param)
    doc = {"classical": stateio.classical_section(point.spec)}
    with _output(args.out) as fh:
        fh.write(json.dumps(doc, indent=1) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--n", type=int, default=10000, help="number of random states")
    common.add_argument("--steps", type=int, default=200, help="parameter grid size")
    common.add_argument("--bins", type=int, default=20)
    common.add_argument("--family", choices=sorted(families.FAMILIES), default="lambda")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--skip-discord", action="store_true")
    common.add_argument("--tol-eig", type=float, default=None,
                        help="eigenvalues below this are dropped from entropies")
    common.add_argument("--tol-gap", type=float, default=None,
                        help="eigenvalues closer than this count as degenerate")
    common.add_argument("--workers", type=int, default=1)

    parser = _Parser(prog="hiddencorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", parents=[common], help="random classical states: I(a,b) vs MID(1,3)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("family", parents=[common], help="sweep one of the alpha/gamma/lambda families")
    p.set_defaults(func=cmd_family)

    for name, func, helptext in (
        ("measure", cmd_measure, "correlation report for a state file"),
        ("bounds", cmd_bounds, "inequality chain for a classical state file"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("state_file")
        p.add_argument("--keep-a", type=int, nargs="+", default=None,
                       help="0-based factor indices of party a to keep")
        p.add_argument("--keep-b", type=int, nargs="+", default=None,
                       help="0-based factor indices of party b to keep")
        if name == "measure":
            p.add_argument("--discord", action="store_true",
                           help="fail unless symmetric discord can be computed")
        p.set_defaults(func=func)

    p = sub.add_parser("envelope", parents=[common], help="empirical upper border of MID vs I(a,b)")
    p.add_argument("--lambda-max", type=float, default=0.4999,
                   help="largest lambda among the injected lambda-family points")
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("export-state", parents=[common], help="write a family point as a state file")
    p.add_argument("--param", type=float, required=True)
    p.set_defaults(func=cmd_export_state)
    return parser


def _validate(args, parser) -> None:
    if args.n < 1:
        parser.error("--n must be at least 1")
    if args.steps < 2:
        parser.error("--steps must be at least 2")
    if args.bins < 1:
        parser.error("--bins must be at least 1")
    if args.workers < 1:
        parser.error("--workers must be at least 1")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    overrides = {}
    if args.tol_eig is not None:
        overrides["eig_floor"] = args.tol_eig
    if args.tol_gap is not None:
        overrides["gap"] = args.tol_gap
    try:
        with tolerances(**overrides):
            return args.func(args)
    except BoundViolation as exc:
        print(f"hiddencorr: invariant violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (HiddenCorrError, OSError) as exc:
        print(f"hiddencorr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
