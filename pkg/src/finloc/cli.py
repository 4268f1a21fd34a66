"""Command-line entry point: reproducible experiments over the library.

Every flag has a config-file equivalent (flat `key = value` lines, `#`
comments); explicit flags override the file. Exit codes: 0 success/all-pass,
2 well-formed negative result (NotLocal, violations, non-convergence),
1 usage or validation error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional

from . import __version__
from .errors import Error, ParseError
from .localmetric import (
    LocalityScale,
    RandomSample,
    audit_metric,
    decode,
    dist,
    encode,
)
from .logic import PrimeLadder, eval_finite, eval_limit, los_scan, parse_formula
from .polynomials import Polynomial, PolySystem
from .reports import ExperimentReport, fraction_str
from .residues import Modulus
from .structures import (
    GroupFamily,
    covering_radius,
    group_hom_check,
    make_reference_grid,
    variety_points,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


def _fraction(text: str) -> Fraction:
    return Fraction(text)


def _int_list(text: str) -> list:
    return [int(part) for part in text.split(",") if part.strip()]


def read_config(path: str) -> list:
    """Flat `key = value` file -> CLI token list (later tokens win in argparse)."""
    tokens = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise Error(f"{path}:{lineno}: expected `key = value`")
            key, value = line.split("=", 1)
            key = key.strip().replace("_", "-")
            value = value.strip()
            if not key:
                raise Error(f"{path}:{lineno}: empty key")
            tokens.extend([f"--{key}", value])
    return tokens


def _add_common(parser):
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--out", help="report path (default stdout)")
    parser.add_argument("--format", choices=["csv", "json"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finloc",
        description="local approximation experiments over finite fields",
    )
    parser.add_argument("--version", action="version", version=f"finloc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decode", help="reconstruct a residue as a bounded rational")
    _add_common(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mode", choices=["field", "ring"], default="field")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--z", type=int, required=True)

    p = sub.add_parser("encode", help="embed a rational into F_q / Z_n")
    _add_common(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mode", choices=["field", "ring"], default="field")
    p.add_argument("--value", type=_fraction, required=True, help="rational p/q")

    p = sub.add_parser("dist", help="distance between two residues at a scale")
    _add_common(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mode", choices=["field", "ring"], default="field")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--z1", type=int, required=True)
    p.add_argument("--z2", type=int, required=True)

    p = sub.add_parser("audit-metric", help="check the metric axioms on a sort")
    _add_common(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mode", choices=["field", "ring"], default="field")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--sample", type=int, help="sample size (omit for exhaustive)")
    p.add_argument("--seed", type=int, help="required with --sample")
    p.add_argument("--polys", help="polynomial system file for openness checks")

    p = sub.add_parser("group-hom", help="finite-image and product round-trip checks")
    _add_common(p)
    p.add_argument("--family", choices=["so", "su", "sl2"], required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--pairs", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("covering", help="covering radius of rational points vs a grid")
    _add_common(p)
    p.add_argument("--family", choices=["so", "su"], required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--heights", type=_int_list, required=True, help="e.g. 10,100,1000")
    p.add_argument("--grid-size", type=int, default=512)
    p.add_argument("--pool-height", type=int, default=3)

    p = sub.add_parser("variety", help="sort tuples on a variety, decoded and verified")
    _add_common(p)
    p.add_argument("--system", required=True, help="polynomial system file")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mode", choices=["field", "ring"], default="field")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--budget", type=int)

    p = sub.add_parser("eval", help="evaluate a formula (finite or limit side)")
    _add_common(p)
    p.add_argument("--formula", help="formula text")
    p.add_argument("--formula-file", help="file with the formula")
    p.add_argument("--mode", choices=["finite", "limit"], default="finite")
    p.add_argument("--q", type=int, help="finite-mode prime (default: smallest windowed prime)")
    p.add_argument("--l", type=int)
    p.add_argument("--height", type=int, help="height bound for limit mode")
    p.add_argument("--sample", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("los", help="prime-ladder convergence scan")
    _add_common(p)
    p.add_argument("--formula", help="formula text")
    p.add_argument("--formula-file", help="file with the formula")
    p.add_argument("--ls", type=_int_list, required=True, help="feasible units, e.g. 2,4,8")
    p.add_argument("--limit-height", type=int, required=True)
    p.add_argument("--q-start", type=int, default=0, help="floor for rung primes")
    p.add_argument("--growth", type=float, default=1.0, help="floor growth per rung")

    return parser


def _load_formula(args):
    if args.formula and args.formula_file:
        raise Error("--formula and --formula-file are mutually exclusive")
    if args.formula:
        return parse_formula(args.formula)
    if args.formula_file:
        with open(args.formula_file, "r", encoding="utf-8") as fh:
            return parse_formula(fh.read())
    raise Error("one of --formula / --formula-file is required")


def _sample_arg(args) -> Optional[RandomSample]:
    if args.sample is None:
        return None
    if args.seed is None:
        raise Error("--seed is required with --sample")
    return RandomSample(args.sample, args.seed)


def _config_echo(args, skip=("config", "out", "format", "command")) -> dict:
    return {
        k: v for k, v in sorted(vars(args).items())
        if k not in skip and v is not None
    }


def cmd_decode(args) -> int:
    q = Modulus(args.q, args.mode)
    scale = LocalityScale(args.l, args.m)
    found = decode(q.element(args.z), scale)
    if found is None:
        print("NotLocal")
        return EXIT_NEGATIVE
    print(f"{args.z} -> {fraction_str(found)}")
    return EXIT_OK


def cmd_encode(args) -> int:
    q = Modulus(args.q, args.mode)
    print(encode(args.value, q).value)
    return EXIT_OK


def cmd_dist(args) -> int:
    from .errors import NotLocalError

    q = Modulus(args.q, args.mode)
    scale = LocalityScale(args.l, args.m)
    try:
        value = dist(q.element(args.z1), q.element(args.z2), scale)
    except NotLocalError:
        print("NotLocal")
        return EXIT_NEGATIVE
    print(fraction_str(value))
    return EXIT_OK


def cmd_audit_metric(args) -> int:
    q = Modulus(args.q, args.mode)
    scale = LocalityScale(args.l, args.m)
    sample = _sample_arg(args)
    predicates = None
    if args.polys:
        system = PolySystem.from_path(args.polys)
        predicates = system.polys
    else:
        predicates = (Polynomial.parse("x^2 + y^2 - 1", ("x", "y")),)
    report = audit_metric(scale, q, sample=sample, zero_predicates=predicates)
    out = ExperimentReport(
        command="audit-metric",
        config=_config_echo(args),
        columns=["axiom", "checked", "failed"],
        rows=[{k: v for k, v in row.items() if k != "worst_witness"} for row in report.to_rows()]
        if args.format == "csv" else report.to_rows(),
        summary={"violations": report.violations},
    )
    out.write(args.out, args.format)
    return EXIT_OK if report.violations == 0 else EXIT_NEGATIVE


def _family(args) -> GroupFamily:
    if args.family == "sl2":
        return GroupFamily.sl2()
    return GroupFamily(args.family, args.n)


def cmd_group_hom(args) -> int:
    family = _family(args)
    q = Modulus(args.q)
    report = group_hom_check(family, args.pairs, args.height, q, seed=args.seed)
    out = ExperimentReport(
        command="group-hom",
        config=_config_echo(args),
        columns=["family", "pairs_checked", "membership_failures", "roundtrip_failures"],
        rows=report.to_rows(),
        summary={"failures": report.failures, "witnesses": report.witnesses},
    )
    out.write(args.out, args.format)
    return EXIT_OK if report.failures == 0 else EXIT_NEGATIVE


def cmd_covering(args) -> int:
    family = _family(args)
    grid = make_reference_grid(family, args.grid_size)
    rows = []
    for h in args.heights:
        radius = covering_radius(family, h, grid, pool_height=args.pool_height)
        rows.append({"height_bound": h, "radius": radius})
    out = ExperimentReport(
        command="covering",
        config=_config_echo(args),
        columns=["height_bound", "radius"],
        rows=rows,
        summary={"grid_size": args.grid_size},
    )
    out.write(args.out, args.format)
    return EXIT_OK


def cmd_variety(args) -> int:
    system = PolySystem.from_path(args.system)
    q = Modulus(args.q, args.mode)
    scale = LocalityScale(args.l, args.m)
    report = variety_points(system, q, scale, budget=args.budget)
    out = ExperimentReport(
        command="variety",
        config=_config_echo(args),
        columns=["point"],
        rows=report.to_rows(),
        summary={
            "points": len(report.points),
            "spurious": report.spurious,
            "tuples_checked": report.tuples_checked,
            "value_height_bound": report.value_height_bound,
            "window_guaranteed": report.window_guaranteed,
        },
    )
    out.write(args.out, args.format)
    return EXIT_OK if report.spurious == 0 else EXIT_NEGATIVE


def cmd_eval(args) -> int:
    from .logic import required_modulus
    from .residues import next_prime

    formula = _load_formula(args)
    if args.mode == "finite":
        if args.l is None:
            raise Error("finite mode needs --l")
        q_value = args.q if args.q is not None else next_prime(required_modulus(formula, args.l) + 1)
        value = eval_finite(formula, Modulus(q_value), args.l, sample=_sample_arg(args))
    else:
        if args.height is None:
            raise Error("limit mode needs --height")
        value = eval_limit(formula, args.height)
    print(fraction_str(value))
    return EXIT_OK


def cmd_los(args) -> int:
    formula = _load_formula(args)
    ladder = PrimeLadder.for_formula(formula, args.ls, q_floor=args.q_start, growth=args.growth)
    report = los_scan(formula, ladder, args.limit_height)
    out = ExperimentReport(
        command="los",
        config=_config_echo(args),
        columns=["q", "l", "m", "value_num", "value_den", "gap_num", "gap_den"],
        rows=report.to_rows(),
        summary={
            "limit_value": report.limit_value,
            "final_gap": report.final_gap,
            "non_convergent": report.non_convergent,
        },
    )
    out.write(args.out, args.format)
    return EXIT_OK if not report.non_convergent else EXIT_NEGATIVE


_COMMANDS = {
    "decode": cmd_decode,
    "encode": cmd_encode,
    "dist": cmd_dist,
    "audit-metric": cmd_audit_metric,
    "group-hom": cmd_group_hom,
    "covering": cmd_covering,
    "variety": cmd_variety,
    "eval": cmd_eval,
    "los": cmd_los,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # splice config tokens after the subcommand so explicit flags override them
    if "--config" in argv:
        idx = argv.index("--config")
        if idx + 1 >= len(argv):
            print("error: --config needs a path", file=sys.stderr)
            return EXIT_ERROR
        path = argv[idx + 1]
        rest = argv[:idx] + argv[idx + 2:]
        if not rest or rest[0].startswith("-"):
            print("error: --config must follow a subcommand", file=sys.stderr)
            return EXIT_ERROR
        try:
            config_tokens = read_config(path)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ERROR
        except Error as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ERROR
        argv = [rest[0]] + config_tokens + rest[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Error as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
