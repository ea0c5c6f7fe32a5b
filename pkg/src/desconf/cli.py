"""Command-line front end: ``desconf <subcommand> ...``.

Exit status: 0 success, 1 verification failure (disagreement or
counterexample), 2 usage or scale error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .desargues import (
    ConfigurationError,
    FiveCompressor,
    blockline_structure,
    config_from_json,
    config_to_json,
    label_str,
    lift_to_compressors,
    parse_label,
    section_compressor,
    self_conjugate_points,
)
from .enumeration import (
    CLOSED_FORMS,
    DEFAULT_LIMITS,
    Quantity,
    ScaleLimit,
    ScaleLimits,
    count_report,
    run_oracle,
)
from .field import FieldError, FieldSpec, make_field
from .geometry import GeometryError, hyperplane, projective_space, standard_hyperplane
from .suites import SUITES, run_suite
from .twoblock import classify_two_blocks


class UsageError(Exception):
    pass


def _field(args):
    if args.field_poly:
        spec = FieldSpec.parse(args.field_poly)
        if args.q is not None and spec.q != args.q:
            raise UsageError(f"--field-poly gives GF({spec.q}) but --q is {args.q}")
        return make_field(spec)
    if args.q is None:
        raise UsageError("--q is required")
    return make_field(args.q)


def _limits(args) -> ScaleLimits:
    return ScaleLimits.from_file(args.limits) if args.limits else DEFAULT_LIMITS


def _points(space, text: str):
    return [space.parse_point(p) for p in text.split(";") if p.strip()]


def _load_config(path: str, field_poly: str | None):
    with open(path) as fh:
        doc = json.load(fh)
    if field_poly:
        doc["field"] = field_poly
    return config_from_json(doc)


def cmd_count(args):
    quantities = list(Quantity) if args.quantity == "ALL" else [Quantity(args.quantity)]
    qs = args.q_list or ([args.q] if args.q is not None else None)
    if not qs:
        raise UsageError("--q is required")
    reports = [count_report(quant, q) for quant in quantities for q in qs]
    if args.format == "tsv":
        rows = ["quantity\tq\tclosed_form"]
        rows += [f"{r.quantity.value}\t{r.q}\t{r.closed_form}" for r in reports]
        return 0, "\n".join(rows) + "\n"
    docs = [r.to_json(timing=not args.no_timing) for r in reports]
    return 0, docs[0] if len(docs) == 1 else docs


def cmd_oracle(args):
    F = _field(args)
    through = None
    if args.through_point:
        n = 3 if args.quantity in ("TOTAL_SPATIAL", "SPATIAL_THROUGH_POINT") else 2
        through = projective_space(F, n).parse_point(args.through_point)
    report = run_oracle(args.quantity, F.q, through, jobs=args.jobs, limits=_limits(args))
    return (0 if report.agree else 1), report.to_json(timing=not args.no_timing)


def cmd_verify(args):
    F = _field(args) if args.suite != "identities" else None
    q = F.q if F else args.q
    result = run_suite(args.suite, q, seed=args.seed, samples=args.samples, field=F, limits=_limits(args))
    return (0 if result.passed else 1), result.to_json()


def cmd_section(args):
    F = _field(args)
    first = args.compressor.split(";")[0]
    space = projective_space(F, len(first.split(",")) - 1)
    S = FiveCompressor(tuple(_points(space, args.compressor)))
    if args.hyperplane:
        pi = hyperplane(space, [int(x) for x in args.hyperplane.split(",")])
    else:
        pi = standard_hyperplane(space)
    D = section_compressor(S, pi)
    doc = config_to_json(D)
    doc["compressor"] = S.to_json()
    return 0, doc


def cmd_lift(args):
    D = _load_config(args.config, args.field_poly)
    big = projective_space(D.host.field, D.host.n + 1)
    apex = _points(big, args.apex)
    if len(apex) != 2:
        raise UsageError("--apex takes exactly two points separated by ';'")
    S1, S2 = lift_to_compressors(D, parse_label(args.vertex), *apex)
    return 0, {"vertex": args.vertex, "compressors": [S1.to_json(), S2.to_json()]}


def cmd_inspect(args):
    D = _load_config(args.config, args.field_poly)
    structure = blockline_structure(D)
    return 0, {
        "q": D.host.q,
        "n": D.host.n,
        "spatial": D.spatial,
        "self_conjugate": [label_str(l) for l in sorted(self_conjugate_points(D))],
        "blockline_structure": {
            label_str(t): sorted(label_str(p) for p in s) for t, s in structure.subsets.items()
        },
    }


def cmd_twoblock(args):
    t0 = time.perf_counter()
    report = classify_two_blocks()
    doc = report.to_json()
    if not args.no_timing:
        doc["elapsed_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return 0, doc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="field order")
    common.add_argument("--field-poly", help='field spec such as "2^2/1,1,1"')
    common.add_argument("--output", "-o", help="write the document here instead of stdout")
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--no-timing", action="store_true", help="omit elapsed times")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--limits", help="key=value file overriding scale limits")

    parser = argparse.ArgumentParser(prog="desconf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="closed-form counts")
    p.add_argument("--quantity", required=True, choices=[q.value for q in CLOSED_FORMS] + ["ALL"])
    p.add_argument("--qs", dest="q_list", type=int, nargs="+", help="several orders (count matrix)")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("oracle", parents=[common], help="brute-force count against the closed form")
    p.add_argument("--quantity", required=True, choices=[q.value for q in CLOSED_FORMS])
    p.add_argument("--through-point", help="fixed point for through-point counts, e.g. 0,0,1")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", parents=[common], help="run a property suite")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--samples", type=int, default=10_000)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("section", parents=[common], help="section a 5-compressor by a hyperplane")
    p.add_argument("--compressor", required=True, help="five points separated by ';'")
    p.add_argument("--hyperplane", help="equation coefficients, default last coordinate = 0")
    p.set_defaults(func=cmd_section)

    p = sub.add_parser("lift", parents=[common], help="the two 5-compressors over a configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--vertex", required=True, help="pair label such as 12")
    p.add_argument("--apex", required=True, help="two points one dimension up, separated by ';'")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("inspect", parents=[common], help="SC points and blockline structure")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("twoblock", parents=[common], help="tangential 2-block census of PG(3,2)")
    p.set_defaults(func=cmd_twoblock)
    return parser


def _emit(doc, args) -> None:
    text = doc if isinstance(doc, str) else json.dumps(doc, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        status, doc = args.func(args)
    except (UsageError, ScaleLimit, FieldError, GeometryError, ConfigurationError, ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    _emit(doc, args)
    return status


if __name__ == "__main__":
    sys.exit(main())
