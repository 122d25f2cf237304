"""Command line front end.

    freelines degrees  --d 4
    freelines classify --n 5 --degrees 4 --p 3
    freelines witness  --family cyclic --n 7 --d 6 --field 2 --scan-kmax 2
    freelines lines    --poly-file quartic.txt --n 5 --field 3 --census
    freelines report   --check report.json | --replay run.manifest.json

Every command prints one JSON document.  Exit status is 0 on success, 1 on
a domain error (an ``error`` document is printed) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

from . import __version__
from .gf import parse_field
from .linespace import freeness_census, line_count, lines_on_variety, lines_to_csv, LINE_LIMIT
from .mpoly import poly_parse
from .numerology import (
    CIProfile,
    bad_primes_index1,
    catalan,
    conic_degree,
    hypothesis_check,
    line_degree_D,
)
from .reports import SCHEMA_VERSION, digest, parse, render
from .witness import (
    CYCLIC,
    FERMAT,
    cyclic_witness,
    fermat,
    jacobian_singular_scan,
    random_ci,
    vanishing_components,
    witness_hypotheses,
)

_ARTIFACT_KEYS = ("json_out", "csv_out", "manifest", "config", "threads")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _doc(kind: str, **fields) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, **fields}


# -- subcommands -------------------------------------------------------------------


def cmd_degrees(args) -> tuple[dict, str | None]:
    d = args.d
    return (
        _doc(
            "degrees",
            d=d,
            catalan=catalan(d),
            conic_degree=conic_degree(d),
            bad_primes=bad_primes_index1(d),
            torsion_order_bound=line_degree_D((d,)),
        ),
        None,
    )


def cmd_classify(args):
    profile = CIProfile(args.n, tuple(args.degrees), args.p)
    return _doc("classify", **hypothesis_check(profile)), None


def cmd_witness(args):
    F = parse_field(args.field)
    n, d = args.n, args.d
    family = FERMAT if args.family == "fermat" else CYCLIC
    g = fermat(n, d, F) if family == FERMAT else cyclic_witness(n, d, F)
    equations = [g]
    if args.ci_degrees:
        profile = CIProfile(n, (d, *args.ci_degrees), F.p)
        equations = random_ci(profile, F, args.seed, witness_slot=0)
    verdict = jacobian_singular_scan(equations, n, F, args.scan_kmax, workers=args.threads)
    report = vanishing_components(g, family)
    doc = _doc(
        "witness",
        family=args.family,
        n=n,
        d=d,
        field=str(F),
        polynomial=g.render(),
        equations=[e.render() for e in equations],
        hypotheses=witness_hypotheses(family, n, d, F.p),
        smoothness=verdict.to_dict(),
        vanishing=report.to_dict(),
    )
    return doc, None


def _read_polys(path: str, n: int, F):
    polys = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            polys.append(poly_parse(line, n + 1, F))
    if not polys:
        raise ValueError(f"no polynomials in {path}")
    return polys


def cmd_lines(args):
    fields = [parse_field(f) for spec in args.field for f in spec.split(",")]
    base = fields[0]
    n = args.n
    polys = _read_polys(args.poly_file, n, base)
    for F in fields:
        if line_count(n, F.q) > LINE_LIMIT and not args.extended:
            raise ValueError(
                f"P^{n}(F_{F.q}) has {line_count(n, F.q)} lines (> {LINE_LIMIT}); pass --extended"
            )
    entries = []
    csv_text = None
    if args.census:
        reports = freeness_census(polys, n, fields, workers=args.threads, with_points=True, extended=True)
        entries = [r.to_dict() for r in reports]
        csv_text = lines_to_csv(reports[0].lines)
    else:
        for i, F in enumerate(fields):
            found = lines_on_variety(polys, n, F, workers=args.threads)
            if i == 0:
                csv_text = lines_to_csv(found)
            entries.append(
                {
                    "field": str(F),
                    "q": F.q,
                    "ambient_lines": line_count(n, F.q),
                    "total_lines_on_X": len(found),
                    "free_lines": None,
                    "splitting_histogram": None,
                    "point_census": None,
                }
            )
    doc = _doc(
        "lines",
        n=n,
        equations=[g.render() for g in polys],
        census=bool(args.census),
        reports=entries,
    )
    return doc, csv_text


def cmd_report(args):
    if args.check:
        return parse(Path(args.check).read_text()), None
    manifest = parse(Path(args.replay).read_text())
    if manifest["kind"] != "manifest":
        raise ValueError(f"{args.replay} is not a manifest")
    buf = io.StringIO()
    status = run(manifest["argv"], stdout=buf)
    outputs = []
    ok = status == 0 and digest(buf.getvalue()) == manifest["stdout_sha256"]
    for item in manifest["outputs"]:
        path = Path(item["path"])
        actual = digest(path.read_bytes()) if path.exists() else None
        match = actual == item["sha256"]
        ok &= match
        outputs.append({"path": item["path"], "expected": item["sha256"], "actual": actual, "match": match})
    doc = _doc("replay", manifest=args.replay, matches=bool(ok), outputs=outputs)
    return doc, None


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json-out", help="also write the JSON report here")
    common.add_argument("--csv-out", help="write lines on X as CSV rows (lines command)")
    common.add_argument("--threads", type=int, default=1, help="worker processes")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--manifest", help="write a replayable manifest here")
    common.add_argument("--config", help="JSON file of default option values")

    parser = argparse.ArgumentParser(prog="freelines", description="Free lines on complete intersections")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degrees", parents=[common], help="Catalan, conic degree and bad primes for index 1")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_degrees)

    p = sub.add_parser("classify", parents=[common], help="p-speciality and theorem hypotheses")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degrees", type=_int_list, required=True, help="comma-separated, e.g. 2,3")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("witness", parents=[common], help="build and certify a witness hypersurface")
    p.add_argument("--family", choices=["fermat", "cyclic"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--field", required=True, help='field designation such as "3", "9" or "2^3"')
    p.add_argument("--scan-kmax", type=int, default=1)
    p.add_argument("--ci-degrees", type=_int_list, help="extra random equations of these degrees")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("lines", parents=[common], help="enumerate lines on X and classify them")
    p.add_argument("--poly-file", required=True, help="one polynomial per line, '#' comments")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--field", action="append", required=True, help="repeatable; first one defines X")
    p.add_argument("--census", action="store_true", help="splitting types and point census")
    p.add_argument("--extended", action="store_true", help=f"allow more than {LINE_LIMIT} ambient lines")
    p.set_defaults(func=cmd_lines)

    p = sub.add_parser("report", parents=[common], help="validate a report or replay a manifest")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--check", help="report file to validate and re-render")
    g.add_argument("--replay", help="manifest file to replay")
    p.set_defaults(func=cmd_report)
    return parser


def _parse(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    # read --config first so it can supply values for required flags
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    pre.add_argument("command", nargs="?")
    known, _ = pre.parse_known_args(argv)
    choices = parser._subparsers._group_actions[0].choices
    if known.config and known.command in choices:
        try:
            defaults = json.loads(Path(known.config).read_text())
            if not isinstance(defaults, dict):
                raise ValueError("expected a JSON object")
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read config {known.config}: {exc}")
        sub = choices[known.command]
        dests = {a.dest: a for a in sub._actions}
        unknown = set(defaults) - set(dests) - {"help"}
        if unknown:
            parser.error(f"unknown config keys: {', '.join(sorted(unknown))}")
        for key in defaults:
            dests[key].required = False
        sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _write_manifest(args, argv: list[str], stdout_text: str, written: list[str]):
    clean_argv = []
    skip = False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--manifest":
            skip = True
            continue
        if tok.startswith("--manifest="):
            continue
        clean_argv.append(tok)
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",) + _ARTIFACT_KEYS}
    doc = _doc(
        "manifest",
        command=args.command,
        argv=clean_argv,
        parameters=params,
        artifact_version=__version__,
        seed=args.seed,
        stdout_sha256=digest(stdout_text),
        outputs=[{"path": p, "sha256": digest(Path(p).read_bytes())} for p in written],
    )
    Path(args.manifest).write_text(render(doc))


def run(argv: list[str] | None = None, stdout=None) -> int:
    """Run one command; returns the exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    out = stdout if stdout is not None else sys.stdout
    try:
        args = _parse(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        if args.threads < 1:
            raise ValueError("--threads must be >= 1")
        doc, csv_text = args.func(args)
        text = render(doc)
    except (ValueError, ArithmeticError, OSError) as exc:
        out.write(render(_doc("error", error=type(exc).__name__, message=str(exc))))
        return 1
    out.write(text)
    written = []
    if args.json_out:
        Path(args.json_out).write_text(text)
        written.append(args.json_out)
    if args.csv_out and csv_text is not None:
        Path(args.csv_out).write_text(csv_text)
        written.append(args.csv_out)
    if args.manifest:
        _write_manifest(args, argv, text, written)
    if doc["kind"] == "replay" and not doc["matches"]:
        return 1
    return 0


def main():
    sys.exit(run())
