"""Command-line front end.

Exit codes: 0 success, 1 input/usage error, 2 no compatible branch,
3 symmetry verdict false, 4 comparison or threshold failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import numerics, report
from .ars import analyze
from .odefile import OdeFileError, OdeSpec, load
from .parsing import ParseError
from .symmetry import VectorField, is_symmetry, structure_constants
from .transforms import InvariantPair, compare_equations, hodograph_raise, invert_dependent, reduction_residual

EXIT_OK, EXIT_INPUT, EXIT_NO_BRANCH, EXIT_NOT_SYMMETRY, EXIT_MISMATCH = 0, 1, 2, 3, 4

DEFAULT_TERMS = 8
RESIDUAL_TOL = 1e-6
PATH_RTOL = 1e-6
BARRIER_DIRECTIONS = 16


class UsageError(Exception):
    pass


def _assignments(text: str) -> Dict[str, str]:
    out = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise UsageError(f"expected name=expression, got {part!r}")
        out[key.strip()] = value.strip()
    return out


def _constants(items: Sequence[str]) -> Dict[int, Fraction]:
    out = {}
    for item in items:
        for part in item.split(","):
            if not part.strip():
                continue
            k, sep, v = part.partition("=")
            if not sep:
                raise UsageError(f"expected index=value, got {part!r}")
            out[int(k.strip())] = Fraction(v.strip())
    return out


def _complex(text: str) -> complex:
    return complex(text.strip().replace("i", "j").replace(" ", ""))


# -- subcommands ----------------------------------------------------------------


def cmd_analyze(args) -> int:
    spec = load(args.file)
    rep = analyze(spec.equation(), args.terms, _constants(args.constants))
    text = report.dumps(report.report_to_dict(rep, spec.dep, spec.indep))
    if args.json:
        Path(args.json).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if rep.any_compatible else EXIT_NO_BRANCH


def cmd_symmetry(args) -> int:
    spec = load(args.file)
    delta = spec.equation()
    fields: List[VectorField] = []
    for text in args.field:
        parts = _assignments(text)
        if set(parts) != {"xi", "eta"}:
            raise UsageError(f"field needs exactly xi=... and eta=..., got {text!r}")
        try:
            fields.append(VectorField.from_strings(parts["xi"], parts["eta"], spec.dep, spec.indep))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if not fields:
        raise UsageError("supply at least one --field")
    all_true = True
    for i, f in enumerate(fields, start=1):
        ok, cert = is_symmetry(f, delta)
        all_true &= ok
        line = f"X{i}: {f.to_str(spec.dep, spec.indep)}: {'symmetry' if ok else 'NOT a symmetry'}"
        if not ok:
            line += f"; obstruction {cert.to_str(spec.dep, spec.indep)}"
        print(line)
    if args.table:
        table = structure_constants(fields)
        for (i, j), coords in sorted(table.brackets.items()):
            if coords is None:
                rhs = "not in span"
            else:
                terms = [f"{c}*X{k + 1}" if c != 1 else f"X{k + 1}" for k, c in enumerate(coords) if c]
                rhs = " + ".join(terms) or "0"
            print(f"[X{i + 1}, X{j + 1}] = {rhs}")
        print("closed" if table.closed else "not closed")
    return EXIT_OK if all_true else EXIT_NOT_SYMMETRY


def cmd_transform(args) -> int:
    spec = load(args.file)
    delta = spec.equation()
    if args.invert_dep:
        out = invert_dependent(delta)
        new = OdeSpec.from_poly(spec.name + "_inv", out, "w", spec.indep, derived_from=spec.name)
    else:
        if delta.max_jet_order != 2:
            raise UsageError("--hodograph-raise needs a second-order equation")
        out = hodograph_raise(delta)
        new = OdeSpec.from_poly(spec.name + "_raised", out, "Phi", "s", derived_from=spec.name)
    if args.out:
        Path(args.out).write_text(new.dumps())
    elif not args.diff_against:
        sys.stdout.write(new.dumps())
    if args.diff_against:
        other = load(args.diff_against)
        diff = compare_equations(out, other.equation(), other.dep, other.indep)
        print(
            json.dumps(
                {
                    "identical": diff.identical,
                    "only_transformed": [list(t) for t in diff.only_left],
                    "only_reference": [list(t) for t in diff.only_right],
                    "coefficient_changed": [list(t) for t in diff.changed],
                },
                indent=2,
            )
        )
        return EXIT_OK if diff.identical else EXIT_MISMATCH
    return EXIT_OK


def cmd_reduce_check(args) -> int:
    orig = load(args.file_orig)
    reduced = load(args.file_reduced)
    parts = _assignments(args.invariants)
    if len(parts) != 2:
        raise UsageError("--invariants needs exactly two assignments")
    keys = list(parts)
    r_key = reduced.indep if reduced.indep in parts else keys[0]
    w_key = reduced.dep if reduced.dep in parts else [k for k in keys if k != r_key][0]
    try:
        inv = InvariantPair(orig.parse(parts[r_key]), orig.parse(parts[w_key]), (r_key, w_key))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise UsageError(str(exc)) from exc
    ok, cert = reduction_residual(orig.equation(), inv, reduced.equation())
    if ok:
        print("reduction verified: residual reduces to 0")
        return EXIT_OK
    print(f"reduction FAILED; certificate: {cert.to_str(orig.dep, orig.indep)}")
    return EXIT_MISMATCH


def cmd_numcheck(args) -> int:
    spec = load(args.file)
    delta = spec.equation()
    data = json.loads(Path(args.series_from).read_text())
    series = None
    for entry in data.get("balances", []):
        if entry.get("compatible"):
            series = report.series_from_dict(entry)
            if series is not None:
                break
    if series is None:
        raise UsageError("analysis JSON holds no compatible series")
    order = delta.max_jet_order
    summary: Dict[str, object] = {}
    passed = True
    default_x = 4.0 if series.sign < 0 else 0.5

    points = [_complex(p) for p in args.points.split(",")] if args.points else []
    if points:
        if any(p == 0 for p in points):
            raise UsageError("points must avoid x = 0")
        res = numerics.residual_check(delta, series, points)
        summary["residual"] = {"points": [[p.real, p.imag] for p in points], "max_abs": res, "tol": RESIDUAL_TOL}
        passed &= res <= RESIDUAL_TOL

    traj = None
    if args.path:
        a, b = (_complex(v) for v in args.path.split(","))
        try:
            traj = numerics.integrate(
                delta, numerics.eval_series_jet(series, a, order - 1), a, b, min_origin_distance=1e-3
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        ref = numerics.eval_series_jet(series, b, 0)[0]
        rel = abs(traj.end_state[0] - ref) / abs(ref)
        summary["path"] = {
            "from": [a.real, a.imag],
            "to": [b.real, b.imag],
            "relative_error": rel,
            "tol": PATH_RTOL,
            "blow_up": traj.blow_up,
            "series_tail": numerics.series_tail(series, b),
        }
        passed &= (not traj.blow_up) and rel <= PATH_RTOL

    scan = None
    if args.barrier:
        x_a = _complex(args.path.split(",")[0]) if args.path else (points[0] if points else complex(default_x))
        dirs = [np.exp(2j * np.pi * k / BARRIER_DIRECTIONS) for k in range(BARRIER_DIRECTIONS)]
        scan = numerics.barrier_scan(delta, numerics.eval_series_jet(series, x_a, order - 1), x_a, dirs)
        summary["barrier"] = json.loads(numerics.scan_to_json(scan))

    # outputs land next to the analysis file unless --out says otherwise
    out = Path(args.out) if args.out else Path(args.series_from).resolve().parent
    out.mkdir(parents=True, exist_ok=True)
    (out / "numcheck.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    if traj is not None:
        (out / "trajectory.json").write_text(traj.to_json())
        (out / "trajectory.csv").write_text(traj.to_csv())
    if scan is not None:
        (out / "barrier.json").write_text(numerics.scan_to_json(scan))
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK if passed else EXIT_MISMATCH


# -- wiring ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="painleve-forge", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="ARS singularity analysis")
    p.add_argument("file")
    p.add_argument("--terms", type=int, default=DEFAULT_TERMS)
    p.add_argument("--constants", nargs="*", default=[], metavar="k=v")
    p.add_argument("--json", metavar="OUT")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("symmetry", help="verify point symmetries")
    p.add_argument("file")
    p.add_argument("--field", action="append", default=[], metavar="xi=...;eta=...")
    p.add_argument("--table", action="store_true")
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("transform", help="change of variables")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--invert-dep", action="store_true")
    g.add_argument("--hodograph-raise", action="store_true")
    p.add_argument("--out")
    p.add_argument("--diff-against")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("reduce-check", help="verify a reduction by invariants")
    p.add_argument("file_orig")
    p.add_argument("file_reduced")
    p.add_argument("--invariants", required=True, metavar="r=...;w=...")
    p.set_defaults(func=cmd_reduce_check)

    p = sub.add_parser("numcheck", help="numeric cross-validation of a series")
    p.add_argument("file")
    p.add_argument("--series-from", required=True, metavar="analysis.json")
    p.add_argument("--path", metavar="a,b")
    p.add_argument("--points", metavar="x1,x2,...")
    p.add_argument("--barrier", action="store_true")
    p.add_argument("--out", metavar="DIR")
    p.set_defaults(func=cmd_numcheck)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (OdeFileError, ParseError, UsageError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
