"""Command-line front end.

Exit codes: 0 ok, 1 validation failure, 2 solver mismatch or failed check, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .scalarseries import qstr
from .tpoly import HbarSeries, mono_text

EXIT_OK, EXIT_INVALID, EXIT_MISMATCH, EXIT_IO = 0, 1, 2, 3
SOLVERS = ("direct", "cutjoin", "virasoro")
OPERATORS = ("W", "W_V", "L", "K", "H", "r")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def load_config(ref: str):
    """Parse a JSON config from a path, or a bundled preset by name."""
    from .giventaldata import GiventalData, ValidationError, validate
    from .presets import NAMES, preset_text

    path = Path(ref)
    if path.is_file():
        try:
            text = path.read_text()
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot read {ref}: {exc}") from None
    elif ref in NAMES:
        text = preset_text(ref)
    else:
        raise CliError(EXIT_IO, f"config {ref} not found (presets: {', '.join(NAMES)})")
    try:
        d = GiventalData.from_json(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INVALID, f"{ref}: invalid JSON: {exc}") from None
    except ValueError as exc:
        raise CliError(EXIT_INVALID, f"{ref}: {exc}") from None
    rep = validate(d)
    if not rep.ok:
        raise CliError(EXIT_INVALID, f"{ref}: {ValidationError(rep)}")
    return d


def series_rows(Z: HbarSeries):
    for m, mono, c in Z.rows():
        yield m, mono_text(mono), c


def render_json(Z: HbarSeries, meta: dict) -> str:
    doc = dict(meta)
    doc["coefficients"] = [
        {"hbar_order": m, "monomial": text, "value": qstr(c)} for m, text, c in series_rows(Z)
    ]
    return json.dumps(doc, indent=2) + "\n"


def render_csv(Z: HbarSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["hbar_order", "monomial", "numerator", "denominator"])
    for m, text, c in series_rows(Z):
        w.writerow([m, text, int(c.numerator), int(c.denominator)])
    return buf.getvalue()


def write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from None


def run_solver(name: str, d, K: int):
    from .cutjoin import build_cut_and_join, run_recursion
    from .giventaldata import direct_ancestor_potential
    from .virasoro import solve_from_constraints

    if name == "direct":
        return direct_ancestor_potential(d, K), None
    if name == "cutjoin":
        w = build_cut_and_join(d, K)
        return run_recursion(w, K), w
    if name == "virasoro":
        return solve_from_constraints(d, K), None
    raise CliError(EXIT_INVALID, f"unknown solver {name}")


def cmd_compute(args) -> int:
    d = load_config(args.config)
    K = d.order_K if args.order is None else args.order
    names = SOLVERS if args.solver == "all" else (args.solver,)
    results, cutjoin_op = {}, None
    for name in names:
        Z, w = run_solver(name, d, K)
        results[name] = Z
        if w is not None:
            cutjoin_op = w
    Z = results[names[0]]
    meta = {"solver": args.solver, "order_K": K, "backend": _backend()}
    verdict = None
    if args.solver == "all":
        mismatches = []
        for name in names[1:]:
            diff = Z.first_difference(results[name])
            if diff is not None:
                mismatches.append(f"{names[0]} vs {name}: hbar^{diff[0]} {mono_text(diff[1])}: "
                                  f"{qstr(diff[2])} vs {qstr(diff[3])}")
        verdict = "match" if not mismatches else "mismatch"
        meta["verdict"] = verdict
        if mismatches:
            meta["mismatches"] = mismatches
    if args.format == "json":
        if cutjoin_op is not None:
            meta["cut_and_join"] = cutjoin_op.export_lines()
        text = render_json(Z, meta)
    else:
        text = render_csv(Z)
        if cutjoin_op is not None and args.out not in (None, "-"):
            write_text(str(Path(args.out).with_suffix(".cutjoin.txt")), cutjoin_op.export_text())
    write_text(args.out, text)
    if verdict is not None:
        sys.stderr.write(f"verdict: {verdict}\n")
        for line in meta.get("mismatches", []):
            sys.stderr.write(line + "\n")
        if verdict != "match":
            return EXIT_MISMATCH
    return EXIT_OK


def cmd_check(args) -> int:
    from .checks import run_suite

    d = None if args.suite == "commutators" else load_config(args.config)
    K = args.order if args.order is not None else (d.order_K if d is not None else 3)
    results = run_suite(args.suite, d, K)
    text = "".join(r.line() + "\n" for r in results)
    write_text(args.out, text)
    return EXIT_OK if all(r.ok for r in results) else EXIT_MISMATCH


def inspect_operator(d, which: str, K: int, sector: int, m: int) -> str:
    from .cutjoin import assemble_W_V, build_cut_and_join, recursion_window
    from .giventaldata import r_hat_operator
    from .modeops import WindowSpec
    from .virasoro import build_H, build_K_family, build_L_family

    window = WindowSpec(max_ann=d.degree_slope * max(K, 1))
    if which == "W":
        return build_cut_and_join(d, K).export_text()
    if which == "W_V":
        return assemble_W_V(d, recursion_window(d, K)).dump() + "\n"
    if which == "r":
        return r_hat_operator(d, window).dump() + "\n"
    if which == "H":
        return build_H(d, window).dump() + "\n"
    fam = build_L_family(d, None, window)
    if which == "L":
        if (sector, m) not in fam.ops:
            raise CliError(EXIT_INVALID, f"L[{sector}][{m}] is outside the built family")
        return fam[(sector, m)].dump() + "\n"
    _, ktilde = build_K_family(fam, d)
    if (sector, m) not in ktilde:
        raise CliError(EXIT_INVALID, f"K~[{sector}][{m}] is outside the built family")
    return ktilde[(sector, m)].dump() + "\n"


def cmd_inspect(args) -> int:
    d = load_config(args.config)
    K = d.order_K if args.order is None else args.order
    write_text(args.out, inspect_operator(d, args.operator, K, args.sector, args.index))
    return EXIT_OK


def _backend() -> str:
    from .kernels import BACKEND

    return BACKEND


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ancestor", description="Exact cut-and-join and Virasoro solvers")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute Z through hbar^K")
    c.add_argument("--config", required=True, help="JSON config path or preset name")
    c.add_argument("--solver", choices=SOLVERS + ("all",), default="direct")
    c.add_argument("--order", type=int, default=None)
    c.add_argument("--out", default=None)
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.set_defaults(func=cmd_compute)

    k = sub.add_parser("check", help="run a verification suite")
    k.add_argument("--config", default="airy")
    k.add_argument("--suite", required=True, choices=("commutators", "virasoro", "virtos", "dimension",
                                                      "window-stability"))
    k.add_argument("--order", type=int, default=None)
    k.add_argument("--out", default=None)
    k.set_defaults(func=cmd_check)

    i = sub.add_parser("inspect", help="dump an operator")
    i.add_argument("--config", required=True)
    i.add_argument("--operator", choices=OPERATORS, default="W")
    i.add_argument("--order", type=int, default=None)
    i.add_argument("--sector", type=int, default=1)
    i.add_argument("--index", type=int, default=0, help="m for L, level k for K")
    i.add_argument("--out", default=None)
    i.set_defaults(func=cmd_inspect)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "order", None) is not None and args.order < 0:
        sys.stderr.write("error: --order must be non-negative\n")
        return EXIT_INVALID
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
