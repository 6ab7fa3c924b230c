"""Command-line interface: ``hermrepro <command> ...``.

Exit codes: 0 on success (negative verdicts included), 2 on bad input,
3 when an internal self-check fails.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog, families
from .algebra import format_rational, parse_rational
from .cascade import WindowError, basic_limit_samples, oracle_reproduces, samples_to_csv
from .construct import ConstructionCheckError, construct, load_template
from .reproduction import DEFAULT_KMAX, ReproductionError, certify, check_constants, infer_tau
from .symbol import MaskFormatError, load_mask, save_mask

_NEG = re.compile(r"^-\d+$|^-\d*\.\d+$|^-\d+/\d+$")


class InputError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read_mask(path: str):
    try:
        return load_mask(Path(path).read_bytes())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except MaskFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _vec(v) -> list:
    return [format_rational(x) for x in v]


def cmd_check(args) -> int:
    mask = _read_mask(args.mask)
    tau = args.tau
    note = None
    if tau is None:
        try:
            tau = infer_tau(mask)
        except ReproductionError as exc:
            tau = mask.tau_hint if mask.tau_hint is not None else Fraction(0)
            note = f"{exc}; residuals use tau {format_rational(tau)}"
    report = certify(mask, tau, kmax=args.max_degree)
    if note:
        report.notes.append(note)
    if mask.tau_hint is not None and args.tau is None and mask.tau_hint != tau and note is None:
        report.notes.append(f"inferred tau {format_rational(tau)} differs from mask hint "
                            f"{format_rational(mask.tau_hint)}")
    sys.stdout.write(_dump(report.to_dict()) if args.json else report.format_table() + "\n")
    return 0


def cmd_tau(args) -> int:
    mask = _read_mask(args.mask)
    try:
        tau = infer_tau(mask)
    except ReproductionError as exc:
        raise InputError(str(exc)) from None
    if args.json:
        sys.stdout.write(_dump({"tau": format_rational(tau),
                                "hint": None if mask.tau_hint is None else format_rational(mask.tau_hint)}))
    else:
        print(f"tau: {format_rational(tau)}")
    return 0


def _mask_tau(mask, given):
    if given is not None:
        return given
    if check_constants(mask).ok:
        return infer_tau(mask)
    return mask.tau_hint if mask.tau_hint is not None else Fraction(0)


def cmd_oracle(args) -> int:
    mask = _read_mask(args.mask)
    tau = _mask_tau(mask, args.tau)
    window = tuple(args.window) if args.window else None
    try:
        verdict = oracle_reproduces(mask, tau, args.degree, args.levels, window)
    except WindowError as exc:
        raise InputError(str(exc)) from None
    if args.json:
        out = {"passed": verdict.passed, "tau": format_rational(tau)}
        if not verdict.passed:
            out.update(degree=verdict.degree, level=verdict.level, index=verdict.index,
                       expected=_vec(verdict.expected), got=_vec(verdict.got))
        sys.stdout.write(_dump(out))
    else:
        print(f"{verdict.describe()} (degree {args.degree}, levels {args.levels}, "
              f"tau {format_rational(tau)})")
    return 0


def cmd_limit(args) -> int:
    mask = _read_mask(args.mask)
    tau = _mask_tau(mask, args.tau)
    try:
        samples = basic_limit_samples(mask, args.component, args.levels, tau)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(samples_to_csv(samples, mask.d, decimal=args.decimal), args.out)
    return 0


def _binding(text: str):
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"binding must look like name=p/q, got {text!r}")
    return name.strip(), _rational(value)


def cmd_construct(args) -> int:
    try:
        template = load_template(Path(args.template).read_bytes())
    except OSError as exc:
        raise InputError(f"cannot read {args.template}: {exc.strerror or exc}") from None
    except MaskFormatError as exc:
        raise InputError(f"{args.template}: {exc}") from None
    bindings = dict(args.bind or [])
    try:
        result = construct(template, args.tau, args.degree, bindings)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.out and result.mask is not None:
        Path(args.out).write_bytes(save_mask(result.mask))
    if args.json:
        sys.stdout.write(_dump(result.to_dict()))
        return 0
    print(f"status: {result.status}")
    if result.status == "infeasible":
        k, z, r = result.inconsistent_row
        where = f"binding {z}" if k == "bind" else f"degree {k}, z={z:+d}, component {r}"
        print(f"inconsistent equation: {where}")
        return 0
    print(f"equations: {result.constraints_used}")
    print(f"free parameters: {', '.join(result.free_names) if result.free_names else '-'}")
    width = max(len(n) for n in result.values) if result.values else 0
    for n, v in result.values.items():
        print(f"  {n.ljust(width)} = {format_rational(v)}")
    return 0


def _table(rows: dict) -> str:
    cells = {k: [format_rational(x) for x in row] for k, row in rows.items()}
    width = max(len(c) for row in cells.values() for c in row)
    kw = max(len(str(k)) for k in cells)
    return "".join(f"{str(k).rjust(kw)} | " + " ".join(c.rjust(width) for c in row) + "\n"
                   for k, row in cells.items())


def cmd_coeffs(args) -> int:
    try:
        return _coeffs(args)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise InputError(str(exc)) from None


def _coeffs(args) -> int:
    if args.gamma:
        k, shift = int(args.gamma[0]), _rational(args.gamma[1])
        values = families.gamma_table(k, shift).values
        if args.json:
            sys.stdout.write(_dump({"k": k, "shift": format_rational(shift), "gamma": _vec(values)}))
        else:
            sys.stdout.write(" ".join(format_rational(x) for x in values) + "\n")
        return 0
    if args.alpha1 is not None:
        table = (families.alpha1_closed if args.closed else families.alpha1)(args.alpha1)
    else:
        table = families.alpha2(args.alpha2)
    if args.json:
        sys.stdout.write(_dump({"family": table.family,
                                "rows": {str(k): _vec(r) for k, r in table.rows.items()}}))
    else:
        sys.stdout.write(_table(table.rows))
    return 0


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name, (_, defaults) in catalog.FAMILIES.items():
            ps = ", ".join(f"{k}={format_rational(v)}" for k, v in defaults.items())
            print(f"{name}: {ps}")
        return 0
    if args.family is None:
        raise InputError("catalog emit needs a family name")
    if args.template:
        if args.family not in catalog.TEMPLATES:
            raise InputError(f"no template for family {args.family!r}")
        _emit(_dump(catalog.TEMPLATES[args.family]), args.out)
        return 0
    params = {}
    try:
        for text in args.param or []:
            name, value = _binding(text)
            params[name] = value
        mask = catalog.build_family(args.family, params)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise InputError(str(exc)) from None
    _emit(save_mask(mask).decode(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hermrepro",
                                description="Exact polynomial-reproduction analysis of Hermite subdivision masks.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="certify the reproduction degree of a mask")
    c.add_argument("mask")
    c.add_argument("--tau", type=_rational)
    c.add_argument("--max-degree", type=int, default=DEFAULT_KMAX)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("tau", help="infer the parametrization of a mask")
    c.add_argument("mask")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_tau)

    c = sub.add_parser("oracle", help="run the cascade on monomials and compare exactly")
    c.add_argument("mask")
    c.add_argument("--degree", type=int, required=True)
    c.add_argument("--levels", type=int, default=3)
    c.add_argument("--window", type=int, nargs=2, metavar=("A", "B"))
    c.add_argument("--tau", type=_rational)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_oracle)

    c = sub.add_parser("limit", help="sample a basic limit function to CSV")
    c.add_argument("mask")
    c.add_argument("--component", type=int, default=1)
    c.add_argument("--levels", type=int, default=6)
    c.add_argument("--tau", type=_rational)
    c.add_argument("--out")
    c.add_argument("--decimal", action="store_true", help="17-significant-digit decimals instead of p/q")
    c.set_defaults(func=cmd_limit)

    c = sub.add_parser("construct", help="solve a template for a target reproduction degree")
    c.add_argument("--template", required=True)
    c.add_argument("--tau", type=_rational, default=Fraction(0))
    c.add_argument("--degree", type=int, required=True)
    c.add_argument("--bind", type=_binding, action="append", metavar="NAME=P/Q")
    c.add_argument("--out", help="write the constructed mask here")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("coeffs", help="print coefficient tables")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--alpha1", type=int, metavar="K")
    g.add_argument("--alpha2", type=int, metavar="K")
    g.add_argument("--gamma", nargs=2, metavar=("K", "SHIFT"))
    c.add_argument("--closed", action="store_true", help="alpha1 from the closed-form rules")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_coeffs)

    c = sub.add_parser("catalog", help="built-in scheme families")
    c.add_argument("action", choices=["emit", "list"])
    c.add_argument("family", nargs="?")
    c.add_argument("--param", action="append", metavar="NAME=P/Q")
    c.add_argument("--template", action="store_true", help="emit the construction template instead")
    c.add_argument("--out")
    c.set_defaults(func=cmd_catalog)

    for parser in [p, *sub.choices.values()]:
        parser._negative_number_matcher = _NEG
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConstructionCheckError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
