"""Command-line interface.

Exit status: 0 pass or Certified, 1 fail or NotCertified, 2 usage error,
3 mathematical error (pole, domain, hypothesis, truncation), 4 input file error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .afe import AFEConfig, read_coefficients, verify_identity
from .certificates import (
    Certificate,
    certify_gld,
    certify_halfint_central,
    certify_hilbert,
    certify_modular,
    certify_siegel,
    rank_certificate,
)
from .errors import FormatError, LQuotError
from .families import (
    FamilyDatum,
    closed_form_higher,
    closed_form_higher_exact,
    closed_form_sum,
    closed_form_sum_exact,
)
from .polygamma import polygamma
from .precision import BigComplex, Precision
from .symbolic import psi_expr

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MATH, EXIT_FORMAT = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    precision_bits: int = 128
    tolerance_exponent: int | None = None
    data_paths: list[str] = field(default_factory=list)
    output_format: str = "text"

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("--prec must be at least 64")
        if self.tolerance_exponent is not None and self.tolerance_exponent > self.precision_bits // 2:
            raise ValueError(f"tolerance 2^-{self.tolerance_exponent} is not reachable at "
                             f"{self.precision_bits} bits")

    @property
    def precision(self) -> Precision:
        return Precision(self.precision_bits)


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: error: {message}")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _common(parser: argparse.ArgumentParser, top: bool) -> None:
    default = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--prec", type=int, default=default(128), help="precision in bits (default 128)")
    parser.add_argument("--format", choices=("text", "jsonl"), default=default("text"))
    parser.add_argument("--tol-exp", type=int, default=default(None), dest="tol_exp",
                        help="tolerance 2^-E for pass/fail checks")


def _datum_args(p: argparse.ArgumentParser, family: str | None = None) -> None:
    if family is None:
        p.add_argument("--family", required=True, choices=("gld", "modular", "hilbert", "siegel"))
    if family in (None, "gld", "modular"):
        p.add_argument("--N", type=int, default=1)
    if family in (None, "gld"):
        p.add_argument("--kappa", nargs="+", default=None)
    if family in (None, "modular", "hilbert", "siegel"):
        p.add_argument("--k", type=_rational, default=None)
    if family in (None, "modular"):
        p.add_argument("--D", type=int, default=1)
    if family in (None, "hilbert"):
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--dF", type=int, default=1)
        p.add_argument("--normN", type=int, default=1)
    if family in (None, "siegel"):
        p.add_argument("--g", type=int, default=None)


def _build_datum(args, family: str) -> FamilyDatum:
    if family == "gld":
        if not args.kappa:
            raise _Usage("gld data needs --kappa")
        return FamilyDatum.gld(args.N, args.kappa)
    if args.k is None:
        raise _Usage(f"{family} data needs --k")
    if family == "modular":
        return FamilyDatum.modular(args.k, args.N, args.D)
    if family == "hilbert":
        if args.n is None:
            raise _Usage("hilbert data needs --n")
        return FamilyDatum.hilbert(args.k, args.n, args.dF, args.normN)
    if args.g is None:
        raise _Usage("siegel data needs --g")
    return FamilyDatum.siegel(args.g, args.k)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lquot", description="Closed-form identities and certificates for "
                     "logarithmic derivatives of L-functions.")
    parser.add_argument("--version", action="version", version=f"lquot {__version__}")
    _common(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("psi", help="evaluate a polygamma value")
    _common(p, top=False)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--z", required=True)
    p.add_argument("--exact", action="store_true", help="print the exact reduction (rational z)")

    p = sub.add_parser("identity", help="check an identity numerically from coefficient data")
    _common(p, top=False)
    p.add_argument("--data", required=True, action="append")
    p.add_argument("--s0", required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--cutoff", type=float, default=1.25,
                   help="Mellin splitting point; t = 1 makes the check vacuous (default 1.25)")

    p = sub.add_parser("certify", help="issue a non-vanishing certificate")
    _common(p, top=False)
    csub = p.add_subparsers(dest="claim", required=True, parser_class=_Parser)
    c = csub.add_parser("gld")
    _common(c, top=False)
    _datum_args(c, "gld")
    c.add_argument("--s0", required=True)
    c = csub.add_parser("modular")
    _common(c, top=False)
    _datum_args(c, "modular")
    c.add_argument("--s0", required=True)
    c.add_argument("--branch", choices=("primary", "remark"), default="primary")
    c = csub.add_parser("halfint")
    _common(c, top=False)
    c.add_argument("--k", type=_rational, required=True)
    c.add_argument("--N", type=int, required=True)
    c = csub.add_parser("hilbert")
    _common(c, top=False)
    _datum_args(c, "hilbert")
    c.add_argument("--s0", required=True)
    c.add_argument("--min-disc", action="append", default=[], metavar="DEG=DISC",
                   help="override a minimal totally real discriminant")
    c = csub.add_parser("siegel")
    _common(c, top=False)
    _datum_args(c, "siegel")
    c.add_argument("--s0", required=True)

    p = sub.add_parser("rank", help="rank certificate for a set of identities")
    _common(p, top=False)
    _datum_args(p)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--J", default=None, help="comma-separated integers")
    p.add_argument("--s0", default=None)
    p.add_argument("--vary", choices=("N", "D", "normN"), default=None)

    p = sub.add_parser("closedform", help="evaluate a closed-form right-hand side")
    _common(p, top=False)
    _datum_args(p)
    p.add_argument("--s0", required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--exact", action="store_true")
    return parser


# ---------------------------------------------------------------------------

def _emit(cfg: RunConfig, out, record: dict, text: str) -> None:
    if cfg.output_format == "jsonl":
        record = dict(record, precision_bits=cfg.precision_bits)
        out.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")


def _cert_record(cmd: str, cert: Certificate) -> dict:
    data = cert.to_json()
    return {
        "command": cmd,
        "inputs": data["inputs"],
        "verdict": data["verdict"],
        "value": data["bound_value"],
        "bound": data["bound"],
        "margin": data["margin"],
        "details": data["details"],
        "assumptions": data["assumptions"],
    }


def _run_psi(args, cfg, out) -> int:
    inputs = {"m": args.m, "z": args.z}
    if args.exact:
        try:
            z = Fraction(args.z)
        except ValueError:
            raise _Usage("--exact needs a rational --z") from None
        expr = psi_expr(args.m, z)
        _emit(cfg, out, {"command": "psi", "inputs": inputs, "value": str(expr), "assumptions": []},
              str(expr))
        return EXIT_OK
    try:
        z = BigComplex(args.z, cfg.precision)
    except ValueError:
        raise _Usage(f"cannot parse --z {args.z!r}") from None
    value = polygamma(args.m, z, cfg.precision)
    _emit(cfg, out, {"command": "psi", "inputs": inputs, "value": value.to_string(25),
                     "assumptions": []}, value.to_string(25))
    return EXIT_OK


def _run_identity(args, cfg, out) -> int:
    status = EXIT_OK
    tol = 2.0 ** -cfg.tolerance_exponent if cfg.tolerance_exponent else args.tol
    config = AFEConfig(precision=cfg.precision, cutoff=args.cutoff)
    for path in args.data:
        cs = read_coefficients(path)
        report = verify_identity(cs, args.s0, args.m, config, tol)
        record = {
            "command": "identity",
            "inputs": {"data": path, "s0": args.s0, "m": args.m, "tol": tol},
            "residual": report.residual,
            "lhs": report.lhs.to_string(25),
            "rhs": report.rhs.to_string(25),
            "verdict": "pass" if report.passed else "fail",
            "assumptions": ["L(f, s0) != 0 (checked numerically)"],
        }
        _emit(cfg, out, record, str(report))
        if not report.passed:
            status = EXIT_FAIL
    return status


def _run_certify(args, cfg, out) -> int:
    prec = cfg.precision
    if args.claim == "gld":
        cert = certify_gld(_build_datum(args, "gld"), args.s0, prec)
    elif args.claim == "modular":
        cert = certify_modular(_build_datum(args, "modular"), args.s0, args.branch, prec)
    elif args.claim == "halfint":
        cert = certify_halfint_central(args.k, args.N, prec)
    elif args.claim == "hilbert":
        table = {}
        for item in args.min_disc:
            try:
                deg, disc = (int(x) for x in item.split("="))
            except ValueError:
                raise _Usage(f"--min-disc expects DEG=DISC, got {item!r}") from None
            table[deg] = disc
        cert = certify_hilbert(_build_datum(args, "hilbert"), args.s0, prec, table)
    else:
        cert = certify_siegel(_build_datum(args, "siegel"), args.s0, prec)
    _emit(cfg, out, _cert_record(f"certify {args.claim}", cert), cert.to_text())
    return EXIT_OK if cert.certified else EXIT_FAIL


def _run_rank(args, cfg, out) -> int:
    fd = _template(args)
    if args.q is not None:
        cert = rank_certificate(fd, q=args.q, prec=cfg.precision)
    else:
        if args.J is None or args.s0 is None:
            raise _Usage("rank needs --q, or both --J and --s0")
        try:
            J = [int(x) for x in args.J.split(",") if x.strip()]
        except ValueError:
            raise _Usage(f"--J expects comma-separated integers, got {args.J!r}") from None
        cert = rank_certificate(fd, J=J, s0=args.s0, vary=args.vary, prec=cfg.precision)
    _emit(cfg, out, _cert_record("rank", cert), cert.to_text())
    return EXIT_OK if cert.certified else EXIT_FAIL


def _template(args) -> FamilyDatum:
    return _build_datum(args, args.family)


def _run_closedform(args, cfg, out) -> int:
    fd = _template(args)
    inputs = {"datum": fd.to_text().strip().replace("\n", "; "), "s0": args.s0, "m": args.m}
    if args.exact:
        expr = (closed_form_sum_exact(fd, args.s0) if args.m == 0
                else closed_form_higher_exact(fd, args.s0, args.m))
        text = str(expr)
    else:
        value = (closed_form_sum(fd, args.s0, cfg.precision) if args.m == 0
                 else closed_form_higher(fd, args.s0, args.m, cfg.precision))
        text = value.to_string(25)
    _emit(cfg, out, {"command": "closedform", "inputs": inputs, "value": text, "assumptions": []}, text)
    return EXIT_OK


_COMMANDS = {
    "psi": _run_psi,
    "identity": _run_identity,
    "certify": _run_certify,
    "rank": _run_rank,
    "closedform": _run_closedform,
}


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = RunConfig(args.prec, args.tol_exp, getattr(args, "data", None) or [], args.format)
    except _Usage as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        err.write(f"lquot: error: {exc}\n")
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args, cfg, out)
    except _Usage as exc:
        err.write(f"lquot: error: {exc}\n")
        return EXIT_USAGE
    except FormatError as exc:
        err.write(f"lquot: format error: {exc}\n")
        return EXIT_FORMAT
    except OSError as exc:
        err.write(f"lquot: cannot read input: {exc}\n")
        return EXIT_FORMAT
    except (LQuotError, ArithmeticError, ValueError) as exc:
        err.write(f"lquot: {type(exc).__name__}: {exc}\n")
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
