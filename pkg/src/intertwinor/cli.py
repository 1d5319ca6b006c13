"""Command-line front end: spectrum tables and verification suites.

Exit codes: 0 success / all checks pass, 1 failed check or unwritable
output, 2 invalid configuration.  Output is byte-deterministic for a given
flag set; floats are printed with 17 significant digits and '.' decimal.

Singular table entries are first-class values, rendered as "pole" (closed
form undefined) or "zero-denominator" (recursion blocked), never as NaN.
"""

from __future__ import annotations

import argparse
import json
import sys

from .closedform import PoleAtKType, factorized_eigenvalue, z_gamma_ratio, z_spectral
from .geometry import KType, Signature, doubled_shifts
from .spectrum import SpectralOrder, base_ktype, recursion_spectrum
from .verify import DEFAULT_CHECKS, run_suite

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "j", "k", "J", "K", "parity",
    "mu_recursion", "mu_closed_form", "mu_factorized_or_blank",
    "max_rel_disagreement",
)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intertwinor",
        description="Eigenvalues of conformally invariant operators on S^p x S^q.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--p", type=int, required=True, help="dimension of the first sphere")
        sp.add_argument("--q", type=int, required=True, help="dimension of the second sphere")
        sp.add_argument("--r", type=float, default=0.37, help="spectral order (operator order 2r)")
        sp.add_argument("--jmax", type=int, default=8)
        sp.add_argument("--kmax", type=int, default=8)

    spectrum = sub.add_parser("spectrum", help="tabulate eigenvalues by all methods")
    common(spectrum)
    spectrum.add_argument("--format", choices=("csv", "json"), default="csv")
    spectrum.add_argument("--output", default="-", help="output path, '-' for stdout")

    verify = sub.add_parser("verify", help="run identity checks")
    common(verify)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--all", action="store_true", help="run every check")
    verify.add_argument("--check", action="append", choices=DEFAULT_CHECKS,
                        help="run a named check (repeatable)")
    verify.add_argument("--output", default=None, help="write the JSON report bundle here")
    return parser


def _validate(parser, args) -> Signature:
    if args.p < 1 or args.q < 1:
        parser.error(f"sphere dimensions must satisfy p >= 1 and q >= 1, got ({args.p}, {args.q})")
    if args.jmax < 1 or args.kmax < 1:
        parser.error(f"truncation must satisfy jmax >= 1 and kmax >= 1, got ({args.jmax}, {args.kmax})")
    return Signature(args.p, args.q)


def _spectrum_rows(sig: Signature, order: SpectralOrder, jmax: int, kmax: int):
    tables = {
        parity: recursion_spectrum(sig, order, jmax, kmax, parity, on_singular="skip")
        for parity in (0, 1)
    }
    zbase = {}
    for parity in (0, 1):
        try:
            zbase[parity] = z_gamma_ratio(sig, order, base_ktype(parity))
        except PoleAtKType:
            zbase[parity] = None
    integer_r = order.is_positive_integer
    rows = []
    for j in range(jmax + 1):
        for k in range(kmax + 1):
            v = KType(j, k)
            tj, tk = doubled_shifts(sig, v)
            mu_rec = tables[v.parity].entries.get(v)
            try:
                mu_closed = z_spectral(sig, order, v)
            except PoleAtKType:
                mu_closed = None
            mu_fact = factorized_eigenvalue(sig, order.as_integer, v) if integer_r else ""
            disagreement = ""
            if mu_rec is not None and mu_closed is not None:
                normalized = None
                if integer_r:
                    base_val = z_spectral(sig, order, base_ktype(v.parity))
                    normalized = mu_closed / base_val if base_val else None
                elif zbase[v.parity]:
                    normalized = mu_closed / zbase[v.parity]
                if normalized is not None:
                    scale = max(abs(normalized), abs(mu_rec), 1e-300)
                    disagreement = abs(normalized - mu_rec) / scale
            rows.append({
                "j": j, "k": k,
                "J": tj / 2.0, "K": tk / 2.0,
                "parity": v.parity,
                "mu_recursion": "zero-denominator" if mu_rec is None else mu_rec,
                "mu_closed_form": "pole" if mu_closed is None else mu_closed,
                "mu_factorized_or_blank": mu_fact,
                "max_rel_disagreement": disagreement,
            })
    return rows


def cmd_spectrum(args, parser) -> int:
    sig = _validate(parser, args)
    order = SpectralOrder(args.r)
    rows = _spectrum_rows(sig, order, args.jmax, args.kmax)
    if args.format == "csv":
        lines = [",".join(CSV_COLUMNS)]
        for row in rows:
            lines.append(",".join(_fmt(row[c]) for c in CSV_COLUMNS))
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "p": sig.p, "q": sig.q, "r": order.r,
            "jmax": args.jmax, "kmax": args.kmax,
            "rows": rows,
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(args.output, "w", encoding="ascii") as handle:
                handle.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
            return 1
    return 0


def cmd_verify(args, parser) -> int:
    sig = _validate(parser, args)
    checks = tuple(args.check) if args.check else ()
    if args.all or not checks:
        checks = DEFAULT_CHECKS
    try:
        reports = run_suite(sig, args.r, jmax=args.jmax, kmax=args.kmax,
                            seed=args.seed, checks=checks)
    except PoleAtKType as exc:
        print(f"error: check cannot be evaluated: {exc}", file=sys.stderr)
        return 1
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        print(f"{rep.name}: max_residual={_fmt(rep.max_residual)} "
              f"tol={_fmt(rep.tolerance)} {status}")
    if args.output:
        bundle = {
            "schema_version": SCHEMA_VERSION,
            "reports": [rep.to_dict() for rep in reports],
        }
        try:
            with open(args.output, "w", encoding="ascii") as handle:
                json.dump(bundle, handle, indent=2, sort_keys=True)
                handle.write("\n")
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
            return 1
    return 0 if all(rep.passed for rep in reports) else 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "spectrum":
        return cmd_spectrum(args, parser)
    return cmd_verify(args, parser)


def entry():  # console-script hook
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
