"""Command-line entry point.

Subcommands: analyze, criteria, trace, converge, basis-check.  Reports are
JSON (sorted keys, shortest round-trip floats) so identical runs produce
identical bytes; --format csv emits the flat (shell, sum) or (index,
singular value) tables instead.

Exit codes: 0 success, 2 usage/config error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .criteria import (
    CriterionPreconditionError,
    check_hilbert_schmidt,
    check_sr_sigma,
    check_sr_small,
    check_trace_class_positive,
    default_sigma,
    sigma_lower_bound,
)
from .hermite import default_quadrature_order, gauss_hermite_rule, hermite_table
from .multiindex import TruncationSpec
from .operator import assemble_matrix
from .schatten import build_report, hilbert_schmidt_direct, spectral_trace, trace_formula
from .symbol import SymbolError, SymbolSpec, builtin_symbol, load_symbol, symbol_to_dict

SCHEMA_VERSION = 1


class ConfigError(Exception):
    pass


def _parse_params(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"--param expects name=value, got {pair!r}")
        key, _, val = pair.partition("=")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise ConfigError(f"--param {key.strip()}: {val!r} is not a number") from None
    return out


def _parse_levels(text: str) -> list[int]:
    try:
        levels = [int(s) for s in text.split(",")]
    except ValueError:
        raise ConfigError(f"--level expects integers, got {text!r}") from None
    if any(n < 0 for n in levels):
        raise ConfigError("levels must be non-negative")
    return levels


def _parse_rs(text: str) -> list[float]:
    try:
        rs = [float(s) for s in text.split(",")]
    except ValueError:
        raise ConfigError(f"--r expects numbers, got {text!r}") from None
    if any(r <= 0 for r in rs):
        raise ConfigError("every r must be positive")
    return rs


def _load_symbol(args) -> SymbolSpec:
    if args.symbol and args.builtin:
        raise ConfigError("--symbol and --builtin are mutually exclusive")
    if args.symbol:
        try:
            return load_symbol(args.symbol)
        except FileNotFoundError:
            raise ConfigError(f"symbol file not found: {args.symbol}") from None
        except SymbolError as exc:
            raise ConfigError(f"bad symbol file {args.symbol}: {exc}") from exc
    if args.builtin:
        try:
            return builtin_symbol(args.builtin, args.dim, **_parse_params(args.param))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError("a symbol is required: pass --symbol FILE or --builtin NAME")


def _quad_order(args, level: int) -> int:
    q = args.quad if args.quad is not None else default_quadrature_order(level)
    if q < level + 1:
        raise ConfigError(f"quadrature order {q} must be at least N+1 = {level + 1}")
    return q


def _echo_config(args, sym: SymbolSpec | None = None) -> dict:
    # the output path is not provenance: the same analysis written to two
    # files must produce identical bytes
    echo = {k: v for k, v in vars(args).items()
            if k not in ("func", "output") and v is not None}
    if sym is not None:
        echo["symbol"] = symbol_to_dict(sym)
    return echo


def _emit(doc: dict, args, csv_rows=None, csv_header=None) -> None:
    if args.format == "csv" and csv_rows is not None:
        lines = [",".join(csv_header)] + [",".join(repr(v) for v in row) for row in csv_rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    sym = _load_symbol(args)
    level = _parse_levels(args.level)
    if len(level) != 1:
        raise ConfigError("analyze expects a single --level")
    spec = TruncationSpec(args.dim, level[0])
    q = _quad_order(args, spec.level)
    report = build_report(sym, spec, q, r_values=tuple(_parse_rs(args.r)))
    doc = {
        "schema_version": SCHEMA_VERSION,
        "software_version": __version__,
        "command": "analyze",
        "config": _echo_config(args, sym),
        "report": report.to_dict(),
    }
    rows = list(enumerate(float(s) for s in report.singular_values))
    _emit(doc, args, csv_rows=rows, csv_header=("index", "singular_value"))
    return 0


def cmd_criteria(args) -> int:
    sym = _load_symbol(args)
    level = _parse_levels(args.level)
    if len(level) != 1:
        raise ConfigError("criteria expects a single --level")
    spec = TruncationSpec(args.dim, level[0])
    q = _quad_order(args, spec.level)
    verdicts = []
    for r in _parse_rs(args.r):
        if r == 2.0:
            verdicts.append(check_hilbert_schmidt(sym, spec, q))
        elif r <= 1.0:
            verdicts.append(check_sr_small(sym, spec, q, r=r))
            if r == 1.0 and sym.claims_positive_selfadjoint:
                verdicts.append(check_trace_class_positive(sym, spec, q))
        elif r < 2.0:
            sigma = args.sigma if args.sigma is not None else default_sigma(spec.dim, r)
            if sigma <= sigma_lower_bound(spec.dim, r):
                raise ConfigError(
                    f"sigma = {sigma} is inadmissible for r = {r}: "
                    f"need sigma > n(1/r - 1/2) = {sigma_lower_bound(spec.dim, r)}"
                )
            verdicts.append(check_sr_sigma(sym, spec, q, r=r, sigma=sigma))
        else:
            raise ConfigError(f"no criterion applies for r = {r} > 2")
    doc = {
        "schema_version": SCHEMA_VERSION,
        "software_version": __version__,
        "command": "criteria",
        "config": _echo_config(args, sym),
        "verdicts": [v.to_dict() for v in verdicts],
    }
    rows = [(v.criterion, s, val) for v in verdicts for s, val in v.shells]
    _emit(doc, args, csv_rows=rows, csv_header=("criterion", "shell", "sum"))
    return 0


def cmd_trace(args) -> int:
    sym = _load_symbol(args)
    level = _parse_levels(args.level)
    if len(level) != 1:
        raise ConfigError("trace expects a single --level")
    spec = TruncationSpec(args.dim, level[0])
    q = _quad_order(args, spec.level)
    m = assemble_matrix(sym, spec, q)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "software_version": __version__,
        "command": "trace",
        "config": _echo_config(args, sym),
        "formula_trace": trace_formula(sym, spec, q),
        "spectral_trace": spectral_trace(m),
        "matrix_trace": m.trace(),
        "assembly_residual": m.assembly_residual,
        "residual_warning": m.residual_warning,
    }
    _emit(doc, args)
    return 0


def cmd_converge(args) -> int:
    sym = _load_symbol(args)
    levels = _parse_levels(args.level)
    if len(levels) < 2 or any(b <= a for a, b in zip(levels, levels[1:])):
        raise ConfigError("converge expects an ascending comma-separated --level list")
    rows = []
    for n in levels:
        spec = TruncationSpec(args.dim, n)
        q = _quad_order(args, n)
        if args.quantity == "trace":
            val = trace_formula(sym, spec, q)
        else:
            val = hilbert_schmidt_direct(sym, spec, q)
        rows.append((n, val))
    diffs = [rows[i + 1][1] - rows[i][1] for i in range(len(rows) - 1)]
    doc = {
        "schema_version": SCHEMA_VERSION,
        "software_version": __version__,
        "command": "converge",
        "config": _echo_config(args, sym),
        "quantity": args.quantity,
        "values": [[n, v] for n, v in rows],
        "successive_differences": diffs,
    }
    _emit(doc, args, csv_rows=rows, csv_header=("level", args.quantity))
    return 0


def cmd_basis_check(args) -> int:
    levels = _parse_levels(args.level)
    if len(levels) != 1:
        raise ConfigError("basis-check expects a single --level")
    n_level = levels[0]
    q = _quad_order(args, n_level)
    rule = gauss_hermite_rule(q)
    # weight-free values paired with the e^(-x^2) weights: the Gram matrix of
    # the first N+1 functions, exact up to rounding for Q >= N+1
    table = hermite_table(n_level, rule.nodes, weighted=False)
    gram = (table * rule.weights) @ table.T
    residual = float(np.abs(gram - np.eye(n_level + 1)).max())
    doc = {
        "schema_version": SCHEMA_VERSION,
        "software_version": __version__,
        "command": "basis-check",
        "config": _echo_config(args),
        "level": n_level,
        "quad_order": q,
        "orthonormality_residual": residual,
    }
    _emit(doc, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hspec",
        description="Pseudo-multipliers of the quantum harmonic oscillator: "
        "truncated matrices, Schatten criteria, trace formulas.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_symbol=True):
        if needs_symbol:
            p.add_argument("--symbol", help="symbol file (JSON)")
            p.add_argument("--builtin", help="builtin family: power, heat, bandlimit")
            p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                           help="builtin family parameter (repeatable)")
        p.add_argument("--dim", type=int, default=1, help="ambient dimension n")
        p.add_argument("--level", default="10",
                       help="level cutoff N (comma-separated list for converge)")
        p.add_argument("--quad", type=int, help="quadrature order (default N+32)")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("analyze", help="assemble the operator and report its spectrum")
    common(p)
    p.add_argument("--r", default="1,2", help="comma-separated Schatten orders")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("criteria", help="evaluate the Schatten membership criteria")
    common(p)
    p.add_argument("--r", default="1,2", help="comma-separated Schatten orders")
    p.add_argument("--sigma", type=float, help="weight exponent for 1 < r < 2")
    p.set_defaults(func=cmd_criteria)

    p = sub.add_parser("trace", help="compare the trace formula with the eigenvalue sum")
    common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("converge", help="sweep the level cutoff and report differences")
    common(p)
    p.add_argument("--quantity", choices=("trace", "hs"), default="trace")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("basis-check", help="orthonormality residual of the basis")
    common(p, needs_symbol=False)
    p.set_defaults(func=cmd_basis_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.dim < 1:
            raise ConfigError("--dim must be at least 1")
        return args.func(args)
    except (ConfigError, SymbolError, CriterionPreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
