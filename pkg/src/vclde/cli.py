"""Command-line front end.

Subcommands: green, solve, fundamental, expand, verify.  File payloads and
stdout are JSON (one document per run, stable key order) unless --pretty
selects the text rendering.  Errors print a single-line JSON object on
stderr with a distinct exit code per failure class:

    0  success            3  enumeration limit breached
    1  verification fail   4  missing forcing value
    2  parse/domain error

The environment variable VCLDE_ENUM_LIMIT overrides the enumeration guard
used by the leibnizian routes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Mapping

from . import scalar
from .coefficients import CoefficientModel, DomainError
from .hessenberg import HessenbergMatrix, StructureError, det_leibniz_oracle
from .leibnizian import EnumLimitError, det_leibnizian, enumerate_seps
from .lde import (
    GREEN_METHODS,
    SOLVE_METHODS,
    MissingForcingError,
    SolutionProblem,
    casorati,
    companion_product,
    evaluate_green,
    evaluate_solution,
)
from .nested_sum import SuperdiagonalError
from .scalar import render_scalar, scalar_from_json, scalar_to_json

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_LIMIT = 3
EXIT_MISSING_DATA = 4

EXPAND_ORDER_CAP = 12

ARITH_CHOICES = (scalar.RATIONAL, scalar.FLOAT64, scalar.SYMBOLIC)


def _enum_limit() -> int | None:
    raw = os.environ.get("VCLDE_ENUM_LIMIT")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"VCLDE_ENUM_LIMIT must be an integer, got {raw!r}")


def _read_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def load_coefficients(path: str, arith: str) -> CoefficientModel:
    """Build a model from a coefficient file under the given arithmetic."""
    doc = _read_json(path)
    if not isinstance(doc, Mapping):
        raise ValueError("coefficient file must be a JSON object")
    p = doc.get("p")
    if not isinstance(p, int) or isinstance(p, bool) or p < 1:
        raise ValueError(f"'p' must be a positive integer, got {p!r}")
    if arith == scalar.SYMBOLIC:
        return CoefficientModel.symbolic(p)
    kind = doc.get("kind")
    if kind == "table":
        raw_rows = doc.get("rows")
        if not isinstance(raw_rows, Mapping) or not raw_rows:
            raise ValueError("table coefficients need a non-empty 'rows' object")
        rows = {}
        for key, values in raw_rows.items():
            t = int(key)
            rows[t] = _parse_row(values, p, arith, f"rows[{key}]")
        return CoefficientModel.from_table(rows)
    if kind == "constant":
        return CoefficientModel.constant(
            _parse_row(doc.get("phi"), p, arith, "phi")
        )
    if kind == "periodic":
        period = doc.get("period")
        raw_rows = doc.get("rows")
        if not isinstance(period, int) or period < 1:
            raise ValueError(f"'period' must be a positive integer, got {period!r}")
        if not isinstance(raw_rows, list) or len(raw_rows) != period:
            raise ValueError("periodic coefficients need 'rows' with one row per phase")
        return CoefficientModel.periodic(
            [_parse_row(row, p, arith, f"rows[{idx}]") for idx, row in enumerate(raw_rows)]
        )
    raise ValueError(f"unknown coefficient kind {kind!r}")


def _parse_row(values, p: int, arith: str, where: str) -> tuple:
    if not isinstance(values, list) or len(values) != p:
        raise ValueError(f"{where} must be a list of exactly {p} values")
    return tuple(scalar_from_json(v, arith) for v in values)


def load_problem(path: str, arith: str, model: CoefficientModel) -> SolutionProblem:
    """Build a solution problem from a problem file.

    An absent or empty forcing object declares the equation homogeneous.
    """
    doc = _read_json(path)
    if not isinstance(doc, Mapping):
        raise ValueError("problem file must be a JSON object")
    s = doc.get("s")
    if not isinstance(s, int) or isinstance(s, bool):
        raise ValueError(f"'s' must be an integer, got {s!r}")
    init = _parse_row(doc.get("init"), model.p, arith, "init")
    raw_forcing = doc.get("forcing", {})
    if not isinstance(raw_forcing, Mapping):
        raise ValueError("'forcing' must be an object of t -> value")
    forcing = {int(key): scalar_from_json(v, arith) for key, v in raw_forcing.items()}
    return SolutionProblem(model, s, init, forcing or None)


def _emit(payload: dict, pretty_text: str | None, pretty: bool) -> None:
    if pretty and pretty_text is not None:
        print(pretty_text)
    else:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _error(kind: str, message: str, **extra) -> None:
    body = {"error": kind, "message": message}
    body.update(extra)
    print(json.dumps(body, sort_keys=True, separators=(",", ":")), file=sys.stderr)


def _load_model(args) -> CoefficientModel:
    if args.coeffs is not None:
        return load_coefficients(args.coeffs, args.arith)
    if args.arith == scalar.SYMBOLIC and getattr(args, "p", None) is not None:
        return CoefficientModel.symbolic(args.p)
    raise ValueError("need --coeffs (or --p in symbolic mode)")


def cmd_green(args) -> int:
    model = _load_model(args)
    value = evaluate_green(model, args.t, args.s, args.method, enum_limit=_enum_limit())
    payload = {
        "H": scalar_to_json(value),
        "arith": args.arith,
        "method": args.method,
        "s": args.s,
        "t": args.t,
    }
    _emit(payload, render_scalar(value), args.pretty)
    return EXIT_OK


def cmd_solve(args) -> int:
    model = _load_model(args)
    if args.arith == scalar.SYMBOLIC:
        if args.s is not None:
            s = args.s
        elif args.problem is not None:
            doc = _read_json(args.problem)
            s = doc.get("s")
            if not isinstance(s, int) or isinstance(s, bool):
                raise ValueError(f"'s' must be an integer, got {s!r}")
        else:
            raise ValueError("symbolic solve needs --s (or a problem file with 's')")
        problem = SolutionProblem.symbolic(model, s)
    else:
        if args.problem is None:
            raise ValueError("need --problem")
        problem = load_problem(args.problem, args.arith, model)
    value = evaluate_solution(problem, args.t, args.method, enum_limit=_enum_limit())
    payload = {
        "arith": args.arith,
        "s": problem.s,
        "t": args.t,
        "y": scalar_to_json(value),
    }
    _emit(payload, render_scalar(value), args.pretty)
    return EXIT_OK


def cmd_fundamental(args) -> int:
    model = _load_model(args)
    if args.t < args.s:
        raise DomainError(f"requires t >= s, got t={args.t}, s={args.s}")
    matrix = casorati(model, args.t, args.s)
    cas = matrix.casoratian()
    payload = {
        "arith": args.arith,
        "casoratian": scalar_to_json(cas),
        "matrix": [[scalar_to_json(v) for v in row] for row in matrix.entries],
        "p": model.p,
        "s": args.s,
        "t": args.t,
    }
    lines = ["  ".join(render_scalar(v) for v in row) for row in matrix.entries]
    lines.append(f"casoratian: {render_scalar(cas)}")
    _emit(payload, "\n".join(lines), args.pretty)
    return EXIT_OK


def cmd_expand(args) -> int:
    k = args.order
    if k < 1:
        raise ValueError(f"order must be >= 1, got {k}")
    if k > EXPAND_ORDER_CAP:
        raise EnumLimitError(f"order {k} exceeds the expansion cap {EXPAND_ORDER_CAP}")
    matrix = HessenbergMatrix.from_function(k, scalar.h_sym, scalar.SYMBOLIC)
    expansion = det_leibnizian(matrix)
    oracle = det_leibniz_oracle(matrix, oracle_limit=EXPAND_ORDER_CAP)
    verified = not (expansion - oracle)
    pretty_terms: list[str] = []
    for term in enumerate_seps(k):
        body = term.pretty()
        if not pretty_terms:
            pretty_terms.append(body)
        elif body.startswith("-"):
            pretty_terms.append(f"- {body[1:]}")
        else:
            pretty_terms.append(f"+ {body}")
    payload = {
        "count": 1 << (k - 1),
        "order": k,
        "terms": scalar.term_sum_to_json(expansion),
        "verified": verified,
    }
    text = " ".join(pretty_terms) + "\n" + ("TRUE" if verified else "FALSE")
    _emit(payload, text, args.pretty)
    return EXIT_OK if verified else EXIT_VERIFY_FAILED


def _corrupted(model: CoefficientModel, s: int) -> CoefficientModel:
    # Debug aid for verify: bumps phi_1(s+1) by one so identity checks fail.
    bump = model.one

    def row_fn(t: int):
        row = model.phi_row(t)
        if t == s + 1:
            return (row[0] + bump,) + row[1:]
        return row

    return CoefficientModel(
        model.p, row_fn, model.backend, t_min=model.t_min, t_max=model.t_max
    )


def cmd_verify(args) -> int:
    model = _load_model(args)
    t, s = args.t, args.s
    if t <= s:
        raise DomainError(f"verification requires t > s, got t={t}, s={s}")
    limit = _enum_limit()
    float_mode = args.arith == scalar.FLOAT64
    lei_model = _corrupted(model, s) if args.corrupt else model

    def close(a, b) -> bool:
        return scalar.scalars_close(a, b)

    checks: list[dict] = []

    values = {
        "recurrence": evaluate_green(model, t, s, "recurrence"),
        "leibnizian": evaluate_green(lei_model, t, s, "leibnizian", enum_limit=limit),
        "nested": evaluate_green(model, t, s, "nested"),
        "companion": evaluate_green(model, t, s, "companion"),
    }
    reference = values["recurrence"]
    bad = {name: v for name, v in values.items() if not close(reference, v)}
    entry = {"name": "green-four-way", "passed": not bad}
    if bad:
        entry["counterexample"] = {
            "t": t,
            "s": s,
            "values": {name: scalar_to_json(v) for name, v in values.items()},
        }
    checks.append(entry)

    xi_matrix = casorati(model, t, s)
    product = companion_product(model, t, s)
    mismatch = None
    for i in range(model.p):
        for j in range(model.p):
            if not close(xi_matrix.entries[i][j], product[i][j]):
                mismatch = {
                    "row": i + 1,
                    "col": j + 1,
                    "fundamental": scalar_to_json(xi_matrix.entries[i][j]),
                    "companion": scalar_to_json(product[i][j]),
                }
                break
        if mismatch:
            break
    entry = {"name": "fundamental-matrix", "passed": mismatch is None}
    if mismatch:
        entry["counterexample"] = mismatch
    checks.append(entry)

    cas = xi_matrix.casoratian()
    nonzero = abs(cas) > scalar.DEFAULT_ABS_TOL if float_mode else bool(cas)
    entry = {"name": "casoratian-nonzero", "passed": nonzero}
    if not nonzero:
        entry["counterexample"] = {"casoratian": scalar_to_json(cas)}
    checks.append(entry)

    if args.problem is not None:
        problem = load_problem(args.problem, args.arith, model)
        solutions = {
            method: evaluate_solution(problem, t, method, enum_limit=limit)
            for method in SOLVE_METHODS
        }
        reference = solutions["recursion"]
        bad = {name: v for name, v in solutions.items() if not close(reference, v)}
        entry = {"name": "solution-five-way", "passed": not bad}
        if bad:
            entry["counterexample"] = {
                "t": t,
                "values": {name: scalar_to_json(v) for name, v in solutions.items()},
            }
        checks.append(entry)

    passed = all(c["passed"] for c in checks)
    payload = {"checks": checks, "passed": passed}
    lines = [
        f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}" for c in checks
    ]
    _emit(payload, "\n".join(lines), args.pretty)
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


class _Parser(argparse.ArgumentParser):
    # usage errors also emit single-line JSON on stderr, like every other
    # error path
    def error(self, message):
        _error("usage", message)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="vclde",
        description=(
            "Green's functions and solutions of linear difference equations "
            "with variable coefficients, via banded Hessenbergian determinants."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_method=None, with_problem=False, with_p=True):
        p.add_argument("--coeffs", help="coefficient file (JSON)")
        if with_p:
            p.add_argument(
                "--p", type=int, help="equation order (symbolic mode without --coeffs)"
            )
        if with_problem:
            p.add_argument("--problem", help="problem file (JSON)")
        if with_method:
            p.add_argument("--method", choices=with_method, default=with_method[0])
        p.add_argument("--arith", choices=ARITH_CHOICES, default=scalar.RATIONAL)
        p.add_argument("--pretty", action="store_true", help="text output")

    g = sub.add_parser("green", help="evaluate the Green's function H(t, s)")
    g.add_argument("--t", type=int, required=True)
    g.add_argument("--s", type=int, required=True)
    common(g, with_method=GREEN_METHODS)
    g.set_defaults(func=cmd_green)

    so = sub.add_parser("solve", help="evaluate the general solution y_t")
    so.add_argument("--t", type=int, required=True)
    so.add_argument("--s", type=int, help="anchor (symbolic mode without a problem file)")
    method_order = ("green", "kittappa", "leibnizian", "nested", "recursion")
    common(so, with_method=method_order, with_problem=True)
    so.set_defaults(func=cmd_solve)

    f = sub.add_parser("fundamental", help="print the fundamental matrix and Casoratian")
    f.add_argument("--t", type=int, required=True)
    f.add_argument("--s", type=int, required=True)
    common(f)
    f.set_defaults(func=cmd_fundamental)

    e = sub.add_parser("expand", help="symbolic Hessenbergian expansion")
    e.add_argument("--order", type=int, required=True)
    e.add_argument("--pretty", action="store_true", help="text output")
    e.set_defaults(func=cmd_expand)

    v = sub.add_parser("verify", help="run the identity checks")
    v.add_argument("--t", type=int, required=True)
    v.add_argument("--s", type=int, required=True)
    v.add_argument(
        "--corrupt",
        action="store_true",
        help="debug: perturb one matrix entry so verification must fail",
    )
    common(v, with_problem=True)
    v.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EnumLimitError as exc:
        _error("enum-limit", str(exc))
        return EXIT_LIMIT
    except MissingForcingError as exc:
        _error("missing-forcing", str(exc), t=exc.t)
        return EXIT_MISSING_DATA
    except (
        DomainError,
        StructureError,
        SuperdiagonalError,
        scalar.BackendMismatchError,
        ValueError,
        KeyError,
        OSError,
    ) as exc:
        _error("invalid-input", str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
