"""Command-line front end.

Subcommands: analyze, realize, compare, minimal-order, validate-q, chain.
Every command writes a single JSON document to stdout (pretty-printed with
--pretty) and uses a stable exit-code contract:

    0  yes / success
    1  no, with a certificate or null witness in the output
    2  input error
    3  search budget exceeded (indeterminate)

Mapping files are UTF-8 JSON: {"points": [...], "values": [...]?,
"table": [[...]], "poset": {"elements": [...], "leq_pairs": [...]}?}.
With --csv the table is read as CSV whose first row and column carry the
point names.  The ULTRASIM_BUDGET environment variable supplies the default
node budget for compare.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .decision import (
    analyze,
    canonical_chain_ultrametric,
    is_q_pseudoultrametric,
    is_q_ultrametric,
    is_ultrametric_distance,
    realize_pseudoultrametric,
    realize_ultrametric,
    Realization,
)
from .errors import InputError
from .mappings import Certificate, FiniteMapping, UCycle
from .orders import FinitePoset, ValueMap, minimal_order, poset_from_doc, poset_to_doc
from .similarity import (
    BudgetExceeded,
    SimilarityWitness,
    combinatorially_similar,
    weakly_similar,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

DEFAULT_ANALYZE_MAX_N = 512
DEFAULT_COMPARE_MAX_N = 10
BUDGET_ENV = "ULTRASIM_BUDGET"


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def parse_mapping_document(doc: dict) -> tuple[FiniteMapping, FinitePoset | None]:
    if not isinstance(doc, dict):
        raise InputError("mapping document must be a JSON object")
    for key in ("points", "table"):
        if key not in doc:
            raise InputError(f"mapping document needs {key!r}")
    points = doc["points"]
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise InputError("points must be a list of strings")
    table = doc["table"]
    if not isinstance(table, list) or not all(isinstance(row, list) for row in table):
        raise InputError("table must be a list of rows")
    values = doc.get("values")
    mapping = FiniteMapping.from_labels(points, table, values=values)
    poset = None
    if "poset" in doc and doc["poset"] is not None:
        poset = poset_from_doc(doc["poset"])
    return mapping, poset


def mapping_to_document(m: FiniteMapping, poset: FinitePoset | None = None) -> dict:
    doc = {
        "points": list(m.points),
        "values": list(m.values),
        "table": m.label_rows(),
    }
    if poset is not None:
        doc["poset"] = poset_to_doc(poset)
    return doc


def parse_witness_document(doc: dict) -> dict:
    if not isinstance(doc, dict) or "g" not in doc or "f" not in doc:
        raise InputError("witness document needs 'g' and 'f'")
    return doc


def parse_realization_document(doc: dict) -> Realization:
    from fractions import Fraction

    if not isinstance(doc, dict) or "assignment" not in doc or "matrix" not in doc:
        raise InputError("realization document needs 'assignment' and 'matrix'")
    assignment = ValueMap(
        tuple((k, Fraction(v)) for k, v in doc["assignment"].items())
    )
    matrix = tuple(tuple(Fraction(v) for v in row) for row in doc["matrix"])
    return Realization(assignment, matrix, doc.get("kind", "pseudoultrametric"))


def _load_mapping(path: str, as_csv: bool) -> tuple[FiniteMapping, FinitePoset | None]:
    text = _read_text(path)
    if as_csv:
        return _parse_csv(text), None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return parse_mapping_document(doc)


def _parse_csv(text: str) -> FiniteMapping:
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if len(rows) < 2:
        raise InputError("CSV needs a header row and at least one point row")
    header = [cell.strip() for cell in rows[0][1:]]
    points = []
    table = []
    for row in rows[1:]:
        cells = [cell.strip() for cell in row]
        points.append(cells[0])
        table.append(cells[1:])
    if points != header:
        raise InputError("CSV row names must match the header column names")
    if any(len(row) != len(points) for row in table):
        raise InputError("CSV table must be square")
    return FiniteMapping.from_labels(points, table)


def _emit(doc: dict, pretty: bool) -> None:
    if pretty:
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
    else:
        sys.stdout.write(json.dumps(doc, separators=(",", ":")) + "\n")


def _check_max_n(m: FiniteMapping, max_n: int) -> None:
    if m.n > max_n:
        raise InputError(f"point count {m.n} exceeds --max-n {max_n}")


def _cmd_analyze(args) -> int:
    mapping, _ = _load_mapping(args.path, args.csv)
    _check_max_n(mapping, args.max_n)
    report = analyze(mapping, full=args.full)
    _emit(report.to_json(), args.pretty)
    return EXIT_YES if isinstance(report.pseudoultrametric, Realization) else EXIT_NO


def _cmd_realize(args) -> int:
    mapping, _ = _load_mapping(args.path, args.csv)
    _check_max_n(mapping, args.max_n)
    run = realize_ultrametric if args.kind == "ultra" else realize_pseudoultrametric
    result = run(mapping)
    if isinstance(result, Certificate):
        _emit(result.to_json(), args.pretty)
        return EXIT_NO
    _emit(result.to_json(), args.pretty)
    return EXIT_YES


def _cmd_minimal_order(args) -> int:
    mapping, _ = _load_mapping(args.path, args.csv)
    _check_max_n(mapping, args.max_n)
    result = minimal_order(mapping)
    if isinstance(result, UCycle):
        _emit(result.to_json(), args.pretty)
        return EXIT_NO
    _emit(poset_to_doc(result), args.pretty)
    return EXIT_YES


def _order_for(mapping: FiniteMapping, poset: FinitePoset | None) -> FinitePoset:
    if poset is not None:
        # weak similarity compares the subposets on the tables' value ranges
        return poset.restricted_to(mapping.values)
    result = minimal_order(mapping)
    if isinstance(result, UCycle):
        raise InputError(
            "mapping has no minimal value order and no poset section was given",
            details=result,
        )
    return result


def _cmd_compare(args) -> int:
    a, pa = _load_mapping(args.path_a, args.csv)
    b, pb = _load_mapping(args.path_b, args.csv)
    for m in (a, b):
        _check_max_n(m, args.max_n)
    budget = args.budget
    if budget is None:
        env = os.environ.get(BUDGET_ENV)
        budget = int(env) if env else None
    if args.mode == "weak":
        result = weakly_similar(a, _order_for(a, pa), b, _order_for(b, pb), budget=budget)
    else:
        result = combinatorially_similar(a, b, budget=budget)
    if isinstance(result, SimilarityWitness):
        _emit(result.to_json(a, b), args.pretty)
        return EXIT_YES
    if isinstance(result, BudgetExceeded):
        _emit({"witness": None, "outcome": "budget-exceeded", "nodes": result.nodes}, args.pretty)
        return EXIT_BUDGET
    _emit({"witness": None}, args.pretty)
    return EXIT_NO


def _cmd_validate_q(args) -> int:
    mapping, poset = _load_mapping(args.path, args.csv)
    _check_max_n(mapping, args.max_n)
    if poset is None:
        raise InputError("validate-q needs a poset section in the mapping document")
    for v in mapping.values:
        poset.index(v)  # values must be poset elements
    embed = ValueMap(tuple((v, v) for v in mapping.values))
    checker = {
        "pseudo": is_q_pseudoultrametric,
        "ultra": is_q_ultrametric,
        "distance": is_ultrametric_distance,
    }[args.kind]
    result = checker(mapping, poset, embed)
    if result is True:
        _emit({"kind": args.kind, "valid": True, "witness": None}, args.pretty)
        return EXIT_YES
    witness = {"kind": result.kind, "points": list(result.points)}
    if result.gamma is not None:
        witness["gamma"] = result.gamma
    _emit({"kind": args.kind, "valid": False, "witness": witness}, args.pretty)
    return EXIT_NO


def _cmd_chain(args) -> int:
    if args.k < 1:
        raise InputError("chain length must be positive")
    labels = [str(i) for i in range(args.k)]
    mapping, poset = canonical_chain_ultrametric(labels)
    _emit(mapping_to_document(mapping, poset), args.pretty)
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ultrasim",
        description="Decide similarity of finite value tables to (pseudo)ultrametrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, max_n=DEFAULT_ANALYZE_MAX_N):
        p.add_argument("--pretty", action="store_true", help="indent the JSON output")
        p.add_argument("--csv", action="store_true", help="read tables as CSV matrices")
        p.add_argument("--max-n", type=int, default=max_n, help="point-count guardrail")

    p = sub.add_parser("analyze", help="full pipeline report for one mapping")
    p.add_argument("path", help="mapping file, or - for stdin")
    p.add_argument("--full", action="store_true", help="report late stages even after an early failure")
    common(p)
    p.set_defaults(run=_cmd_analyze)

    p = sub.add_parser("realize", help="rational realization or refutation certificate")
    p.add_argument("path")
    p.add_argument("--kind", choices=("pseudo", "ultra"), default="pseudo")
    common(p)
    p.set_defaults(run=_cmd_realize)

    p = sub.add_parser("compare", help="decide similarity of two mappings")
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.add_argument("--mode", choices=("comb", "weak"), default="comb")
    p.add_argument("--budget", type=int, default=None, help=f"search node cap (default ${BUDGET_ENV})")
    common(p, max_n=DEFAULT_COMPARE_MAX_N)
    p.set_defaults(run=_cmd_compare)

    p = sub.add_parser("minimal-order", help="weakest value order, or a cycle certificate")
    p.add_argument("path")
    common(p)
    p.set_defaults(run=_cmd_minimal_order)

    p = sub.add_parser("validate-q", help="check a poset-valued mapping")
    p.add_argument("path")
    p.add_argument("--kind", choices=("pseudo", "ultra", "distance"), required=True)
    common(p)
    p.set_defaults(run=_cmd_validate_q)

    p = sub.add_parser("chain", help="emit the canonical chain-valued ultrametric")
    p.add_argument("k", type=int, help="chain length")
    p.add_argument("--pretty", action="store_true")
    p.set_defaults(run=_cmd_chain)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
