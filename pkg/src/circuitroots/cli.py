"""Command-line front end: JSON documents in, JSON reports out.

Input is one JSON object per line with fields ``n``, ``exponents`` (t
vectors of n integers) and ``coefficients`` (n rows of t integers; strings
are accepted so arbitrary-precision values survive generic JSON tooling),
plus an optional ``label``. One report per line goes to stdout, a short
human summary to stderr.

Exit codes: 0 all counts finite, 2 genericity refusal, 3 infinite count,
4 internal/budget error or oracle mismatch. The worst code across a batch
wins.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .counter import (
    CountResult,
    PolySystem,
    count_affine_ex,
    count_positive_ex,
    count_torus_ex,
)
from .errors import (
    BudgetExceeded,
    CircuitRootsError,
    HyperplaneSupport,
    ParseError,
    ValidationError,
)
from .gale import GenericityReport, Support
from .verify import verify_report

__all__ = ["InputDocument", "parse", "serialize", "run", "main"]

_EXIT_OK = 0
_EXIT_GENERICITY = 2
_EXIT_INFINITE = 3
_EXIT_INTERNAL = 4

_SEVERITY = {_EXIT_OK: 0, _EXIT_GENERICITY: 1, _EXIT_INFINITE: 2, _EXIT_INTERNAL: 3}


@dataclass(frozen=True)
class InputDocument:
    n: int
    exponents: tuple[tuple[int, ...], ...]
    coefficients: tuple[tuple[int, ...], ...]
    label: Optional[str] = None

    def system(self) -> PolySystem:
        return PolySystem(Support(self.exponents), self.coefficients)


def _as_int(x, what: str) -> int:
    if isinstance(x, bool):
        raise ParseError(f"{what}: booleans are not integers")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError as e:
            raise ParseError(f"{what}: {x!r} is not an integer") from e
    raise ParseError(f"{what}: expected an integer or string, got {type(x).__name__}")


def parse(text: str) -> InputDocument:
    """Parse and validate one JSON document."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from e
    if not isinstance(obj, dict):
        raise ParseError("document must be a JSON object")
    for key in ("n", "exponents", "coefficients"):
        if key not in obj:
            raise ParseError(f"missing field {key!r}")
    n = _as_int(obj["n"], "n")
    if n < 1:
        raise ValidationError("n must be at least 1")
    exps = obj["exponents"]
    if not isinstance(exps, list) or not exps:
        raise ParseError("exponents must be a non-empty list of vectors")
    exponents = []
    for k, vec in enumerate(exps):
        if not isinstance(vec, list) or len(vec) != n:
            raise ValidationError(f"exponent vector {k} must have length n={n}")
        exponents.append(tuple(_as_int(x, f"exponents[{k}]") for x in vec))
    t = len(exponents)
    if t not in (n + 1, n + 2):
        raise ValidationError(f"unsupported support size: t={t}, need n+1 or n+2")
    if len(set(exponents)) != t:
        raise ValidationError("exponent vectors must be pairwise distinct")
    coeffs_in = obj["coefficients"]
    if not isinstance(coeffs_in, list) or len(coeffs_in) != n:
        raise ValidationError(f"coefficients must be a list of n={n} rows")
    coefficients = []
    for i, row in enumerate(coeffs_in):
        if not isinstance(row, list) or len(row) != t:
            raise ValidationError(f"coefficient row {i} must have length t={t}")
        coefficients.append(tuple(_as_int(x, f"coefficients[{i}]") for x in row))
        if all(c == 0 for c in coefficients[-1]):
            raise ValidationError(f"equation {i} is identically zero")
    for j in range(t):
        if all(row[j] == 0 for row in coefficients):
            raise ValidationError(f"support point {j} appears in no equation")
    label = obj.get("label")
    if label is not None and not isinstance(label, str):
        raise ValidationError("label must be a string")
    return InputDocument(n, tuple(exponents), tuple(coefficients), label)


def serialize(doc: InputDocument) -> str:
    """Canonical JSON for a document; parse(serialize(doc)) == doc."""
    obj = {
        "n": doc.n,
        "exponents": [list(v) for v in doc.exponents],
        "coefficients": [[str(c) for c in row] for row in doc.coefficients],
    }
    if doc.label is not None:
        obj["label"] = doc.label
    return json.dumps(obj, separators=(",", ":"))


def _result_json(res: CountResult) -> dict:
    out: dict = {"kind": res.kind}
    if res.count is not None:
        out["count"] = str(res.count)
    if res.detail:
        out["detail"] = res.detail
    return out


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, GenericityReport):
        return {"passed": x.passed, "failing_minor": x.failing_minor}
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return repr(x)


_DIAG_KEYS = (
    "permutation",
    "relation",
    "gammas",
    "interval",
    "log_terms",
    "critical_poly",
    "cells",
    "orthant_factor",
    "coordinate_minima",
    "origin_root",
    "unverified_strata",
    "binomial_rhs",
)


def _diagnostics(details: dict) -> dict:
    out = {}
    for key in _DIAG_KEYS:
        if key in details:
            out[key] = _jsonable(details[key])
    if "budget" in details:
        b = details["budget"]
        out["budget"] = {
            "b_max": b.b_max,
            "log_h": b.log_h,
            "e_bound_log2": repr(b.e_bound),
            "ceiling_bits": str(b.ceiling_bits),
        }
    if "torus" in details:
        out["torus"] = _diagnostics(details["torus"])
    return out


_RUNNERS = {
    "positive": count_positive_ex,
    "torus": count_torus_ex,
    "affine": count_affine_ex,
}

_KIND_EXIT = {
    "finite": _EXIT_OK,
    "unverified_genericity": _EXIT_OK,
    "genericity_failure": _EXIT_GENERICITY,
    "infinite": _EXIT_INFINITE,
}


def run(doc: InputDocument, targets: Sequence[str], verify: bool = False, explain: bool = False) -> tuple[dict, int]:
    """Count the requested targets; returns (report, exit_code)."""
    report: dict = {"n": doc.n, "t": len(doc.exponents), "counts": {}, "errors": []}
    if doc.label is not None:
        report["label"] = doc.label
    exit_code = _EXIT_OK

    def worse(code):
        nonlocal exit_code
        if _SEVERITY[code] > _SEVERITY[exit_code]:
            exit_code = code

    t_start = time.perf_counter()
    try:
        system = doc.system()
    except (ValueError, ValidationError) as e:
        report["errors"].append({"stage": "validate", "message": str(e)})
        return report, _EXIT_INTERNAL
    for target in targets:
        try:
            res, details = _RUNNERS[target](system)
            report["counts"][target] = _result_json(res)
            worse(_KIND_EXIT[res.kind])
            if "genericity" in details:
                rep = details["genericity"]
                report.setdefault("genericity", _jsonable(rep))
            if explain:
                report.setdefault("diagnostics", {})[target] = _diagnostics(details)
        except HyperplaneSupport as e:
            report["errors"].append({"stage": target, "kind": "hyperplane_support", "message": str(e)})
            worse(_EXIT_GENERICITY)
        except BudgetExceeded as e:
            report["errors"].append({"stage": target, "kind": "budget_exceeded", "message": str(e)})
            worse(_EXIT_INTERNAL)
        except CircuitRootsError as e:
            report["errors"].append({"stage": target, "kind": type(e).__name__, "message": str(e)})
            worse(_EXIT_INTERNAL)
    if verify and not report["errors"]:
        try:
            report["verify"] = _jsonable(verify_report(system, list(targets)))
        except AssertionError as e:
            report["errors"].append({"stage": "verify", "kind": "oracle_mismatch", "message": str(e)})
            worse(_EXIT_INTERNAL)
        except CircuitRootsError as e:
            report["errors"].append({"stage": "verify", "kind": type(e).__name__, "message": str(e)})
            worse(_EXIT_INTERNAL)
    report["timing_seconds"] = round(time.perf_counter() - t_start, 6)
    return report, exit_code


def _summary_line(index: int, report: dict) -> str:
    label = report.get("label", f"line {index + 1}")
    if report["errors"]:
        first = report["errors"][0]
        return f"{label}: ERROR ({first.get('kind', 'parse')}: {first['message']})"
    parts = []
    for target, res in report["counts"].items():
        if res["kind"] == "finite":
            parts.append(f"{target}={res['count']}")
        elif res["kind"] == "unverified_genericity":
            parts.append(f"{target}={res['count']}?")
        else:
            parts.append(f"{target}={res['kind']}")
    return f"{label}: " + ", ".join(parts)


def _process_line(args) -> tuple[dict, int]:
    line, targets, verify, explain = args
    try:
        doc = parse(line)
    except (ParseError, ValidationError) as e:
        return {"errors": [{"stage": "parse", "message": str(e)}], "counts": {}}, _EXIT_INTERNAL
    return run(doc, targets, verify=verify, explain=explain)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(
        prog="count",
        description="Count real/positive/torus roots of integer polynomial systems "
        "supported on circuits (JSON lines in, JSON reports out).",
    )
    ap.add_argument("--positive", action="store_true", help="count roots in the positive orthant")
    ap.add_argument("--torus", action="store_true", help="count roots with all coordinates nonzero")
    ap.add_argument("--affine", action="store_true", help="count roots in all of R^n")
    ap.add_argument("--verify", action="store_true", help="run independent oracles and fail loudly on mismatch")
    ap.add_argument("--explain", action="store_true", help="include pipeline diagnostics in reports")
    ap.add_argument("--jobs", type=int, default=1, metavar="N", help="process documents in N parallel workers")
    ap.add_argument("file", nargs="?", default="-", metavar="FILE", help="input file of JSON lines, or - for stdin")
    ns = ap.parse_args(argv)

    targets = [t for t in ("positive", "torus", "affine") if getattr(ns, t)]
    if not targets:
        targets = ["positive", "torus", "affine"]

    if ns.file == "-":
        lines = [ln for ln in sys.stdin.read().splitlines() if ln.strip()]
    else:
        with open(ns.file, "r", encoding="utf-8") as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip()]

    work = [(ln, targets, ns.verify, ns.explain) for ln in lines]
    if ns.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            results = list(pool.map(_process_line, work))
    else:
        results = [_process_line(w) for w in work]

    exit_code = _EXIT_OK
    for i, (report, code) in enumerate(results):
        print(json.dumps(report))
        print(_summary_line(i, report), file=sys.stderr)
        if _SEVERITY[code] > _SEVERITY[exit_code]:
            exit_code = code
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
