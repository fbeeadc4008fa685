"""Command line surface.

Exit codes: 0 success, 1 negative verdict or refusal, 2 usage/parse or
capability error, 3 internal consistency failure.  All output documents are
JSON with schema_version "1"; every integer is emitted as a decimal string
so arbitrary-precision values survive any JSON reader.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import conjugacy, cyclicity, ingest, orders, weil
from .errors import CapabilityError, ConsistencyError, InputError

SCHEMA_VERSION = "1"

# error codes meaning "the input parsed fine, the math said no"
_REFUSAL_CODES = {"not_weil", "not_ordinary", "not_irreducible", "charpoly_mismatch",
                  "not_stable", "bad_point_count"}


def _stringify(value):
    """Recursively convert integers (not booleans) to decimal strings."""
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else (
            f"{value.numerator}/{value.denominator}")
    if isinstance(value, (list, tuple)):
        return [_stringify(v) for v in value]
    if isinstance(value, dict):
        return {k: _stringify(v) for k, v in value.items()}
    return value


def _dump(doc) -> str:
    return json.dumps(_stringify(doc), sort_keys=True, indent=2) + "\n"


def _emit(doc, out: str | None) -> None:
    text = _dump(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _error_doc(code: str, message: str) -> dict:
    return {"schema_version": SCHEMA_VERSION, "error": {"code": code, "message": message}}


def _parse_poly(text: str) -> list[int]:
    try:
        return [int(tok.strip()) for tok in text.split(",")]
    except ValueError:
        raise InputError("bad_poly", f"cannot parse polynomial {text!r}: expected "
                         "comma-separated integers, highest degree first") from None


def _parse_matrix(text: str) -> list[list[int]]:
    try:
        return [[int(tok.strip()) for tok in row.split(",")] for row in text.split(";")]
    except ValueError:
        raise InputError("bad_matrix", f"cannot parse matrix {text!r}: expected rows "
                         "of comma-separated integers joined by ';'") from None


def _parse_ideal(text: str) -> list[list[Fraction]]:
    try:
        return [[Fraction(tok.strip()) for tok in row.split(",")] for row in text.split(";")]
    except (ValueError, ZeroDivisionError):
        raise InputError("bad_ideal", f"cannot parse ideal basis {text!r}: expected rows "
                         "of comma-separated rationals joined by ';'") from None


def _context_from_args(args) -> weil.WeilContext:
    return weil.make_context(args.p, args.r, args.g, _parse_poly(args.poly))


def _context_echo(ctx: weil.WeilContext) -> dict:
    return {"p": ctx.p, "r": ctx.r, "q": ctx.q, "g": ctx.g, "f": list(ctx.f)}


def _lattice_doc(lat) -> dict:
    return {"denominator": lat.den, "rows": [list(r) for r in lat.mat]}


def _classification_doc(result, seconds: float | None) -> dict:
    classes = []
    for rep in result.reports:
        lat = rep.class_ref.provenance
        classes.append({
            "matrix": [list(r) for r in rep.class_ref.rep],
            "ideal_basis": _lattice_doc(lat),
            "tau_m": rep.tau_m,
            "tau_one_minus_m": rep.tau_one_minus_m,
            "gcd_with_point_count": rep.gcd_with_point_count,
            "membership_c1": rep.membership_c1,
            "membership_c2": rep.membership_c2,
            "invariant_factors": list(rep.invariant_factors),
            "group": list(rep.group_descriptor),
            "verdict": rep.verdict,
            "oracle_agrees": rep.oracle_agrees,
        })
    doc = {
        "schema_version": SCHEMA_VERSION,
        "context": _context_echo(result.ctx),
        "classes": classes,
        "summary": {
            "total": result.total,
            "cyclic": result.cyclic_count,
            "not_cyclic": result.not_cyclic_count,
            "point_count": result.ctx.point_count,
            "index_bound": result.icm_result.index_bound,
            "completeness": result.completeness,
            "indeterminate_pairs": [list(p) for p in result.icm_result.indeterminate_pairs],
        },
        "sigma_checks": [
            {"ell": c.ell, "sigma_classes": list(c.sigma_class_indices),
             "tau_classes": list(c.tau_class_indices), "agree": c.agree}
            for c in result.sigma_checks
        ],
    }
    if seconds is not None:
        doc["timing"] = {"seconds": f"{seconds:.3f}"}
    return doc


def cmd_validate(args) -> int:
    try:
        ctx = _context_from_args(args)
    except InputError as exc:
        _emit(_error_doc(exc.code, str(exc)), None)
        return 2
    doc = {
        "schema_version": SCHEMA_VERSION,
        "context": _context_echo(ctx),
        "is_weil": ctx.is_weil,
        "weil_reason": ctx.weil_reason,
        "is_ordinary": ctx.is_ordinary,
        "is_irreducible": ctx.is_irreducible,
    }
    if ctx.is_weil:
        doc["point_count"] = ctx.point_count
    _emit(doc, None)
    return 0 if (ctx.is_weil and ctx.is_ordinary and ctx.is_irreducible) else 1


def cmd_classify(args) -> int:
    try:
        ctx = _context_from_args(args)
    except InputError as exc:
        _emit(_error_doc(exc.code, str(exc)), None)
        return 2
    started = time.monotonic()
    result = cyclicity.classify_isogeny_class(ctx, args.index_bound)
    seconds = None if args.no_timing else time.monotonic() - started
    _emit(_classification_doc(result, seconds), args.out)
    return 0 if result.all_oracle_agree else 3


def cmd_convert(args) -> int:
    try:
        ctx = _context_from_args(args)
    except InputError as exc:
        _emit(_error_doc(exc.code, str(exc)), None)
        return 2
    if (args.matrix is None) == (args.ideal is None):
        raise InputError("bad_direction", "pass exactly one of --matrix or --ideal")
    if args.matrix is not None:
        m = _parse_matrix(args.matrix)
        lat = conjugacy.matrix_to_ideal(ctx, m)
        back = conjugacy.ideal_to_matrix(lat)
        conj = conjugacy.matrices_conjugate(ctx, m, [list(r) for r in back.rep])
        doc = {
            "schema_version": SCHEMA_VERSION,
            "context": _context_echo(ctx),
            "direction": "matrix_to_ideal",
            "input_matrix": m,
            "ideal": _lattice_doc(lat),
            "round_trip": {
                "matrix": [list(r) for r in back.rep],
                "status": conj.status,
                "witness": None if conj.witness is None else [list(r) for r in conj.witness],
            },
        }
        _emit(doc, args.out)
        return 0
    rows = _parse_ideal(args.ideal)
    lat = orders.IdealLattice.from_rows(ctx, rows)
    mclass = conjugacy.ideal_to_matrix(lat)
    lat_back = conjugacy.matrix_to_ideal(ctx, [list(r) for r in mclass.rep])
    eq = orders.ideal_equivalent(lat, lat_back)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "context": _context_echo(ctx),
        "direction": "ideal_to_matrix",
        "input_ideal": _lattice_doc(lat),
        "matrix": [list(r) for r in mclass.rep],
        "round_trip": {
            "ideal": _lattice_doc(lat_back),
            "status": eq.status,
            "witness": None if eq.witness is None else list(eq.witness.coeffs),
        },
    }
    _emit(doc, args.out)
    return 0


def _aggregate_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["q", "f", "classes", "cyclic", "not_cyclic", "completeness"])
    for row in rows:
        writer.writerow([row["q"], row["f"], row["classes"], row["cyclic"],
                         row["not_cyclic"], row["completeness"]])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    contexts = weil.enumerate_weil_contexts(args.p, args.r, args.g,
                                            ordinary=True, irreducible=True)
    started = time.monotonic()
    reports = []
    failures = []
    csv_rows = []
    worst = 0
    for ctx in contexts:
        try:
            result = cyclicity.classify_isogeny_class(ctx, args.index_bound)
        except ConsistencyError as exc:
            failures.append({"context": _context_echo(ctx),
                             "error": {"code": "consistency", "message": str(exc)}})
            worst = max(worst, 3)
            continue
        except (InputError, CapabilityError) as exc:
            code = getattr(exc, "code", "capability")
            failures.append({"context": _context_echo(ctx),
                             "error": {"code": code, "message": str(exc)}})
            worst = max(worst, 1)
            continue
        doc = _classification_doc(result, None)
        if not result.all_oracle_agree:
            worst = max(worst, 3)
        reports.append(doc)
        csv_rows.append({
            "q": ctx.q,
            "f": ",".join(str(c) for c in ctx.f),
            "classes": result.total,
            "cyclic": result.cyclic_count,
            "not_cyclic": result.not_cyclic_count,
            "completeness": result.completeness,
        })
    aggregate = _aggregate_csv(csv_rows)
    sweep_doc = {
        "schema_version": SCHEMA_VERSION,
        "sweep": {"p": args.p, "r": args.r, "g": args.g, "contexts": len(contexts)},
        "reports": reports,
        "failures": failures,
        "aggregate_csv": aggregate,
    }
    if args.fixtures:
        load = ingest.load_fixture(args.fixtures)
        sweep_doc["cross_validation"] = {
            "report": ingest.cross_validate(load.records),
            "rejected_lines": [list(r) for r in load.rejected],
        }
    if not args.no_timing:
        sweep_doc["timing"] = {"seconds": f"{time.monotonic() - started:.3f}"}
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for doc in reports:
            ctx_doc = doc["context"]
            label = f"g{ctx_doc['g']}_q{ctx_doc['q']}_f_" + "_".join(
                str(c).replace("-", "m") for c in ctx_doc["f"])
            (out_dir / f"{label}.json").write_text(_dump(doc), encoding="utf-8")
        (out_dir / "aggregate.csv").write_text(aggregate, encoding="utf-8")
        (out_dir / "sweep.json").write_text(_dump(sweep_doc), encoding="utf-8")
    else:
        _emit(sweep_doc, None)
    if args.csv:
        Path(args.csv).write_text(aggregate, encoding="utf-8")
    return worst


def _add_context_args(sub, poly_required: bool = True) -> None:
    sub.add_argument("--p", type=int, required=True, help="characteristic prime")
    sub.add_argument("--r", type=int, required=True, help="extension degree, q = p^r")
    sub.add_argument("--g", type=int, required=True, help="dimension")
    if poly_required:
        sub.add_argument("--poly", required=True,
                         help="comma-separated integer coefficients, highest degree first")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="avcyclic",
        description="Classify the abelian varieties in an ordinary simple isogeny "
                    "class over F_q as cyclic or not, with exact arithmetic throughout.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_validate = subs.add_parser("validate", help="validate a candidate Weil polynomial")
    _add_context_args(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_classify = subs.add_parser("classify", help="classify every variety class as cyclic or not")
    _add_context_args(p_classify)
    p_classify.add_argument("--index-bound", type=int, default=None,
                            help="override the integral-ideal index bound")
    p_classify.add_argument("--out", default=None, help="write the JSON report to a file")
    p_classify.add_argument("--no-timing", action="store_true",
                            help="omit the timing field (byte-stable output)")
    p_classify.set_defaults(func=cmd_classify)

    p_convert = subs.add_parser("convert", help="convert matrix to ideal or ideal to matrix")
    _add_context_args(p_convert)
    p_convert.add_argument("--matrix", default=None,
                           help="rows of comma-separated integers joined by ';'")
    p_convert.add_argument("--ideal", default=None,
                           help="basis rows of comma-separated rationals joined by ';'")
    p_convert.add_argument("--out", default=None, help="write the JSON result to a file")
    p_convert.set_defaults(func=cmd_convert)

    p_sweep = subs.add_parser("sweep", help="classify every ordinary simple context for p, r, g")
    _add_context_args(p_sweep, poly_required=False)
    p_sweep.add_argument("--index-bound", type=int, default=None)
    p_sweep.add_argument("--fixtures", default=None,
                         help="JSON-lines fixture to cross-validate against")
    p_sweep.add_argument("--out-dir", default=None,
                         help="write per-context reports and aggregate.csv here")
    p_sweep.add_argument("--csv", default=None, help="also write the aggregate CSV to this path")
    p_sweep.add_argument("--no-timing", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        _emit(_error_doc(exc.code, str(exc)), None)
        return 1 if exc.code in _REFUSAL_CODES else 2
    except CapabilityError as exc:
        _emit(_error_doc("capability", str(exc)), None)
        return 2
    except ConsistencyError as exc:
        _emit(_error_doc("consistency", str(exc)), None)
        return 3
    except OSError as exc:
        _emit(_error_doc("io", str(exc)), None)
        return 2


if __name__ == "__main__":
    sys.exit(main())
