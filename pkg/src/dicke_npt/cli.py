"""Command-line front end and report serialization.

Exit codes: 0 success (or verdict NPT-GME), 2 fully separable, 1 usage or
internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from importlib import resources

from . import limits, oracle
from .dicke_algebra import reduced_state
from .multiindex import as_occupation, enumerate_full, enumerate_restricted, norm
from .npt_witness import (
    FULLY_SEPARABLE,
    NPT_GME,
    CertificationReport,
    HermitianForm2,
    SplitRecord,
    WitnessChoice,
    certify,
    pt_spectrum,
)

SCHEMA_VERSION = "1.0"
CSV_COLUMNS = ["m", "k", "discriminant", "witness_value", "spectral_min", "is_npt"]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SEPARABLE = 2


class UsageError(Exception):
    pass


def load_schema() -> dict:
    text = resources.files("dicke_npt").joinpath(
        f"schemas/report-{SCHEMA_VERSION}.schema.json"
    ).read_text()
    return json.loads(text)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    p, q = s.split("/")
    return Fraction(int(p), int(q))


def parse_occupation(text: str):
    try:
        occ = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"malformed occupation {text!r}; expected e.g. 1,0,2") from None
    try:
        return as_occupation(occ)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def format_occupation(x) -> str:
    return "(" + ",".join(str(v) for v in x) + ")"


# -- report documents ---------------------------------------------------------

def record_to_dict(r: SplitRecord) -> dict:
    w, f = r.witness, r.form
    return {
        "m": r.m,
        "k": r.k,
        "discriminant": format_rational(r.discriminant),
        "witness_value": r.optimal_witness_value,
        "spectral_min": r.spectral_min,
        "is_npt": r.is_npt,
        "witness": {
            "m_hat": list(w.m_hat),
            "k_hat": list(w.k_hat),
            "k_hat_prime": list(w.k_hat_prime),
            "delta": list(w.delta),
            "positions": list(w.positions) if w.positions is not None else None,
        },
        "form": {
            "A": format_rational(f.A),
            "B": format_rational(f.B),
            "C_squared": format_rational(f.C_squared),
            "a_term_present": f.a_term_present,
            "b_term_present": f.b_term_present,
        },
        "elapsed_ms": r.elapsed_ms,
    }


def record_from_dict(doc: dict) -> SplitRecord:
    w, f = doc["witness"], doc["form"]
    choice = WitnessChoice(
        m_hat=tuple(w["m_hat"]),
        k_hat=tuple(w["k_hat"]),
        k_hat_prime=tuple(w["k_hat_prime"]),
        delta=tuple(w["delta"]),
        positions=tuple(w["positions"]) if w["positions"] is not None else None,
    )
    form = HermitianForm2(
        A=parse_rational(f["A"]),
        B=parse_rational(f["B"]),
        C_squared=parse_rational(f["C_squared"]),
        a_term_present=f["a_term_present"],
        b_term_present=f["b_term_present"],
    )
    return SplitRecord(
        m=doc["m"], k=doc["k"], witness=choice, form=form,
        discriminant=parse_rational(doc["discriminant"]),
        optimal_witness_value=doc["witness_value"],
        spectral_min=doc["spectral_min"],
        is_npt=doc["is_npt"],
        elapsed_ms=doc["elapsed_ms"],
    )


def report_to_dict(report: CertificationReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "occupation": list(report.parent),
        "d": report.d,
        "n": report.n,
        "verdict": report.verdict,
        "records": [record_to_dict(r) for r in report.records],
    }


def report_from_dict(doc: dict) -> CertificationReport:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {doc.get('schema_version')!r}")
    return CertificationReport(
        parent=tuple(doc["occupation"]),
        verdict=doc["verdict"],
        records=tuple(record_from_dict(r) for r in doc["records"]),
    )


def report_to_json(report: CertificationReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def report_to_csv(report: CertificationReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in report.records:
        writer.writerow([
            r.m, r.k, format_rational(r.discriminant),
            repr(r.optimal_witness_value), repr(r.spectral_min),
            "true" if r.is_npt else "false",
        ])
    return buf.getvalue()


def report_to_text(report: CertificationReport) -> str:
    lines = [f"occupation {format_occupation(report.parent)}: {report.verdict}"]
    for r in report.records:
        lines.append(
            f"m={r.m} k={r.k} discriminant={format_rational(r.discriminant)} "
            f"witness={r.optimal_witness_value:.12g} spectral_min={r.spectral_min:.12g} "
            f"npt={'yes' if r.is_npt else 'no'}"
        )
    return "\n".join(lines) + "\n"


# -- subcommands ---------------------------------------------------------------

def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_certify(args) -> int:
    parent = parse_occupation(args.occupation)
    if norm(parent) < 2:
        raise UsageError(f"need at least two sites, got n={norm(parent)}")
    report = certify(parent, threads=args.threads)
    fmt = args.format or "json"
    if fmt == "json":
        _emit(args, report_to_json(report))
    elif fmt == "csv":
        _emit(args, report_to_csv(report))
    else:
        _emit(args, report_to_text(report))
    if report.verdict == NPT_GME:
        return EXIT_OK
    if report.verdict == FULLY_SEPARABLE:
        return EXIT_SEPARABLE
    return EXIT_ERROR


def cmd_reduce(args) -> int:
    parent = parse_occupation(args.occupation)
    n = norm(parent)
    if not 1 <= args.m <= n:
        raise UsageError(f"-m must lie in [1, {n}], got {args.m}")
    state = reduced_state(parent, args.m)
    fmt = args.format or "text"
    if fmt == "json":
        doc = {
            "occupation": list(parent),
            "m": args.m,
            "weights": [
                {"part": list(p), "weight": format_rational(w)} for p, w in state.weights.items()
            ],
        }
        _emit(args, json.dumps(doc, indent=2) + "\n")
    elif fmt == "csv":
        rows = ["part,weight"] + [
            f"\"{format_occupation(p)}\",{format_rational(w)}" for p, w in state.weights.items()
        ]
        _emit(args, "\n".join(rows) + "\n")
    else:
        _emit(args, ", ".join(
            f"{format_occupation(p)}: {w}" for p, w in state.weights.items()
        ) + "\n")
    return EXIT_OK


def cmd_ppt(args) -> int:
    parent = parse_occupation(args.occupation)
    n = norm(parent)
    if not 2 <= args.m <= n:
        raise UsageError(f"-m must lie in [2, {n}], got {args.m}")
    if not 1 <= args.k <= args.m - 1:
        raise UsageError(f"-k must lie in [1, {args.m - 1}], got {args.k}")
    spectrum = [float(x) for x in pt_spectrum(parent, args.m, args.k)]
    dense = None
    if args.dense:
        dense = [float(x) for x in oracle.dense_pt_spectrum(parent, args.m, args.k, limit=args.dense_limit)]
    fmt = args.format or "text"
    if fmt == "json":
        doc = {"occupation": list(parent), "m": args.m, "k": args.k,
               "spectrum": spectrum, "min": spectrum[0]}
        if dense is not None:
            doc["dense_spectrum"] = dense
        _emit(args, json.dumps(doc, indent=2) + "\n")
    elif fmt == "csv":
        _emit(args, "eigenvalue\n" + "".join(f"{x!r}\n" for x in spectrum))
    else:
        text = "".join(f"{x:.15g}\n" for x in spectrum)
        if dense is not None:
            text += "dense:\n" + "".join(f"{x:.15g}\n" for x in dense)
        _emit(args, text)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.bound is not None:
        bound = parse_occupation(args.bound)
        if args.m is None:
            raise UsageError("--bound requires -m")
        if not 0 <= args.m <= norm(bound):
            raise UsageError(f"-m must lie in [0, {norm(bound)}], got {args.m}")
        members = enumerate_restricted(args.m, bound).members
    else:
        if args.d is None or args.n is None:
            raise UsageError("enumerate needs -d and -n, or --bound and -m")
        if args.d < 1 or args.n < 0:
            raise UsageError("need d >= 1 and n >= 0")
        members = enumerate_full(args.d, args.n).members
    fmt = args.format or "text"
    if fmt == "json":
        _emit(args, json.dumps([list(x) for x in members]) + "\n")
    else:
        _emit(args, "".join(format_occupation(x) + "\n" for x in members))
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    parents = [
        p
        for d in range(2, args.max_d + 1)
        for n in range(2, args.max_n + 1)
        for p in enumerate_full(d, n)
    ]
    for p in parents:
        limits.check_vector(len(p) ** norm(p), args.dense_limit)

    def run(p):
        return p, oracle.cross_check(p, limit=args.dense_limit)

    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        results = list(pool.map(run, parents))
    failures = [(p, msg) for p, msgs in results for msg in msgs]
    elapsed = time.perf_counter() - start
    fmt = args.format or "text"
    if fmt == "json":
        doc = {
            "max_d": args.max_d, "max_n": args.max_n,
            "occupations_checked": len(parents),
            "failures": [{"occupation": list(p), "message": m} for p, m in failures],
            "elapsed_s": elapsed,
        }
        _emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        lines = [f"{format_occupation(p)}: {m}" for p, m in failures]
        lines.append(
            f"checked {len(parents)} occupations (d<={args.max_d}, n<={args.max_n}): "
            f"{len(failures)} mismatches in {elapsed:.2f}s"
        )
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if not failures else EXIT_ERROR


# -- parser --------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_global_flags(p, suppress):
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=["json", "csv", "text"], default=default)
    p.add_argument("--output", metavar="PATH", default=default)
    p.add_argument("--dense-limit", type=int, metavar="INT", default=default,
                   help=f"max dense vector length (env {limits.ENV_DENSE_LIMIT})")
    p.add_argument("--threads", type=int, metavar="INT",
                   default=argparse.SUPPRESS if suppress else 1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dicke-npt", description="Certify NPT entanglement of reduced Dicke states.")
    _add_global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="certify all reductions of one Dicke state")
    _add_global_flags(p, suppress=True)
    p.add_argument("--occupation", required=True, help="comma-separated occupations, e.g. 1,2")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("reduce", help="Schmidt weights of an m-site reduction")
    _add_global_flags(p, suppress=True)
    p.add_argument("--occupation", required=True)
    p.add_argument("-m", type=int, required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("ppt", help="partial-transpose spectrum for one (m, k)")
    _add_global_flags(p, suppress=True)
    p.add_argument("--occupation", required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--dense", action="store_true", help="also print the dense-oracle spectrum")
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("enumerate", help="list an occupation index set")
    _add_global_flags(p, suppress=True)
    p.add_argument("-d", type=int)
    p.add_argument("-n", type=int)
    p.add_argument("--bound", help="upper bound occupation; lists norm-m members below it")
    p.add_argument("-m", type=int)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("oracle-check", help="dense-oracle equivalence sweep")
    _add_global_flags(p, suppress=True)
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--max-d", type=int, default=3)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"dicke-npt: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except limits.DenseLimitError as exc:
        print(f"dicke-npt: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"dicke-npt: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
