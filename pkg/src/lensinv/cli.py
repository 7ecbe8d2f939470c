"""Command-line front end.

Exit codes: 0 all checks pass, 1 a tolerance was exceeded, 2 invalid lens
parameters, 3 no generic realization found.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Callable, Sequence

import numpy as np

from . import invariant as inv
from .defect import defect_angles, defect_jacobian_analytic, defect_jacobian_fd
from .errors import DegenerateRealization, InvalidLensParams, SingularJacobian
from .lens import (
    LensParams,
    admissible_k,
    edge_partition,
    realize,
    reference_params,
    sample_params,
)

EXIT_OK, EXIT_TOL, EXIT_PARAMS, EXIT_DEGENERATE = 0, 1, 2, 3

CSV_COLUMNS = ["p", "q", "k", "mean_const", "max_dev", "conjecture", "rel_err"]

CSV_HELP = (
    "CSV columns: p,q,k,mean_const,max_dev,conjecture,rel_err "
    "(max_dev is (max-min)/mean over samples; rel_err is |mean-conjecture|/conjecture)."
)


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, (float, np.floating)) else str(x)


def _report_row(r: inv.InvariantReport) -> dict:
    return {
        "p": r.p, "q": r.q, "k": r.k,
        "mean_const": r.mean, "max_dev": r.max_dev,
        "conjecture": r.conjecture, "rel_err": r.rel_err,
    }


def _render(payload: dict, rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])
        return buf.getvalue()
    widths = {c: max(len(c), *(len(_short(row[c])) for row in rows)) if rows else len(c)
              for c in columns}
    lines = ["  ".join(c.rjust(widths[c]) for c in columns)]
    for row in rows:
        lines.append("  ".join(_short(row[c]).rjust(widths[c]) for c in columns))
    summary = payload.get("summary")
    if summary:
        lines.append(summary)
    return "\n".join(lines) + "\n"


def _short(x) -> str:
    if isinstance(x, bool):
        return "PASS" if x else "FAIL"
    if isinstance(x, (float, np.floating)):
        return f"{x:.12g}"
    return str(x)


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_compute(args) -> int:
    report = inv.compute_report(args.p, args.q, args.k, args.samples, args.seed, args.tol)
    payload = report.to_dict()
    row = _report_row(report)
    row["constant"] = report.constant
    columns = CSV_COLUMNS if args.format == "csv" else CSV_COLUMNS + ["constant"]
    _emit(_render(payload, [row], columns, args.format), args.output)
    return EXIT_OK if report.constant and report.rel_err <= args.tol else EXIT_TOL


def cmd_verify_paper(args) -> int:
    rows, reports = [], []
    for (p, q, k), ref in inv.PAPER_VALUES.items():
        report = inv.compute_report(p, q, k, args.samples, args.seed)
        reports.append(report.to_dict())
        rows.append({
            "p": p, "q": q, "k": k, "computed": report.mean, "paper": ref,
            "rel_err": report.paper_rel_err, "pass": report.paper_rel_err <= args.tol,
        })
    passed = sum(r["pass"] for r in rows)
    payload = {"tolerance": args.tol, "passed": passed, "total": len(rows),
               "rows": rows, "reports": reports,
               "summary": f"{passed}/{len(rows)} within {args.tol:g}"}
    _emit(_render(payload, rows, ["p", "q", "k", "computed", "paper", "rel_err", "pass"],
                  args.format), args.output)
    return EXIT_OK if passed == len(rows) else EXIT_TOL


def cmd_verify_matrices(args) -> int:
    rows = []
    for q in (1, 2):
        for k in admissible_k(7):
            lp = LensParams(7, q, k)
            rng = inv.make_rng(args.seed, 7, q, k)
            worst = 0.0
            entries = 0.0
            for _ in range(args.samples):
                real = realize(lp, sample_params(lp, rng))
                fc = inv.f_submatrix_C(inv.f_matrix(real), edge_partition(7))
                ref = inv.explicit_minor(7, q, real.volumes) / 6.0
                worst = max(worst, inv.relative_residual(fc, ref))
                if q == 1:
                    entries = max(entries, *inv.simplified_entries_check(real).values())
            rows.append({"p": 7, "q": q, "k": k, "matrix_residual": worst,
                         "entry_residual": entries,
                         "pass": worst <= args.tol and entries <= args.tol})
    passed = sum(r["pass"] for r in rows)
    payload = {"tolerance": args.tol, "rows": rows,
               "summary": f"{passed}/{len(rows)} within {args.tol:g}"}
    _emit(_render(payload, rows, ["p", "q", "k", "matrix_residual", "entry_residual", "pass"],
                  args.format), args.output)
    return EXIT_OK if passed == len(rows) else EXIT_TOL


def cmd_sweep(args) -> int:
    rows, reports, flagged = [], [], []
    for p, q, k in inv.sweep_cases(args.p_min, args.p_max):
        try:
            report = inv.compute_report(p, q, k, args.samples, args.seed, args.tol)
        except (DegenerateRealization, SingularJacobian) as err:
            flagged.append({"p": p, "q": q, "k": k, "error": str(err)})
            continue
        reports.append(report)
        rows.append(_report_row(report))
    ok = all(r.rel_err <= args.tol and r.constant for r in reports) and not flagged
    payload: dict = {"tolerance": args.tol, "rows": rows, "flagged": flagged}
    if args.pairs:
        pairs = []
        for p in range(max(args.p_min, 3), args.p_max + 1):
            qs = [q for q in range(1, p) if np.gcd(p, q) == 1]
            for i, q1 in enumerate(qs):
                for q2 in qs[i + 1:]:
                    equal, witness = inv.homeomorphism_consistency(p, q1, q2)
                    pairs.append({"p": p, "q1": q1, "q2": q2, "equal": equal,
                                  "witness": None if witness is None
                                  else {str(a): b for a, b in witness.items()}})
                    ok = ok and (equal == (witness is not None))
        payload["pairs"] = pairs
    worst = max((r["rel_err"] for r in rows), default=0.0)
    payload["summary"] = f"{len(rows)} rows, max rel_err {worst:.3e}, {len(flagged)} flagged"
    _emit(_render(payload, rows, CSV_COLUMNS, args.format), args.output)
    return EXIT_OK if ok else EXIT_TOL


def cmd_check_derivatives(args) -> int:
    lp = LensParams(args.p, args.q, args.k)
    rng = inv.make_rng(args.seed, args.p, args.q, args.k)
    if args.random:
        params = [sample_params(lp, rng) for _ in range(args.samples)]
    else:
        params = [reference_params(lp)]
    rows = []
    for i, rp in enumerate(params):
        real = realize(lp, rp)
        analytic = defect_jacobian_analytic(real.complex, real.metric)
        fd = defect_jacobian_fd(real.complex, real.metric, args.h)
        closure = float(np.max(np.abs(defect_angles(real.complex, real.metric))))
        diff = float(np.max(np.abs(analytic - fd)))
        rows.append({"sample": i, "max_abs_diff": diff, "max_defect": closure,
                     "pass": diff <= args.tol and closure <= 1e-10})
    passed = sum(r["pass"] for r in rows)
    payload = {"p": args.p, "q": args.q, "k": args.k, "h": args.h, "tolerance": args.tol,
               "rows": rows, "summary": f"{passed}/{len(rows)} within {args.tol:g}"}
    _emit(_render(payload, rows, ["sample", "max_abs_diff", "max_defect", "pass"], args.format),
          args.output)
    return EXIT_OK if passed == len(rows) else EXIT_TOL


def _positive(kind: Callable):
    def parse(text: str):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text}")
        return value
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lensinv",
        description="Geometric invariants I_k of lens spaces L(p,q) from Euclidean metric data.",
        epilog=CSV_HELP,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, tol: float):
        sp.add_argument("--samples", type=_positive(int), default=inv.DEFAULT_SAMPLES)
        sp.add_argument("--seed", type=int, default=inv.DEFAULT_SEED)
        sp.add_argument("--tol", type=_positive(float), default=tol)
        sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")

    sp = sub.add_parser("compute", help="invariant for one (p, q, k)", epilog=CSV_HELP)
    for name in ("p", "q", "k"):
        sp.add_argument(f"--{name}", type=int, required=True)
    common(sp, inv.CONSTANCY_TOL)
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("verify-paper", help="the six published L(7,q) values")
    common(sp, inv.PAPER_TOL)
    sp.set_defaults(func=cmd_verify_paper)

    sp = sub.add_parser("verify-matrices", help="F|_C against the explicit L(7,1), L(7,2) matrices")
    common(sp, 1e-10)
    sp.set_defaults(func=cmd_verify_matrices)

    sp = sub.add_parser("sweep", help="compare with the closed form over a range of p",
                        epilog=CSV_HELP)
    sp.add_argument("--p-min", type=int, default=3)
    sp.add_argument("--p-max", type=int, default=12)
    sp.add_argument("--pairs", action="store_true",
                    help="also compare value multisets for every pair q1 < q2")
    common(sp, inv.CONSTANCY_TOL)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("check-derivatives", help="analytic vs finite-difference defect Jacobian")
    for name, default in (("p", 7), ("q", 1), ("k", 1)):
        sp.add_argument(f"--{name}", type=int, default=default)
    sp.add_argument("--h", type=_positive(float), default=1e-6)
    sp.add_argument("--random", action="store_true",
                    help="use --samples random realizations instead of the reference one "
                         "(thin tetrahedra can push the O(h^2) error above --tol)")
    common(sp, 1e-6)
    sp.set_defaults(func=cmd_check_derivatives, samples=3)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidLensParams as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARAMS
    except (DegenerateRealization, SingularJacobian) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
