"""Acceptance suite: one test and one summary line per criterion.

Tolerances are the stated ones; a red line is reported, never relaxed.
"""

import time

import numpy as np
import pytest

from lensinv import invariant as inv
from lensinv.defect import defect_angles, defect_jacobian_analytic, defect_jacobian_fd
from lensinv.lens import LensParams, admissible_k, edge_partition, realize, reference_params, sample_params

import case_fixtures as cf
from conftest import ACCEPTANCE_LINES

SAMPLES = inv.DEFAULT_SAMPLES
SEED = inv.DEFAULT_SEED


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
    return ok


@pytest.fixture(scope="module")
def sweep():
    start = time.perf_counter()
    reports = [inv.compute_report(p, q, k, SAMPLES, SEED) for p, q, k in inv.sweep_cases(3, 12)]
    return reports, time.perf_counter() - start


def test_1_published_values():
    start = time.perf_counter()
    rows = []
    for (p, q, k), printed in inv.PAPER_VALUES.items():
        report = inv.compute_report(p, q, k, SAMPLES, SEED)
        rows.append(((p, q, k), report.mean, abs(report.mean - printed) / printed))
    elapsed = time.perf_counter() - start
    bad = [f"L({p},{q}) k={k} rel {err:.2e}" for (p, q, k), _, err in rows if err > inv.PAPER_TOL]
    ok = not bad and elapsed < 10
    detail = (f"{len(rows) - len(bad)}/6 within {inv.PAPER_TOL:g}, {elapsed:.2f}s"
              + (f"; over: {', '.join(bad)}" if bad else ""))
    assert record(1, "published L(7,q) values", ok, detail), detail


def test_2_constancy(sweep):
    reports, _ = sweep
    worst = max(reports, key=lambda r: r.max_dev)
    ok = all(len(r.samples) >= 20 for r in reports) and worst.max_dev <= 1e-8
    detail = (f"{len(reports)} cases x {SAMPLES} samples, max spread {worst.max_dev:.2e} "
              f"at L({worst.p},{worst.q}) k={worst.k}")
    assert record(2, "constancy", ok, detail), detail


def test_3_matrix_fidelity():
    matrix, entries = 0.0, 0.0
    for q in (1, 2):
        for k in admissible_k(7):
            lp = LensParams(7, q, k)
            rng = inv.make_rng(SEED, 7, q, k)
            for _ in range(SAMPLES):
                real = realize(lp, sample_params(lp, rng))
                fc = inv.f_submatrix_C(inv.f_matrix(real), edge_partition(7))
                matrix = max(matrix, inv.relative_residual(fc, inv.explicit_minor(7, q, real.volumes) / 6))
                if q == 1:
                    entries = max(entries, *inv.simplified_entries_check(real).values())
    ok = matrix <= 1e-10 and entries <= 1e-10
    detail = f"explicit minors {matrix:.2e}, simplified entries {entries:.2e} (tol 1e-10)"
    assert record(3, "matrix fidelity", ok, detail), detail


def test_4_derivative_oracle():
    worst_fd, worst_case = 0.0, 0.0
    for q in (1, 2):
        for k in admissible_k(7):
            lp = LensParams(7, q, k)
            real = realize(lp, reference_params(lp))
            diff = (defect_jacobian_analytic(real.complex, real.metric)
                    - defect_jacobian_fd(real.complex, real.metric, 1e-6))
            worst_fd = max(worst_fd, float(np.max(np.abs(diff))))
    fixtures = [
        (cf.three_star, "DE", "AB", cf.case1_expected),
        (cf.shared_face, "AC", "AB", cf.case2_expected),
        (cf.three_star, "DE", "DE", cf.case3_expected),
        (cf.four_star, "DE", "DE", cf.case4_expected),
    ]
    for factory, row, col, expected in fixtures:
        cx, m, edge = factory()
        jac = defect_jacobian_analytic(cx, m)
        worst_fd = max(worst_fd, float(np.max(np.abs(jac - defect_jacobian_fd(cx, m, 1e-6)))))
        want = expected()
        worst_case = max(worst_case, abs(jac[edge(row), edge(col)] - want) / abs(want))
    ok = worst_fd <= 1e-6 and worst_case <= 1e-9
    detail = f"analytic vs FD {worst_fd:.2e} (tol 1e-6), cases 1-4 vs formulas {worst_case:.2e} (tol 1e-9)"
    assert record(4, "derivative oracle", ok, detail), detail


def test_5_closure():
    worst, count = 0.0, 0
    for p, q, k in inv.sweep_cases(3, 12):
        lp = LensParams(p, q, k)
        rng = inv.make_rng(SEED, p, q, k)
        for _ in range(SAMPLES if p == 7 else 2):
            real = realize(lp, sample_params(lp, rng))
            worst = max(worst, float(np.max(np.abs(defect_angles(real.complex, real.metric)))))
            count += 1
    ok = worst <= 1e-10
    detail = f"{count} realizations, max |omega| {worst:.2e} (tol 1e-10)"
    assert record(5, "closure", ok, detail), detail


def test_6_numerator_identity():
    worst = 0.0
    for p, q, k in inv.sweep_cases(3, 12):
        lp = LensParams(p, q, k)
        rng = inv.make_rng(SEED, p, q, k)
        for _ in range(3):
            real = realize(lp, sample_params(lp, rng))
            got = inv.numerator_coefficient(real)
            want = inv.numerator_closed_form(lp, real.params)
            worst = max(worst, abs(got - want) / abs(want))
    ok = worst <= 1e-10
    detail = f"max relative deviation {worst:.2e} (tol 1e-10)"
    assert record(6, "numerator identity", ok, detail), detail


def test_7_conjecture_sweep(sweep):
    reports, elapsed = sweep
    worst = max(reports, key=lambda r: r.rel_err)
    ok = worst.rel_err <= 1e-8 and elapsed < 60
    detail = (f"{len(reports)} cases p=3..12, max rel_err {worst.rel_err:.2e} "
              f"at L({worst.p},{worst.q}) k={worst.k}, {elapsed:.1f}s")
    assert record(7, "closed-form sweep", ok, detail), detail


def test_8_homeomorphism_consistency():
    def computed(q):
        return inv.computed_multiset(7, q, SAMPLES, SEED)

    def same(xs, ys):
        return inv._same_multiset(xs, ys, 1e-8)

    checks = {
        "(7,2)=(7,4)": (inv.homeomorphism_consistency(7, 2, 4)[0], same(computed(2), computed(4)), True),
        "(7,1)=(7,6)": (inv.homeomorphism_consistency(7, 1, 6)[0], same(computed(1), computed(6)), True),
        "(7,1)!=(7,2)": (inv.homeomorphism_consistency(7, 1, 2)[0], same(computed(1), computed(2)), False),
    }
    ok = all(formula == want and numeric == want for formula, numeric, want in checks.values())
    detail = ", ".join(f"{name} {'ok' if f == w and n == w else 'WRONG'}"
                       for name, (f, n, w) in checks.items())
    assert record(8, "homeomorphism consistency", ok, detail), detail
