"""The invariant I_k of L(p, q): F matrix, differential form, extracted constant.

The form is ``|wedge_{C_bar} l dl| / sqrt(|det F|_C * prod 6 V_i|)``; in the
coordinates ``(rho, sigma, s, alpha)`` it equals
``|const * rho drho ^ sigma dsigma ^ ds ^ dalpha|`` and ``const`` is the
invariant.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .defect import defect_jacobian_analytic
from .errors import InvalidLensParams, SingularJacobian
from .lens import (
    LensParams,
    LensRealization,
    RealizationParams,
    admissible_k,
    edge_partition,
    length_derivatives,
    r_factor,
    realize,
    sample_params,
    validate_pq,
)
from .tetgeom import oriented_volume

# Ten-digit values printed for p = 7, keyed by (q, k).
PAPER_VALUES: dict[tuple[int, int, int], float] = {
    (7, 1, 1): 0.08100567416,
    (7, 1, 2): 0.8540328192,
    (7, 1, 3): 2.064961508,
    (7, 2, 1): 0.2630237713,
    (7, 2, 2): 1.327985278,
    (7, 2, 3): 0.4089909518,
}

DEFAULT_SAMPLES = 20
DEFAULT_SEED = 42
CONSTANCY_TOL = 1e-8
PAPER_TOL = 1e-9
SINGULAR_TOL = 1e-12


def f_matrix(realization: LensRealization) -> np.ndarray:
    """``F[i, j] = (1 / (l_i l_j)) d omega_i / d l_j`` in order ``a, b_0..b_{p-1}, c``."""
    jac = defect_jacobian_analytic(realization.complex, realization.metric)
    ls = realization.lengths
    return jac / np.outer(ls, ls)


def f_submatrix_C(f: np.ndarray, partition: tuple[list[int], list[int]]) -> np.ndarray:
    inner = partition[1]
    return f[np.ix_(inner, inner)]


def determinant(m: np.ndarray) -> float:
    """LU determinant (LAPACK getrf); the empty matrix has determinant 1."""
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 1.0
    return float(np.linalg.det(m))


def numerator_matrix(realization: LensRealization) -> np.ndarray:
    """``M[e, t] = l_e d l_e / d t`` for ``e`` in ``C_bar``, ``t`` in ``(rho, sigma, s, alpha)``."""
    lp, rp = realization.lens, realization.params
    cbar, _ = edge_partition(lp.p)
    ls = realization.lengths
    return ls[cbar, None] * length_derivatives(lp, rp)[cbar]


def numerator_coefficient(realization: LensRealization) -> float:
    """``det M``: the wedge of ``l dl`` over ``C_bar`` is ``det M drho^dsigma^ds^dalpha``."""
    return determinant(numerator_matrix(realization))


def numerator_closed_form(lp: LensParams, rp: RealizationParams) -> float:
    """Closed form of ``det M``, including the ``rho sigma`` of ``rho drho ^ sigma dsigma``."""
    p, q, k = lp.p, lp.q, lp.k
    return (
        8.0 * r_factor(lp, rp)
        * math.sin(math.pi * k / p) ** 2
        * math.sin(math.pi * q * k / p)
        * math.cos(rp.alpha + math.pi * k / p)
        * rp.rho * rp.sigma
    )


def const_from_realization(realization: LensRealization) -> float:
    rp = realization.params
    p = realization.lens.p
    m = numerator_matrix(realization)
    num = determinant(m)
    # Hadamard bound as the natural scale of det M
    if abs(num) <= SINGULAR_TOL * float(np.prod(np.linalg.norm(m, axis=1))):
        raise SingularJacobian(f"C_bar lengths do not parametrize the realization at {rp}")
    fc = f_submatrix_C(f_matrix(realization), edge_partition(p))
    denom = math.sqrt(abs(determinant(fc) * np.prod(6.0 * realization.volumes)))
    return abs(num) / (rp.rho * rp.sigma * denom)


def invariant_const(lp: LensParams, rp: RealizationParams) -> float:
    return const_from_realization(realize(lp, rp))


def conjecture_value(p: int, q: int, k: int) -> float:
    lp = LensParams(p, q, k)
    return 16.0 / p * math.sin(math.pi * k / p) ** 2 * math.sin(math.pi * lp.q * k / p) ** 2


def fold_k(k: int, p: int) -> int:
    """Representative of ``+-k mod p`` in ``0..p//2``."""
    m = k % p
    return min(m, p - m)


def conjecture_multiset(p: int, q: int) -> list[float]:
    return sorted(conjecture_value(p, q, k) for k in admissible_k(p))


def _same_multiset(xs, ys, rtol: float) -> bool:
    xs, ys = sorted(xs), sorted(ys)
    return len(xs) == len(ys) and all(math.isclose(x, y, rel_tol=rtol) for x, y in zip(xs, ys))


def homeomorphism_consistency(p: int, q1: int, q2: int, rtol: float = 1e-12):
    """Compare the invariant multisets of ``L(p, q1)`` and ``L(p, q2)``.

    Returns ``(equal, witness)``.  The witness maps each admissible ``k`` for
    ``q1`` to the ``k'`` for ``q2`` carrying the same value: the identity when
    ``q2 = +-q1``, ``k -> +-k q1 mod p`` when ``q2 = +-q1^-1``, otherwise
    ``None``.
    """
    validate_pq(p, q1)
    validate_pq(p, q2)
    equal = _same_multiset(conjecture_multiset(p, q1), conjecture_multiset(p, q2), rtol)
    ks = admissible_k(p)
    witness: Optional[dict[int, int]] = None
    if q2 % p in (q1 % p, (-q1) % p):
        witness = {k: k for k in ks}
    elif (q1 * q2) % p in (1, p - 1):
        witness = {k: fold_k(k * q1, p) for k in ks}
    return equal, witness


def explicit_minor(p: int, q: int, volumes) -> np.ndarray:
    """Explicit ``6 F|_C`` printed for L(7,1) and L(7,2), entries in ``1/V_i``."""
    if p != 7 or q not in (1, 2):
        raise InvalidLensParams("explicit matrices exist only for L(7,1) and L(7,2)")
    w = 1.0 / np.asarray(volumes, dtype=float)
    if q == 1:
        m = np.zeros((5, 5))
        for r in range(5):
            i = r + 1
            m[r, r] = -4 * w[i] - w[i - 1] - w[i + 1]
            if r + 1 < 5:
                m[r, r + 1] = m[r + 1, r] = 2 * w[i] + 2 * w[i + 1]
            if r + 2 < 5:
                m[r, r + 2] = m[r + 2, r] = -w[i + 1]
        return m

    def sig(*idx):
        return sum(w[i] for i in idx)

    return np.array([
        [-sig(0, 1, 2, 3), -w[2] + w[1] + w[3], w[2] + w[3], -w[3], -w[0]],
        [-w[2] + w[1] + w[3], -sig(1, 2, 3, 4), -w[3] + w[2] + w[4], w[3] + w[4], -w[4]],
        [w[2] + w[3], -w[3] + w[2] + w[4], -sig(2, 3, 4, 5), -w[4] + w[3] + w[5], w[4] + w[5]],
        [-w[3], w[3] + w[4], -w[4] + w[3] + w[5], -sig(3, 4, 5, 6), -w[5] + w[4] + w[6]],
        [-w[0], -w[4], w[4] + w[5], -w[5] + w[4] + w[6], -sig(4, 5, 6, 0)],
    ])


def relative_residual(a: np.ndarray, b: np.ndarray) -> float:
    a, b = np.asarray(a), np.asarray(b)
    scale = np.maximum(np.abs(b), np.max(np.abs(b)) * 1e-3)
    return float(np.max(np.abs(a - b) / scale))


def simplified_entries_check(realization: LensRealization) -> dict[str, float]:
    """Residuals of the L(p,1) diagonal and next-to-diagonal entries of ``F|_C``.

    Each slot-sum entry is compared with the unsimplified volume expressions
    (built from coordinate triple products of specific vertex copies) and
    with their simplified ``1/V_i`` forms.
    """
    lp = realization.lens
    if lp.q != 1:
        raise InvalidLensParams("the entry formulas are stated for q = 1")
    p = lp.p
    b, c = realization.b_points, realization.c_points
    c0, c1 = c[0], c[1]

    def bb(j):
        return b[j % p]

    def vol(*pts):
        return oriented_volume(*pts)

    v = realization.volumes
    f = f_matrix(realization)
    fc = f_submatrix_C(f, edge_partition(p))
    n = p - 2
    diag_f = np.array([fc[r, r] for r in range(n)])
    off_f = np.array([fc[r, r + 1] for r in range(n - 1)])

    diag_long, diag_short = [], []
    for i in range(1, p - 1):
        t1 = (vol(c0, c1, bb(i + 2), bb(i)) * vol(c0, bb(i), bb(i + 1), bb(i + 2))
              / (vol(c0, c1, bb(i + 2), bb(i + 1)) * vol(c0, c1, bb(i + 1), bb(i))
                 * vol(c1, bb(i), bb(i + 1), bb(i + 2))))
        t2 = (vol(c0, c1, bb(i + 1), bb(i - 1)) * vol(c1, bb(i - 1), bb(i), bb(i + 1))
              / (vol(c0, c1, bb(i), bb(i - 1)) * vol(c0, c1, bb(i + 1), bb(i))
                 * vol(c0, bb(i - 1), bb(i), bb(i + 1))))
        t3 = 2.0 / vol(c0, c1, bb(i + 1), bb(i))
        diag_long.append(-(t1 + t2 + t3) / 6.0)
        diag_short.append(-4 / (6 * v[i]) - 1 / (6 * v[i - 1]) - 1 / (6 * v[(i + 1) % p]))

    off_long, off_short = [], []
    for i in range(1, p - 2):
        t1 = vol(c1, bb(i), bb(i + 1), bb(i + 2)) / (
            vol(c0, c1, bb(i + 1), bb(i)) * vol(c0, bb(i), bb(i + 1), bb(i + 2)))
        t2 = vol(c0, c1, bb(i + 2), bb(i)) / (
            vol(c0, c1, bb(i + 1), bb(i)) * vol(c0, c1, bb(i + 2), bb(i + 1)))
        t3 = vol(c0, bb(i), bb(i + 1), bb(i + 2)) / (
            vol(c0, c1, bb(i + 2), bb(i + 1)) * vol(c1, bb(i), bb(i + 1), bb(i + 2)))
        off_long.append((t1 + t2 + t3) / 6.0)
        off_short.append(2 / (6 * v[i]) + 2 / (6 * v[i + 1]))

    return {
        "diagonal_unsimplified": relative_residual(diag_f, diag_long),
        "diagonal_simplified": relative_residual(diag_f, diag_short),
        "offdiagonal_unsimplified": relative_residual(off_f, off_long),
        "offdiagonal_simplified": relative_residual(off_f, off_short),
        "unsimplified_vs_simplified": max(
            relative_residual(diag_long, diag_short), relative_residual(off_long, off_short)
        ),
    }


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator keyed by ``(seed, *key)`` so sweep rows do not share streams."""
    return np.random.default_rng(np.random.SeedSequence([seed, *key]))


@dataclass
class InvariantReport:
    p: int
    q: int
    k: int
    samples: list[float]
    mean: float
    max_dev: float
    conjecture: float
    rel_err: float
    constancy_tol: float = CONSTANCY_TOL
    seed: Optional[int] = None
    sample_params: list[list[float]] = field(default_factory=list)
    paper_ref_value: Optional[float] = None
    paper_rel_err: Optional[float] = None

    @property
    def constant(self) -> bool:
        return self.max_dev <= self.constancy_tol

    def to_dict(self) -> dict:
        data = asdict(self)
        data["constant"] = self.constant
        if self.paper_ref_value is None:
            data.pop("paper_ref_value")
            data.pop("paper_rel_err")
        return data


def compute_report(
    p: int,
    q: int,
    k: int,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    constancy_tol: float = CONSTANCY_TOL,
) -> InvariantReport:
    """Evaluate the constant at ``samples`` random generic realizations."""
    if samples < 1:
        raise ValueError("need at least one sample")
    lp = LensParams(p, q, k)
    rng = make_rng(seed, p, q, k)
    values, params = [], []
    for _ in range(samples):
        rp = sample_params(lp, rng)
        values.append(invariant_const(lp, rp))
        params.append([rp.rho, rp.sigma, rp.s, rp.alpha])
    mean = math.fsum(values) / len(values)
    conj = conjecture_value(p, q, k)
    paper = PAPER_VALUES.get((p, q, k))
    return InvariantReport(
        p=p, q=q, k=k,
        samples=values,
        mean=mean,
        max_dev=(max(values) - min(values)) / mean,
        conjecture=conj,
        rel_err=abs(mean - conj) / conj,
        constancy_tol=constancy_tol,
        seed=seed,
        sample_params=params,
        paper_ref_value=paper,
        paper_rel_err=None if paper is None else abs(mean - paper) / paper,
    )


def sweep_cases(p_min: int = 3, p_max: int = 12) -> list[tuple[int, int, int]]:
    cases = []
    for p in range(p_min, p_max + 1):
        for q in range(1, p):
            if math.gcd(p, q) != 1:
                continue
            cases.extend((p, q, k) for k in admissible_k(p))
    return cases


def computed_multiset(p: int, q: int, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED):
    return sorted(compute_report(p, q, k, samples, seed).mean for k in admissible_k(p))
