"""Euclidean tetrahedron primitives computed from the six edge lengths.

Local vertices of a tetrahedron are labelled 0..3. An edge slot is an
unordered pair of local vertices; the six slots are kept in the fixed order
of :data:`SLOTS`, and every per-edge array in this package uses that order.

Angles and their derivatives go through the bordered Cayley-Menger matrix
``B`` (5x5, border row/column of ones, squared lengths inside).  With
``X = B^-1`` the dihedral angle between the faces opposite local vertices
``a`` and ``b`` satisfies ``cos = X[a,b] / sqrt(X[a,a] X[b,b])``, and the
derivative follows from ``dX = -X dB X``.  Coordinates are never used on the
length-only path; they appear only in :func:`oriented_volume` and in
:func:`skew_length_response`, whose input is an embedded configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateTetrahedron, FlatConfiguration

SLOTS: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

# Relative floor on the Cayley-Menger determinant, scaled by (max length)^6.
DEGENERACY_FLOOR = 1e-12


def slot_index(u: int, v: int) -> int:
    """Position of the unordered pair ``{u, v}`` in :data:`SLOTS`."""
    if u == v or not (0 <= u < 4 and 0 <= v < 4):
        raise ValueError(f"invalid edge slot ({u}, {v})")
    return SLOTS.index((min(u, v), max(u, v)))


def opposite_slot(e: int) -> int:
    u, v = SLOTS[e]
    a, b = (w for w in range(4) if w not in (u, v))
    return slot_index(a, b)


def _as_slot(e) -> int:
    if isinstance(e, (int, np.integer)):
        if not 0 <= e < 6:
            raise ValueError(f"slot index out of range: {e}")
        return int(e)
    u, v = e
    return slot_index(u, v)


@dataclass(frozen=True)
class TetrahedronLengths:
    """Six positive edge lengths, ordered as :data:`SLOTS`."""

    lengths: tuple[float, ...]

    def __post_init__(self):
        ls = tuple(float(x) for x in self.lengths)
        if len(ls) != 6:
            raise ValueError("a tetrahedron has exactly six edge lengths")
        if not all(math.isfinite(x) and x > 0 for x in ls):
            raise DegenerateTetrahedron(f"edge lengths must be positive and finite: {ls}")
        object.__setattr__(self, "lengths", ls)

    @classmethod
    def from_points(cls, points: Sequence[Sequence[float]]) -> "TetrahedronLengths":
        pts = np.asarray(points, dtype=float)
        if pts.shape != (4, 3):
            raise ValueError("expected four points in R^3")
        return cls(tuple(float(np.linalg.norm(pts[u] - pts[v])) for u, v in SLOTS))

    @classmethod
    def from_pairs(cls, pairs: Mapping[tuple[int, int], float]) -> "TetrahedronLengths":
        values = [None] * 6
        for (u, v), length in pairs.items():
            values[slot_index(u, v)] = length
        if any(x is None for x in values):
            raise ValueError("all six vertex pairs need a length")
        return cls(tuple(values))

    def length(self, u: int, v: int) -> float:
        return self.lengths[slot_index(u, v)]

    def as_array(self) -> np.ndarray:
        return np.array(self.lengths)


def _bordered_cm(t: TetrahedronLengths) -> np.ndarray:
    b = np.ones((5, 5))
    b[0, 0] = 0.0
    for s, (u, v) in enumerate(SLOTS):
        d = t.lengths[s] ** 2
        b[u + 1, v + 1] = b[v + 1, u + 1] = d
    for a in range(1, 5):
        b[a, a] = 0.0
    return b


def cayley_menger(t: TetrahedronLengths) -> float:
    """Cayley-Menger determinant; equals ``288 V^2`` for a real tetrahedron."""
    return float(np.linalg.det(_bordered_cm(t)))


def _checked_cm(t: TetrahedronLengths) -> tuple[np.ndarray, float]:
    b = _bordered_cm(t)
    det = float(np.linalg.det(b))
    if det < DEGENERACY_FLOOR * max(t.lengths) ** 6:
        raise DegenerateTetrahedron(
            f"Cayley-Menger determinant {det:.3e} below floor for lengths {t.lengths}"
        )
    return b, det


def is_realizable(t: TetrahedronLengths) -> bool:
    return cayley_menger(t) >= DEGENERACY_FLOOR * max(t.lengths) ** 6


def unsigned_volume(t: TetrahedronLengths) -> float:
    _, det = _checked_cm(t)
    return math.sqrt(det / 288.0)


def oriented_volume(a, b, c, d) -> float:
    """One sixth of the triple product ``(b - a) . ((c - a) x (d - a))``.

    Alternating in its arguments, bit for bit: the product is always
    evaluated with the points in lexicographic order and the permutation
    parity applied afterwards.  Zero means the four points are coplanar.
    """
    pts = [np.asarray(x, dtype=float) for x in (a, b, c, d)]
    order = sorted(range(4), key=lambda i: tuple(pts[i]))
    inversions = sum(order[i] > order[j] for i in range(4) for j in range(i + 1, 4))
    o, u, v, w = (pts[i] for i in order)
    vol = float(np.dot(u - o, np.cross(v - o, w - o))) / 6.0
    return -vol if inversions % 2 else vol


def _angles_and_inverse(t: TetrahedronLengths):
    b, det = _checked_cm(t)
    x = np.linalg.inv(b)
    l2 = np.square(t.as_array())
    cos = np.empty(6)
    sin = np.empty(6)
    for e, (u, v) in enumerate(SLOTS):
        # faces adjacent to edge uv are the ones opposite the other two vertices
        p, q = (w + 1 for w in range(4) if w not in (u, v))
        norm = x[p, p] * x[q, q]
        cos[e] = x[p, q] / math.sqrt(norm)
        # Jacobi: X[pp]X[qq] - X[pq]^2 = det(edge CM) / det(B) = 2 l^2 / det(B)
        sin[e] = math.sqrt(2.0 * l2[e] / (det * norm))
    return cos, sin, x


def dihedral_angles(t: TetrahedronLengths) -> np.ndarray:
    """All six interior dihedral angles, each in ``(0, pi)``."""
    cos, sin, _ = _angles_and_inverse(t)
    return np.arctan2(sin, cos)


def dihedral_angle(t: TetrahedronLengths, e) -> float:
    return float(dihedral_angles(t)[_as_slot(e)])


def dihedral_gradients(t: TetrahedronLengths) -> np.ndarray:
    """Matrix ``G[e, f] = d(angle at slot e) / d(length of slot f)``.

    The matrix is symmetric and annihilates the length vector (Schlafli).
    """
    cos, sin, x = _angles_and_inverse(t)
    ls = t.as_array()
    grad = np.empty((6, 6))
    for e, (u, v) in enumerate(SLOTS):
        p, q = (w + 1 for w in range(4) if w not in (u, v))
        xpp, xqq, xpq = x[p, p], x[q, q], x[p, q]
        root = math.sqrt(xpp * xqq)
        for f, (m, n) in enumerate(SLOTS):
            m += 1
            n += 1
            # derivative of X entries w.r.t. the squared length d_mn
            dpq = -(x[p, m] * x[n, q] + x[p, n] * x[m, q])
            dpp = -2.0 * x[p, m] * x[n, p]
            dqq = -2.0 * x[q, m] * x[n, q]
            dcos = dpq / root - 0.5 * cos[e] * (dpp / xpp + dqq / xqq)
            grad[e, f] = -dcos / sin[e] * 2.0 * ls[f]
    return grad


def dihedral_gradient(t: TetrahedronLengths, at, wrt) -> float:
    return float(dihedral_gradients(t)[_as_slot(at), _as_slot(wrt)])


def skew_length_response(a, b, c, d, e) -> float:
    """Rate ``d l_DE / d l_AB`` for tetrahedra ABCD and EABC glued along ABC.

    The other eight distances stay fixed while ``l_AB`` varies.  Points are an
    embedding of the five vertices; their triple products give the signed
    volumes entering the closed form.
    """
    pts = [np.asarray(x, dtype=float) for x in (a, b, c, d, e)]
    a, b, c, d, e = pts
    for quad in ((a, b, c, d), (e, a, b, c)):
        unsigned_volume(TetrahedronLengths.from_points(quad))
    v_abcd = oriented_volume(a, b, c, d)
    v_eabc = oriented_volume(e, a, b, c)
    v_ceda = oriented_volume(c, e, d, a)
    v_bced = oriented_volume(b, c, e, d)
    l_ab = float(np.linalg.norm(b - a))
    l_de = float(np.linalg.norm(e - d))
    if l_de == 0.0:
        raise FlatConfiguration("apexes D and E coincide")
    scale = max(l_ab, l_de, float(np.linalg.norm(c - a)), float(np.linalg.norm(c - b))) ** 3
    if abs(v_ceda) <= 1e-14 * scale or abs(v_bced) <= 1e-14 * scale:
        return 0.0
    return -(l_ab / l_de) * v_ceda * v_bced / (v_abcd * v_eabc)
