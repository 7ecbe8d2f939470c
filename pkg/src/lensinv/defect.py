"""Pre-simplicial complexes with edge lengths, defect angles and their Jacobian.

Edge classes are not determined by vertex pairs: a tetrahedron carries an
explicit map from its six slots to edge classes, and several slots of one
tetrahedron may land in the same class.  Every quantity below is a signed
sum over (tetrahedron, slot) incidences, so coinciding edges need no special
treatment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateTetrahedron, InvalidMetric
from .tetgeom import SLOTS, TetrahedronLengths, dihedral_angles, dihedral_gradients

PERMITTED_TOL = 1e-9

FACES: tuple[tuple[int, int, int], ...] = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))


@dataclass(frozen=True)
class Tetrahedron:
    """Four local vertices mapped to vertex classes, six slots to edge classes."""

    vertices: tuple[int, int, int, int]
    edges: tuple[int, int, int, int, int, int]

    def slots_of(self, edge_class: int) -> list[int]:
        return [s for s, e in enumerate(self.edges) if e == edge_class]


@dataclass(frozen=True)
class FaceGluing:
    """Identifies local vertices ``first[1]`` of tetrahedron ``first[0]`` with
    ``second[1]`` of tetrahedron ``second[0]``, position by position."""

    first: tuple[int, tuple[int, int, int]]
    second: tuple[int, tuple[int, int, int]]


@dataclass(frozen=True)
class PreComplex:
    vertex_count: int
    edge_classes: tuple[str, ...]
    tetrahedra: tuple[Tetrahedron, ...]
    gluings: tuple[FaceGluing, ...] = field(default=())

    def __post_init__(self):
        n = len(self.edge_classes)
        used = set()
        for t in self.tetrahedra:
            if len(t.vertices) != 4 or len(t.edges) != 6:
                raise ValueError("tetrahedra need 4 vertices and 6 edge slots")
            if any(not 0 <= v < self.vertex_count for v in t.vertices):
                raise ValueError(f"vertex class out of range in {t}")
            if any(not 0 <= e < n for e in t.edges):
                raise ValueError(f"edge class out of range in {t}")
            used.update(t.edges)
        missing = set(range(n)) - used
        if missing:
            raise ValueError(f"edge classes not used by any tetrahedron: {sorted(missing)}")

    @property
    def edge_count(self) -> int:
        return len(self.edge_classes)

    def edge_index(self, name: str) -> int:
        return self.edge_classes.index(name)

    def faces(self) -> list[tuple[int, frozenset]]:
        return [(i, frozenset(f)) for i in range(len(self.tetrahedra)) for f in FACES]

    def unglued_faces(self) -> list[tuple[int, frozenset]]:
        """Faces that are not glued exactly once; empty for a closed complex."""
        seen: dict[tuple[int, frozenset], int] = {}
        for g in self.gluings:
            for tet, verts in (g.first, g.second):
                key = (tet, frozenset(verts))
                seen[key] = seen.get(key, 0) + 1
        return [f for f in self.faces() if seen.get(f, 0) != 1]

    def is_closed(self) -> bool:
        return not self.unglued_faces()

    def induced_classes(self) -> tuple[list[int], list[int]]:
        """Vertex and edge classes generated by the face gluings alone.

        Returns, per (tetrahedron, local vertex) and per (tetrahedron, slot),
        a representative label; labels are canonical (first occurrence order).
        """
        nt = len(self.tetrahedra)
        vparent = list(range(4 * nt))
        eparent = list(range(6 * nt))

        def find(parent, x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(parent, x, y):
            rx, ry = find(parent, x), find(parent, y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        for g in self.gluings:
            (t1, f1), (t2, f2) = g.first, g.second
            for i in range(3):
                union(vparent, 4 * t1 + f1[i], 4 * t2 + f2[i])
            for i, j in ((0, 1), (0, 2), (1, 2)):
                s1 = SLOTS.index(tuple(sorted((f1[i], f1[j]))))
                s2 = SLOTS.index(tuple(sorted((f2[i], f2[j]))))
                union(eparent, 6 * t1 + s1, 6 * t2 + s2)

        def relabel(parent, size):
            labels: dict[int, int] = {}
            return [labels.setdefault(find(parent, x), len(labels)) for x in range(size)]

        return relabel(vparent, 4 * nt), relabel(eparent, 6 * nt)

    def euler_characteristic(self) -> int:
        faces = len(self.gluings) if self.is_closed() else None
        if faces is None:
            raise ValueError("Euler characteristic needs a closed complex")
        return self.vertex_count - self.edge_count + faces - len(self.tetrahedra)

    def to_dict(self) -> dict:
        return {
            "vertex_count": self.vertex_count,
            "edge_classes": list(self.edge_classes),
            "tetrahedra": [
                {"vertices": list(t.vertices), "edges": list(t.edges)} for t in self.tetrahedra
            ],
            "gluings": [
                [[g.first[0], list(g.first[1])], [g.second[0], list(g.second[1])]]
                for g in self.gluings
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PreComplex":
        return cls(
            vertex_count=int(data["vertex_count"]),
            edge_classes=tuple(data["edge_classes"]),
            tetrahedra=tuple(
                Tetrahedron(tuple(t["vertices"]), tuple(t["edges"])) for t in data["tetrahedra"]
            ),
            gluings=tuple(
                FaceGluing((a[0], tuple(a[1])), (b[0], tuple(b[1])))
                for a, b in data.get("gluings", [])
            ),
        )


@dataclass(frozen=True)
class MetricData:
    """Length per edge class and a sign (+1/-1) per tetrahedron."""

    lengths: tuple[float, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(float(x) for x in self.lengths))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if not all(math.isfinite(x) and x > 0 for x in self.lengths):
            raise InvalidMetric("edge lengths must be positive and finite")
        if any(s not in (1, -1) for s in self.signs):
            raise InvalidMetric("tetrahedron signs must be +1 or -1")

    def with_length(self, edge: int, value: float) -> "MetricData":
        ls = list(self.lengths)
        ls[edge] = value
        return MetricData(tuple(ls), self.signs)

    def to_dict(self) -> dict:
        return {"lengths": list(self.lengths), "signs": list(self.signs)}

    @classmethod
    def from_dict(cls, data: dict) -> "MetricData":
        return cls(tuple(data["lengths"]), tuple(data["signs"]))


def _check(c: PreComplex, m: MetricData) -> None:
    if len(m.lengths) != c.edge_count:
        raise InvalidMetric(f"{len(m.lengths)} lengths for {c.edge_count} edge classes")
    if len(m.signs) != len(c.tetrahedra):
        raise InvalidMetric(f"{len(m.signs)} signs for {len(c.tetrahedra)} tetrahedra")


def tetrahedron_lengths(c: PreComplex, m: MetricData, index: int) -> TetrahedronLengths:
    return TetrahedronLengths(tuple(m.lengths[e] for e in c.tetrahedra[index].edges))


def wrap_angle(x):
    """Representative of ``x`` modulo 2*pi in ``(-pi, pi]``."""
    y = np.remainder(np.asarray(x, dtype=float) + math.pi, 2.0 * math.pi) - math.pi
    y = np.where(y == -math.pi, math.pi, y)
    return y if y.ndim else float(y)


def _tet_data(c: PreComplex, m: MetricData, index: int, fn):
    t = tetrahedron_lengths(c, m, index)
    try:
        return fn(t)
    except DegenerateTetrahedron as err:
        raise DegenerateTetrahedron(f"tetrahedron {index}: {err}") from err


def signed_angle_sums(c: PreComplex, m: MetricData) -> np.ndarray:
    """Unreduced ``sum sign(T) * angle`` around each edge class (equals ``-omega``)."""
    _check(c, m)
    total = np.zeros(c.edge_count)
    for i, tet in enumerate(c.tetrahedra):
        angles = _tet_data(c, m, i, dihedral_angles)
        for s, e in enumerate(tet.edges):
            total[e] += m.signs[i] * angles[s]
    return total


def defect_angles(c: PreComplex, m: MetricData) -> np.ndarray:
    """Defect angle per edge class, reduced to ``(-pi, pi]``."""
    return wrap_angle(-signed_angle_sums(c, m))


def is_permitted(c: PreComplex, m: MetricData, tol: float = PERMITTED_TOL) -> bool:
    return bool(np.max(np.abs(defect_angles(c, m))) <= tol)


def defect_jacobian_analytic(c: PreComplex, m: MetricData) -> np.ndarray:
    """``A[a, b] = d omega_a / d l_b`` as a sum over slot pairs in each tetrahedron."""
    _check(c, m)
    n = c.edge_count
    jac = np.zeros((n, n))
    for i, tet in enumerate(c.tetrahedra):
        grad = _tet_data(c, m, i, dihedral_gradients)
        idx = np.asarray(tet.edges)
        # np.add.at accumulates repeated (row, col) pairs from coinciding slots
        np.add.at(jac, (idx[:, None], idx[None, :]), -m.signs[i] * grad)
    return jac


def defect_jacobian_fd(c: PreComplex, m: MetricData, h: float = 1e-6) -> np.ndarray:
    """Central finite differences of :func:`defect_angles`, column by column."""
    if h <= 0:
        raise ValueError("step must be positive")
    _check(c, m)
    n = c.edge_count
    jac = np.zeros((n, n))
    for b in range(n):
        lb = m.lengths[b]
        plus = defect_angles(c, m.with_length(b, lb + h))
        minus = defect_angles(c, m.with_length(b, lb - h))
        jac[:, b] = wrap_angle(plus - minus) / (2.0 * h)
    return jac


def complex_from_points(
    points: Sequence[Sequence[float]],
    tetrahedra: Sequence[Sequence[int]],
    names: Sequence[str] | None = None,
) -> tuple[PreComplex, MetricData]:
    """Embedded simplicial complex: edges are vertex pairs, signs from orientation.

    Useful for fixtures where every tetrahedron is given by four distinct
    points of R^3.  Edge classes are named ``"XY"`` from ``names`` (default:
    vertex indices).
    """
    from .tetgeom import oriented_volume

    pts = np.asarray(points, dtype=float)
    labels = list(names) if names is not None else [str(i) for i in range(len(pts))]
    edge_ids: dict[tuple[int, int], int] = {}
    tets = []
    signs = []
    for quad in tetrahedra:
        edges = []
        for u, v in SLOTS:
            key = (min(quad[u], quad[v]), max(quad[u], quad[v]))
            edges.append(edge_ids.setdefault(key, len(edge_ids)))
        tets.append(Tetrahedron(tuple(quad), tuple(edges)))
        vol = oriented_volume(*(pts[v] for v in quad))
        if vol == 0.0:
            raise DegenerateTetrahedron(f"flat tetrahedron {tuple(quad)}")
        signs.append(1 if vol > 0 else -1)
    keys = sorted(edge_ids, key=edge_ids.get)
    cx = PreComplex(
        vertex_count=len(pts),
        edge_classes=tuple(labels[u] + labels[v] for u, v in keys),
        tetrahedra=tuple(tets),
    )
    lengths = tuple(float(np.linalg.norm(pts[u] - pts[v])) for u, v in keys)
    return cx, MetricData(lengths, tuple(signs))
